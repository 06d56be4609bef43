#include "fch/bifunctor.hpp"
#include "fch/random.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <numeric>

using namespace fch;

namespace {

ModMor zmap(const ModuleObj& a, const ModuleObj& b, std::vector<std::vector<long>> rows) {
  return ModMor::make(a, b, IntMatrix::from_rows(rows));
}

std::vector<Int> cyclic_factors(long d) { return d == 1 ? std::vector<Int>{} : std::vector<Int>{d}; }

}  // namespace

TEST_CASE("tensor is right exact in each variable") {
  std::mt19937_64 rng(3);
  ModuleCategory C;
  ModuleTensor T(Ring::integers());
  for (int t = 0; t < 15; ++t) {
    auto s = random_ses(C, rng).ses;
    auto A = random_module(C, rng);
    for (bool left : {true, false}) {
      auto apply = [&](const ModMor& f) { return left ? T(C.identity(A), f) : T(f, C.identity(A)); };
      auto fi = apply(s.i), fp = apply(s.p);
      CHECK(is_epi(C, fp));
      CHECK(is_exact_at(C, fi, fp));
    }
  }
}

TEST_CASE("Tor of cyclic groups") {
  // 0 -> Z -xm-> Z -> Z/m -> 0 tensored with Z/n: Tor_1 = ker(xm on Z/n) = Z/gcd
  for (auto [m, n] : std::vector<std::pair<long, long>>{{2, 2}, {4, 6}, {6, 9}}) {
    auto A = ModuleObj::cyclic(m), B = ModuleObj::cyclic(n);
    CHECK(tor_first(A, B, 1).invariant_factors() == cyclic_factors(std::gcd(m, n)));
    CHECK(tor_second(A, B, 1).invariant_factors() == cyclic_factors(std::gcd(m, n)));
    CHECK(tor_first(A, B, 2).is_zero());
    CHECK(tor_second(A, B, 3).is_zero());
    CHECK(tor_first(A, B, 0).invariant_factors() == tensor(A, B).invariant_factors());
  }
}

TEST_CASE("balance of Tor") {
  std::mt19937_64 rng(12);
  Ring c2 = group_algebra(2, cyclic_group_table(2));
  for (const auto& C : {ModuleCategory(), ModuleCategory(c2)}) {
    for (int t = 0; t < 12; ++t) {
      auto A = random_module(C, rng), B = random_module(C, rng);
      for (std::size_t n = 0; n <= 2; ++n) {
        auto r = balance(A, B, n);
        CHECK(r.iso);
      }
    }
  }
  // over F2[C2], Tor_n(F2, F2) = F2 in every degree
  auto k = ModuleObj::trivial(c2);
  for (std::size_t n = 0; n <= 3; ++n) {
    auto r = balance(k, k, n);
    CHECK(r.iso);
    CHECK(r.first.fp_dim() == 1);
  }
}

TEST_CASE("ladders in the first variable") {
  ModuleCategory C;
  ModuleTensor T(Ring::integers());
  auto Z = ModuleObj::cyclic(0), Z2 = ModuleObj::cyclic(2), Z4 = ModuleObj::cyclic(4);
  auto s2 = make_ses(C, zmap(Z, Z, {{2}}), zmap(Z, Z2, {{1}}));
  auto s4 = make_ses(C, zmap(Z, Z, {{4}}), zmap(Z, Z4, {{1}}));
  // beta = x2 carries 2Z into 4Z; gamma: Z/2 -> Z/4 is 1 -> 2
  SESMorphism<ModMor> m{C.identity(Z), zmap(Z, Z, {{2}}), zmap(Z2, Z4, {{2}})};
  auto r = ladder(T, s2, s4, m, C.identity(Z2), 2);
  CHECK_FALSE(r.rejected);
  CHECK(r.rows_exact);
  CHECK(r.squares.all_commute());
  CHECK(r.pass());
  CHECK(r.top.FN[1].invariant_factors() == std::vector<Int>{2});
  CHECK(r.bottom.FN[1].invariant_factors() == std::vector<Int>{2});

  SESMorphism<ModMor> id{C.identity(Z), C.identity(Z), C.identity(Z2)};
  auto ri = ladder(T, s2, s2, id, C.identity(Z2), 2);
  CHECK(ri.pass());
  for (std::size_t n = 0; n <= 3; ++n) CHECK(ri.top.FN[n] == ri.bottom.FN[n]);

  SESMorphism<ModMor> bad{C.identity(Z), zmap(Z, Z, {{3}}), zmap(Z2, Z4, {{2}})};
  auto rb = ladder(T, s2, s4, bad, C.identity(Z2), 2);
  REQUIRE(rb.rejected);
  CHECK_FALSE(rb.pass());
}

TEST_CASE("ladders in the second variable") {
  ModuleCategory C;
  ModuleTensor T(Ring::integers());
  auto Z2 = ModuleObj::cyclic(2), Z4 = ModuleObj::cyclic(4);
  auto b = make_ses(C, zmap(Z2, Z4, {{2}}), zmap(Z4, Z2, {{1}}));
  SESMorphism<ModMor> id{C.identity(Z2), C.identity(Z4), C.identity(Z2)};
  auto r = ladder_switched(T, b, b, id, C.identity(Z2), 2);
  CHECK(r.degreewise_exact);
  CHECK(r.pass());
  CHECK_FALSE(C.is_zero(r.top.delta[1]));

  auto bp = C.biproduct(Z2, Z4);
  auto split = make_ses(C, bp.in1, bp.pr2);
  SESMorphism<ModMor> sid{C.identity(Z2), C.identity(bp.object), C.identity(Z4)};
  auto rs = ladder_switched(T, split, split, sid, C.identity(Z4), 2);
  CHECK(rs.pass());
  for (std::size_t n = 1; n <= 3; ++n) CHECK(C.is_zero(rs.top.delta[n]));

  auto rz = ladder_switched(T, b, b, id, C.zero_morphism(Z4, Z2), 2);
  CHECK(rz.pass());
  for (std::size_t n = 0; n <= 3; ++n) {
    CHECK(C.is_zero(rz.vertical.FA[n]));
    CHECK(C.is_zero(rz.vertical.FB[n]));
    CHECK(C.is_zero(rz.vertical.FG[n]));
  }
}

TEST_CASE("random ladders over Z") {
  std::mt19937_64 rng(41);
  ModuleCategory C;
  ModuleTensor T(Ring::integers());
  for (int t = 0; t < 8; ++t) {
    auto s = random_ses(C, rng);
    auto m = random_ses_morphism(C, s, rng);
    auto Y = random_presented(C, rng);
    auto g = random_morphism_from(C, Y, rng).map;
    CHECK(ladder(T, s.ses, m.target.ses, m.map, g, 1).pass());
    CHECK(ladder_switched(T, s.ses, m.target.ses, m.map, g, 1).pass());
  }
}

TEST_CASE("diagram ladders") {
  std::mt19937_64 rng(8);
  auto arrow = std::make_shared<const FinCat>(FinCat::standard("arrow"));
  auto point = std::make_shared<const FinCat>(FinCat::standard("point"));
  Ring Zr = Ring::integers();
  ModuleCategory C;

  // point second variable: each component is the base ladder
  DiagramTensor TP(arrow, point, Zr);
  const auto& DI = TP.first();
  auto s = random_ses(DI, rng);
  auto m = random_ses_morphism(DI, s, rng);
  auto Z2 = ModuleObj::cyclic(2);
  auto g = TP.second().constant(C.identity(Z2));
  auto r = ladder(TP, s.ses, m.target.ses, m.map, g, 1);
  CHECK(r.pass());
  ModuleTensor T(Zr);
  for (std::size_t i = 0; i < 2; ++i) {
    auto comp = [i](const DiagMor& f) { return f.at(i); };
    auto si = SESOf<ModuleCategory>{comp(s.ses.i), comp(s.ses.p)};
    auto ti = SESOf<ModuleCategory>{comp(m.target.ses.i), comp(m.target.ses.p)};
    SESMorphism<ModMor> mi{comp(m.map.alpha), comp(m.map.beta), comp(m.map.gamma)};
    auto base = ladder(T, si, ti, mi, C.identity(Z2), 1);
    CHECK(base.pass());
    for (std::size_t n = 0; n <= 2; ++n) CHECK(base.top.FN[n] == r.top.FN[n].at(TP.object(i, 0)));
  }

  // arrow x arrow, both variable orders, and the product identification
  DiagramTensor TA(arrow, arrow, Zr);
  for (int t = 0; t < 2; ++t) {
    auto s1 = random_ses(TA.first(), rng);
    auto m1 = random_ses_morphism(TA.first(), s1, rng);
    auto Y = random_presented(TA.second(), rng);
    auto gy = random_morphism_from(TA.second(), Y, rng).map;
    auto lr = ladder(TA, s1.ses, m1.target.ses, m1.map, gy, 1);
    for (const auto& sq : lr.squares.squares) INFO(sq.position);
    CHECK(lr.pass());
    CHECK(ladder_switched(TA, s1.ses, m1.target.ses, m1.map, gy, 1).pass());
    auto id = product_identification(TA, s1.ses, m1.target.ses, m1.map, gy, 1);
    for (const auto& f : id.failures) INFO(f);
    CHECK(id.pass());
  }

  // constant Bockstein sequence against Y = (Z/4 -> Z/2): Tor_1 is Z/2 everywhere
  auto Z4 = ModuleObj::cyclic(4);
  const auto& D1 = TA.first();
  auto bock = SESOf<DiagramCategory>{D1.constant(zmap(Z2, Z4, {{2}})), D1.constant(zmap(Z4, Z2, {{1}}))};
  REQUIRE_FALSE(ses_violation(D1, bock));
  const auto& D2 = TA.second();
  std::vector<ModMor> ymaps(3);
  ymaps[D2.index().morphism_index("id0")] = C.identity(Z4);
  ymaps[D2.index().morphism_index("id1")] = C.identity(Z2);
  ymaps[D2.index().morphism_index("u")] = zmap(Z4, Z2, {{1}});
  auto Yd = D2.make({Z4, Z2}, ymaps);
  SESMorphism<DiagMor> bid{D1.identity(bock.L()), D1.identity(bock.M()), D1.identity(bock.N())};
  auto br = ladder(TA, bock, bock, bid, D2.identity(Yd), 1);
  CHECK(br.pass());
  for (const auto& comp : br.top.FN[1].components) CHECK(comp.invariant_factors() == std::vector<Int>{2});
  CHECK_FALSE(TA.target_category().is_zero(br.top.delta[1]));
  auto bi = product_identification(TA, bock, bock, bid, D2.identity(Yd), 1);
  for (const auto& f : bi.failures) INFO(f);
  CHECK(bi.pass());
  CHECK(ladder_switched(TA, bock, bock, bid, D1.identity(Yd), 1).pass());
}
