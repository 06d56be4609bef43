#include "fch/diagram.hpp"
#include "fch/random.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fch;

namespace {

ModMor zmap(const ModuleObj& a, const ModuleObj& b, std::vector<std::vector<long>> rows) {
  return ModMor::make(a, b, IntMatrix::from_rows(rows));
}

Int order_of(const ModuleObj& m) {
  Int n = 1;
  for (const auto& d : m.invariant_factors()) n *= d;
  return n;
}

// (Z/4 -> Z/2) over the arrow category
Diagram z4_to_z2(const DiagramCategory& D) {
  auto Z4 = ModuleObj::cyclic(4), Z2 = ModuleObj::cyclic(2);
  const auto& I = D.index();
  std::vector<ModMor> maps(3);
  maps[I.morphism_index("id0")] = D.base().identity(Z4);
  maps[I.morphism_index("id1")] = D.base().identity(Z2);
  maps[I.morphism_index("u")] = zmap(Z4, Z2, {{1}});
  return D.make({Z4, Z2}, maps);
}

}  // namespace

TEST_CASE("diagram functoriality checks") {
  DiagramCategory D(FinCat::standard("arrow"), ModuleCategory());
  CHECK_FALSE(check_diagram(D.constant(ModuleObj::cyclic(6))));
  CHECK_FALSE(check_diagram(z4_to_z2(D)));

  DiagramCategory S(FinCat::standard("square"), ModuleCategory());
  const auto& I = S.index();
  auto Z = ModuleObj::cyclic(0);
  std::vector<ModMor> maps;
  for (std::size_t m = 0; m < I.num_morphisms(); ++m) {
    const auto& l = I.arrow(m).label;
    long k = l == "a" ? 2 : l == "c" ? 3 : l == "e" ? 5 : 1;  // c o a = 6 but e = 5
    maps.push_back(zmap(Z, Z, {{k}}));
  }
  Diagram bad{S.index_ptr(), std::vector<ModuleObj>(4, Z), maps, std::nullopt};
  auto why = check_diagram(bad);
  REQUIRE(why);
  // direct composite comparison names the offending pair
  std::string pair;
  for (std::size_t g = 0; g < I.num_morphisms() && pair.empty(); ++g)
    for (std::size_t f = 0; f < I.num_morphisms() && pair.empty(); ++f) {
      auto h = I.compose(g, f);
      if (h == FinCat::npos) continue;
      long lhs = maps[h].int_matrix()(0, 0).get_si();
      long rhs = maps[g].int_matrix()(0, 0).get_si() * maps[f].int_matrix()(0, 0).get_si();
      if (lhs != rhs) pair = I.arrow(g).label + " o " + I.arrow(f).label;
    }
  CHECK(why->find(pair) != std::string::npos);
  CHECK_THROWS(S.make(std::vector<ModuleObj>(4, Z), maps));
}

TEST_CASE("projection, gamma and sums") {
  DiagramCategory D(FinCat::standard("arrow"), ModuleCategory());
  auto d = z4_to_z2(D);
  CHECK(projection(d, 0).invariant_factors() == std::vector<Int>{4});
  CHECK(D.base().equal(gamma(d, D.index().morphism_index("id0")), D.base().identity(d.at(0))));
  auto f = D.identity(d);
  auto g = D.add(f, f);
  for (std::size_t i = 0; i < 2; ++i) CHECK(D.base().equal(projection(g, i), D.base().add(f.at(i), f.at(i))));
  CHECK(D.equal(D.add(f, D.zero_morphism(d, d)), f));
  CHECK(D.is_zero(D.add(f, D.negate(f))));
  CHECK_FALSE(naturality_violation(g));
}

TEST_CASE("diagram kernels and cokernels") {
  DiagramCategory D(FinCat::standard("arrow"), ModuleCategory());
  const auto& I = D.index();
  auto A = z4_to_z2(D);
  CHECK(D.is_zero_object(D.kernel(D.identity(A)).object));
  CHECK(D.is_zero_object(D.cokernel(D.identity(A)).object));

  auto Z2 = ModuleObj::cyclic(2);
  auto B = D.constant(Z2);
  auto f = D.make_morphism(A, B, {zmap(A.at(0), Z2, {{1}}), D.base().identity(Z2)});
  auto k = D.kernel(f);
  // per-component enumeration: x in Z/4 with x = 0 mod 2; y in Z/2 with y = 0
  CHECK(order_of(k.object.at(0)) == 2);
  CHECK(order_of(k.object.at(1)) == 1);
  CHECK_FALSE(check_diagram(k.object));
  CHECK(D.is_zero(D.compose(f, k.mono)));
  CHECK_FALSE(naturality_violation(k.mono));
  // the induced map over u satisfies the defining square
  std::size_t u = I.morphism_index("u");
  CHECK(D.base().equal(D.base().compose(k.mono.at(1), k.object.map(u)), D.base().compose(A.map(u), k.mono.at(0))));

  auto z = D.cokernel(D.zero_morphism(A, B));
  CHECK(is_iso(D, z.epi));

  auto Z = ModuleObj::cyclic(0);
  auto C = D.constant(Z);
  auto twice = D.make_morphism(C, C, {zmap(Z, Z, {{2}}), zmap(Z, Z, {{2}})});
  CHECK(D.is_zero_object(D.kernel(twice).object));
}

TEST_CASE("cokernels agree with componentwise cokernels") {
  std::mt19937_64 rng(11);
  for (const char* name : {"arrow", "square", "parallel"}) {
    DiagramCategory D(FinCat::standard(name), ModuleCategory());
    for (int t = 0; t < 8; ++t) {
      auto A = random_presented(D, rng);
      auto m = random_morphism_from(D, A, rng);
      auto c = D.cokernel(m.map);
      CHECK_FALSE(check_diagram(c.object));
      for (std::size_t i = 0; i < D.index().num_objects(); ++i) {
        auto ci = D.base().cokernel(m.map.at(i));
        CHECK(ci.object.invariant_factors() == c.object.at(i).invariant_factors());
      }
    }
  }
}

TEST_CASE("free diagrams") {
  DiagramCategory D(FinCat::standard("arrow"), ModuleCategory());
  const auto& I = D.index();
  auto Z = ModuleObj::cyclic(0);
  for (std::size_t i = 0; i < 2; ++i) {
    auto F = D.free_diagram(i, Z);
    CHECK_FALSE(check_diagram(F));
    for (std::size_t j = 0; j < 2; ++j) CHECK(F.at(j).free_rank() == I.hom(i, j).size());
  }
  auto F0 = D.free_diagram(I.object_index("0"), Z);
  CHECK(D.base().equal(F0.map(I.morphism_index("u")), D.base().identity(Z)));

  DiagramCategory P(FinCat::standard("point"), ModuleCategory());
  CHECK(P.free_diagram(0, ModuleObj::free(Ring::integers(), 2)).at(0).free_rank() == 2);
}

TEST_CASE("free diagrams are projective") {
  std::mt19937_64 rng(5);
  Ring c2 = group_algebra(2, cyclic_group_table(2));
  for (const auto& base : {ModuleCategory(), ModuleCategory(c2)}) {
    for (const char* name : {"arrow", "square"}) {
      DiagramCategory D(FinCat::standard(name), base);
      for (int t = 0; t < 6; ++t) {
        auto M = random_presented(D, rng);
        auto N = D.cokernel(D.random_from_free(random_free_diagram(D, rng), M.object, rng));
        auto P = random_free_diagram(D, rng);
        auto g = D.random_from_free(P, N.object, rng);
        auto h = D.lift(N.epi, g);
        REQUIRE(h);
        CHECK_FALSE(naturality_violation(*h));
        CHECK(D.equal(D.compose(N.epi, *h), g));
      }
    }
  }
}

TEST_CASE("diagram free covers") {
  std::mt19937_64 rng(3);
  DiagramCategory D(FinCat::standard("square"), ModuleCategory());
  for (int t = 0; t < 5; ++t) {
    auto A = random_diagram(D, rng);
    auto cov = D.free_cover(A);
    CHECK_FALSE(check_diagram(cov.object));
    CHECK_FALSE(naturality_violation(cov.epi));
    CHECK(is_epi(D, cov.epi));
  }
  CHECK(D.is_zero_object(D.free_cover(D.zero_object()).object));
}

TEST_CASE("exactness in C^I matches componentwise exactness") {
  std::mt19937_64 rng(17);
  int exact = 0, inexact = 0;
  for (const char* name : {"arrow", "square", "parallel"}) {
    DiagramCategory D(FinCat::standard(name), ModuleCategory());
    for (int t = 0; t < 9; ++t) {
      auto kind = static_cast<PairKind>(t % 3);
      auto pr = random_composable_pair(D, rng, kind);
      auto r = d_is_exact_at(D, pr.f, pr.g);
      CHECK(r.intrinsic == r.componentwise);
      if (kind != PairKind::ZeroComposite) CHECK(r.intrinsic);
      (r.intrinsic ? exact : inexact)++;
    }
  }
  CHECK(exact > 0);
  CHECK(inexact > 0);
}

TEST_CASE("inexact component is reported") {
  DiagramCategory D(FinCat::standard("arrow"), ModuleCategory());
  auto Z = ModuleObj::cyclic(0), Z2 = ModuleObj::cyclic(2);
  const auto& I = D.index();
  std::vector<ModMor> cm(3);
  cm[I.morphism_index("id0")] = D.base().identity(Z);
  cm[I.morphism_index("id1")] = D.base().identity(Z);
  cm[I.morphism_index("u")] = zmap(Z, Z, {{2}});
  auto B2 = D.make({Z, Z}, cm);
  std::vector<ModMor> am(3);
  am[I.morphism_index("id0")] = D.base().identity(Z);
  am[I.morphism_index("id1")] = D.base().identity(Z);
  am[I.morphism_index("u")] = zmap(Z, Z, {{1}});
  auto A2 = D.make({Z, Z}, am);
  std::vector<ModMor> qm(3);
  qm[I.morphism_index("id0")] = D.base().identity(Z2);
  qm[I.morphism_index("id1")] = D.base().identity(Z2);
  qm[I.morphism_index("u")] = D.base().zero_morphism(Z2, Z2);
  auto C2 = D.make({Z2, Z2}, qm);
  // at 0: Z -x2-> Z -> Z/2 exact; at 1: Z -x4-> Z -> Z/2 not exact
  auto f = D.make_morphism(A2, B2, {zmap(Z, Z, {{2}}), zmap(Z, Z, {{4}})});
  auto g = D.make_morphism(B2, C2, {zmap(Z, Z2, {{1}}), zmap(Z, Z2, {{1}})});
  auto r = d_is_exact_at(D, f, g);
  CHECK_FALSE(r.intrinsic);
  CHECK_FALSE(r.componentwise);
  REQUIRE(r.failing_component);
  CHECK(I.objects()[*r.failing_component] == "1");
}
