#include "fch/functor.hpp"
#include "fch/random.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fch;

namespace {

ModMor zmap(const ModuleObj& a, const ModuleObj& b, std::vector<std::vector<long>> rows) {
  return ModMor::make(a, b, IntMatrix::from_rows(rows));
}

// a -> a (x) R, a |-> a (x) 1, in the tensor's raw coordinates.
ModMor unit_map(const FunctorSpec& F, const ModuleObj& a) {
  const auto& pr = F.presentation(a);
  const Ring& R = a.ring();
  if (R.is_integers())
    return ModMor::make(a, pr.object, mat_mul(pr.from_raw, IntMatrix::identity(a.coord_dim())));
  const auto p = R.prime();
  FpMatrix raw(p, a.coord_dim() * R.dim(), a.coord_dim());
  for (std::size_t i = 0; i < a.coord_dim(); ++i)
    for (std::size_t r = 0; r < R.dim(); ++r) raw(i * R.dim() + r, i) = R.unit()[r];
  return ModMor::make(a, pr.object, mat_mul(pr.from_raw, raw));
}

}  // namespace

TEST_CASE("tensor products of cyclic groups") {
  // Z/m (x) Z/n = Z/gcd(m, n), by hand: the combined presentation [[m],[n]] has SNF gcd
  CHECK(tensor(ModuleObj::cyclic(2), ModuleObj::cyclic(3)).is_zero());
  CHECK(tensor(ModuleObj::cyclic(4), ModuleObj::cyclic(6)).invariant_factors() == std::vector<Int>{2});
  CHECK(tensor(ModuleObj::cyclic(0), ModuleObj::cyclic(5)).invariant_factors() == std::vector<Int>{5});
  auto ab = tensor(ModuleObj::cyclic_sum({2, 0}), ModuleObj::cyclic_sum({4, 0}));
  CHECK(ab.invariant_factors() == std::vector<Int>{2, 2, 4, 0});
}

TEST_CASE("tensoring with the ring is the identity up to the unit map") {
  std::mt19937_64 rng(2);
  Ring c2 = group_algebra(2, cyclic_group_table(2));
  for (const auto& C : {ModuleCategory(), ModuleCategory(c2)}) {
    auto F = FunctorSpec::tensor_with(ModuleObj::free(C.ring(), 1));
    for (int t = 0; t < 10; ++t) {
      auto A = random_module(C, rng), B = random_module(C, rng);
      auto f = random_module_map(C, A, B, rng);
      auto ua = unit_map(F, A), ub = unit_map(F, B);
      CHECK(is_iso(C, ua));
      CHECK(C.equal(C.compose(F(f), ua), C.compose(ub, f)));
    }
  }
}

TEST_CASE("tensor with Z/2 on an arrow diagram") {
  DiagramCategory D(FinCat::standard("arrow"), ModuleCategory());
  const auto& I = D.index();
  auto Z = ModuleObj::cyclic(0);
  std::vector<ModMor> maps(3);
  maps[I.morphism_index("id0")] = D.base().identity(Z);
  maps[I.morphism_index("id1")] = D.base().identity(Z);
  maps[I.morphism_index("u")] = zmap(Z, Z, {{2}});
  auto d = D.make({Z, Z}, maps);
  auto F = FunctorSpec::exponent(FunctorSpec::tensor_with(ModuleObj::cyclic(2)), D.index_ptr());
  auto Fd = exponent_apply(F, d);
  CHECK_FALSE(check_diagram(Fd));
  for (std::size_t i = 0; i < 2; ++i) CHECK(Fd.at(i).invariant_factors() == std::vector<Int>{2});
  CHECK(D.base().is_zero(Fd.map(I.morphism_index("u"))));

  DiagramCategory P(FinCat::standard("point"), ModuleCategory());
  CHECK_THROWS(exponent_apply(F, P.constant(Z)));
}

TEST_CASE("functors are additive and functorial") {
  std::mt19937_64 rng(8);
  ModuleCategory C;
  std::vector<FunctorSpec> fs{FunctorSpec::tensor_with(ModuleObj::cyclic(2)),
                              FunctorSpec::tensor_with(ModuleObj::cyclic_sum({4, 0})),
                              FunctorSpec::base_change(RingMap::from_integers(Ring::prime_field(3)))};
  for (const auto& F : fs) {
    ModuleCategory T(F.target_ring());
    for (int t = 0; t < 10; ++t) {
      auto A = random_module(C, rng), B = random_module(C, rng), E = random_module(C, rng);
      auto f = random_module_map(C, A, B, rng), g = random_module_map(C, A, B, rng);
      auto h = random_module_map(C, B, E, rng);
      CHECK_FALSE(F(f).well_defined_violation());
      CHECK(T.equal(F(C.add(f, g)), T.add(F(f), F(g))));
      CHECK(T.equal(F(C.compose(h, f)), T.compose(F(h), F(f))));
      CHECK(T.equal(F(C.identity(A)), T.identity(F(A))));
    }
  }
}

TEST_CASE("base change and coinvariants over group algebras") {
  Ring c4 = group_algebra(2, cyclic_group_table(4));
  Ring c2 = group_algebra(2, cyclic_group_table(2));
  auto q = RingMap::from_group_hom(c4, c2, {0, 1, 0, 1});
  auto F = FunctorSpec::base_change(q);
  auto G = FunctorSpec::coinvariants(c2);
  auto GF = FunctorSpec::compose(G, F);

  auto P = ModuleObj::free(c4, 2);
  CHECK(F(P).is_free());
  CHECK(F(P).free_rank() == 2);
  CHECK(GF(P).fp_dim() == 2);
  CHECK(F(ModuleObj::trivial(c4)).fp_dim() == 1);
  CHECK(G(ModuleObj::trivial(c2)).fp_dim() == 1);

  // additivity / functoriality on random maps between random modules
  std::mt19937_64 rng(4);
  ModuleCategory C(c4), T(c2);
  for (int t = 0; t < 10; ++t) {
    auto A = random_module(C, rng), B = random_module(C, rng);
    auto f = random_module_map(C, A, B, rng), g = random_module_map(C, A, B, rng);
    CHECK_FALSE(F(f).well_defined_violation());
    CHECK(T.equal(F(C.add(f, g)), T.add(F(f), F(g))));
  }
  // from the integers
  auto Z2 = ModuleObj::cyclic(2);
  auto H = FunctorSpec::base_change(RingMap::from_integers(c2));
  CHECK(H(Z2).fp_dim() == 2);
  CHECK(H(ModuleObj::cyclic(3)).is_zero());
  CHECK(H(ModuleObj::cyclic(0)).is_free());
  CHECK_THROWS(F(Z2));
}

TEST_CASE("tensor natural transformations") {
  ModuleCategory C;
  auto Z = ModuleObj::cyclic(0);
  auto eta = NatSpec::tensor_map(zmap(Z, Z, {{2}}));
  auto A = ModuleObj::cyclic_sum({0, 3});
  auto c = eta.at(A);
  // componentwise multiplication by 2 through the unit iso
  auto ua = unit_map(eta.source(), A);
  CHECK(C.equal(C.compose(c, ua), C.compose(ua, C.scale(C.identity(A), 2))));
  auto id = NatSpec::tensor_map(C.identity(Z));
  CHECK(C.equal(id.at(A), C.identity(eta.source()(A))));
  auto zero = NatSpec::tensor_map(C.zero_morphism(Z, Z));
  CHECK(C.is_zero(zero.at(A)));

  DiagramCategory D(FinCat::standard("arrow"), C);
  std::mt19937_64 rng(1);
  auto d = random_diagram(D, rng);
  auto nd = exponent_nat(eta, d);
  CHECK_FALSE(naturality_violation(nd));
}
