#include "fch/homology.hpp"
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

using ZComplex = ComplexOf<ModuleCategory>;

// second resolution of A: cover padded with an extra free summand
ResolutionOf<ModuleCategory> padded_resolution(const ModuleCategory& C, const ModuleObj& a, std::size_t n_max,
                                               std::mt19937_64& rng) {
  auto cov = C.free_cover(a);
  auto extra = ModuleObj::free(C.ring(), 1);
  auto b = C.biproduct(cov.object, extra);
  auto eps = C.add(C.compose(cov.epi, b.pr1), C.compose(C.random_from_free(extra, a, rng), b.pr2));
  ResolutionOf<ModuleCategory> r;
  r.resolved = a;
  r.augmentation = eps;
  r.complex.objects.push_back(b.object);
  auto prev = eps;
  for (std::size_t n = 1; n <= n_max; ++n) {
    auto k = C.kernel(prev);
    auto kc = C.free_cover(k.object);
    auto dn = C.compose(k.mono, kc.epi);
    r.complex.objects.push_back(kc.object);
    r.complex.d.push_back(dn);
    prev = dn;
  }
  return r;
}

}  // namespace

TEST_CASE("homology of small complexes") {
  ModuleCategory C;
  auto Z = ModuleObj::cyclic(0);
  ZComplex x{{Z, Z}, {zmap(Z, Z, {{6}})}};
  // by hand: H_0 = Z/6, H_1 = ker(x6) = 0
  CHECK(homology_at(C, x, 0).object.invariant_factors() == std::vector<Int>{6});
  ZComplex x2{{Z, Z, C.zero_object()}, {zmap(Z, Z, {{6}}), C.zero_morphism(C.zero_object(), Z)}};
  CHECK(homology_at(C, x2, 1).object.is_zero());

  auto A = ModuleObj::cyclic_sum({2, 0});
  ZComplex z{{A, A, A}, {C.zero_morphism(A, A), C.zero_morphism(A, A)}};
  CHECK(homology_at(C, z, 1).object.invariant_factors() == A.invariant_factors());
  CHECK_THROWS(homology_at(C, z, 3));
}

TEST_CASE("resolutions") {
  ModuleCategory C;
  auto r = resolve(C, ModuleObj::cyclic(6), 3);
  CHECK(is_complex(C, r.complex));
  CHECK(r.complex.objects[0].free_rank() == 1);
  CHECK(r.complex.objects[1].free_rank() == 1);
  CHECK(r.complex.objects[2].is_zero());
  CHECK(homology_at(C, r.complex, 1).object.is_zero());
  CHECK(is_iso(C, C.factor_through_epi(C.cokernel(r.complex.diff(1)).epi, r.augmentation).value()));

  auto rf = resolve(C, ModuleObj::free(Ring::integers(), 2), 2);
  CHECK(rf.complex.objects[1].is_zero());

  Ring c2 = group_algebra(2, cyclic_group_table(2));
  ModuleCategory G(c2);
  auto rt = resolve(G, ModuleObj::trivial(c2), 4);
  CHECK(is_complex(G, rt.complex));
  for (std::size_t n = 0; n <= 4; ++n) CHECK(rt.complex.objects[n].free_rank() == 1);
  // each differential sends the generator to (1 + g)
  for (std::size_t n = 1; n <= 4; ++n) {
    auto img = rt.complex.diff(n).fp_matrix() * rt.complex.objects[n].fp_data().generators[0];
    CHECK(img == FpVector{1, 1});
  }
  for (std::size_t n = 1; n < 4; ++n) CHECK(homology_at(G, rt.complex, n).object.is_zero());
}

TEST_CASE("functors on complexes and derived functors") {
  ModuleCategory C;
  auto Z = ModuleObj::cyclic(0);
  auto F = FunctorSpec::tensor_with(ModuleObj::cyclic(2));
  ZComplex x{{Z, Z}, {zmap(Z, Z, {{2}})}};
  auto fx = apply_functor<ModuleCategory>(F, x);
  CHECK(C.is_zero(fx.diff(1)));

  auto Z2 = ModuleObj::cyclic(2);
  // Tor_1(Z/2, Z/2) from the hand resolution 0 -> Z -x2-> Z: ker(x2 on Z/2) = Z/2
  CHECK(derived(C, F, Z2, 1).invariant_factors() == std::vector<Int>{2});
  CHECK(derived(C, F, Z2, 0).invariant_factors() == std::vector<Int>{2});
  CHECK(derived(C, F, ModuleObj::cyclic(6), 2).is_zero());
  CHECK(derived(C, F, ModuleObj::free(Ring::integers(), 2), 1).is_zero());
  CHECK(derived(C, F, ModuleObj::cyclic_sum({4, 6}), 1).invariant_factors() == std::vector<Int>{2, 2});
}

TEST_CASE("derived functors do not depend on the resolution") {
  std::mt19937_64 rng(9);
  ModuleCategory C;
  auto F = FunctorSpec::tensor_with(ModuleObj::cyclic_sum({4, 0}));
  for (int t = 0; t < 15; ++t) {
    auto A = random_module(C, rng);
    auto p = resolve(C, A, 3);
    auto q = padded_resolution(C, A, 3, rng);
    for (std::size_t n = 0; n <= 2; ++n) CHECK(is_iso(C, resolution_comparison(C, F, p, q, n)));
  }
}

TEST_CASE("horseshoe resolutions") {
  ModuleCategory C;
  auto Z = ModuleObj::cyclic(0), Z2 = ModuleObj::cyclic(2);
  auto s = make_ses(C, zmap(Z, Z, {{2}}), zmap(Z, Z2, {{1}}));
  auto rl = resolve(C, s.L(), 3), rn = resolve(C, s.N(), 3);
  auto h = horseshoe(C, s, rl, rn);
  CHECK(h.middle.complex.objects[0].free_rank() == 2);
  CHECK(h.middle.complex.objects[1].free_rank() == 1);
  CHECK(is_complex(C, h.middle.complex));
  CHECK(C.is_zero(C.compose(h.middle.augmentation, h.middle.complex.diff(1))));
  CHECK(is_epi(C, h.middle.augmentation));
  CHECK(is_exact_at(C, h.middle.complex.diff(1), h.middle.augmentation));
  for (std::size_t n = 1; n < 3; ++n) CHECK(homology_at(C, h.middle.complex, n).object.is_zero());

  auto zs = make_ses(C, C.zero_morphism(C.zero_object(), Z2), C.identity(Z2));
  auto h0 = horseshoe(C, zs, resolve(C, zs.L(), 2), resolve(C, Z2, 2));
  for (std::size_t n = 0; n <= 2; ++n)
    CHECK(h0.middle.complex.objects[n].free_rank() == resolve(C, Z2, 2).complex.objects[n].free_rank());
  CHECK_THROWS(make_ses(C, zmap(Z, Z, {{4}}), zmap(Z, Z2, {{1}})));
}

TEST_CASE("long exact sequences and connecting maps") {
  ModuleCategory C;
  auto Z = ModuleObj::cyclic(0), Z2 = ModuleObj::cyclic(2), Z4 = ModuleObj::cyclic(4);
  auto F = FunctorSpec::tensor_with(Z2);

  auto s = make_ses(C, zmap(Z, Z, {{2}}), zmap(Z, Z2, {{1}}));
  auto les = les_of_ses(C, F, s, 2).les;
  CHECK(les.all_exact());
  CHECK(order_of(les.FN[1]) == 2);
  CHECK(order_of(les.FL[0]) == 2);
  CHECK(order_of(les.FM[0]) == 2);
  CHECK(order_of(les.FN[0]) == 2);
  CHECK(les.FL[1].is_zero());

  // Bockstein: Z/2 -> Z/4 -> Z/2. (x2) (x) Z/2 is zero, so delta_1 must hit all of Z/2 (x) Z/2.
  auto b = make_ses(C, zmap(Z2, Z4, {{2}}), zmap(Z4, Z2, {{1}}));
  auto lb = les_of_ses(C, F, b, 2).les;
  CHECK(lb.all_exact());
  CHECK(C.is_zero(lb.Fi[0]));
  CHECK_FALSE(C.is_zero(lb.delta[1]));
  CHECK(is_epi(C, lb.delta[1]));

  // split sequences have zero connecting maps
  auto bp = C.biproduct(Z2, Z4);
  auto split = make_ses(C, bp.in1, bp.pr2);
  auto ls = les_of_ses(C, F, split, 2).les;
  CHECK(ls.all_exact());
  for (std::size_t n = 1; n < ls.delta.size(); ++n) CHECK(C.is_zero(ls.delta[n]));
}

TEST_CASE("connecting maps do not depend on representatives") {
  std::mt19937_64 rng(21);
  ModuleCategory C;
  auto F = FunctorSpec::tensor_with(ModuleObj::cyclic(4));
  for (int t = 0; t < 10; ++t) {
    auto s = random_ses(C, rng).ses;
    auto a = les_of_ses(C, F, s, 1);
    auto b = les_of_ses(C, F, s, 1, &rng);
    CHECK(a.les.all_exact());
    for (std::size_t n = 1; n < a.les.delta.size(); ++n) CHECK(C.equal(a.les.delta[n], b.les.delta[n]));
  }
}

TEST_CASE("delta squares commute for morphisms of SESs") {
  std::mt19937_64 rng(33);
  ModuleCategory C;
  auto F = FunctorSpec::tensor_with(ModuleObj::cyclic(2));
  for (int t = 0; t < 10; ++t) {
    auto s = random_ses(C, rng);
    auto m = random_ses_morphism(C, s, rng);
    REQUIRE_FALSE(ses_morphism_violation(C, s.ses, m.target.ses, m.map));
    auto a = les_of_ses(C, F, s.ses, 1);
    auto b = les_of_ses(C, F, m.target.ses, 1);
    auto rep = les_morphism_squares(C, F, C, a, b, m.map);
    CHECK(rep.all_commute());
  }
  // identity morphism of a SES
  auto s = random_ses(C, rng).ses;
  SESMorphism<ModMor> id{C.identity(s.L()), C.identity(s.M()), C.identity(s.N())};
  auto a = les_of_ses(C, F, s, 1);
  CHECK(les_morphism_squares(C, F, C, a, a, id).all_commute());
}

TEST_CASE("LES of diagrams over the arrow category") {
  std::mt19937_64 rng(4);
  DiagramCategory D(FinCat::standard("arrow"), ModuleCategory());
  auto F = FunctorSpec::exponent(FunctorSpec::tensor_with(ModuleObj::cyclic(2)), D.index_ptr());
  for (int t = 0; t < 3; ++t) {
    auto s = random_ses(D, rng).ses;
    REQUIRE_FALSE(ses_violation(D, s));
    auto l = les_of_ses(D, F, s, 1).les;
    CHECK(l.all_exact());
    for (std::size_t n = 1; n < l.delta.size(); ++n) CHECK_FALSE(naturality_violation(l.delta[n]));
    // componentwise exactness of each position
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t n = 0; n <= 1; ++n) CHECK(is_exact_at(D.base(), l.Fi[n].at(i), l.Fp[n].at(i)));
  }
}
