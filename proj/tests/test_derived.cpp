#include "fch/derived.hpp"
#include "fch/random.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fch;

namespace {

ModMor zmap(const ModuleObj& a, const ModuleObj& b, std::vector<std::vector<long>> rows) {
  return ModMor::make(a, b, IntMatrix::from_rows(rows));
}

template <AbelianCategory C>
std::vector<DeltaFixture<C>> random_fixtures(const C& c, std::mt19937_64& rng, int count) {
  std::vector<DeltaFixture<C>> out;
  for (int k = 0; k < count; ++k) {
    auto s = random_ses(c, rng);
    auto m = random_ses_morphism(c, s, rng);
    out.push_back({s.ses, m.target.ses, m.map});
  }
  return out;
}

Diagram arrow_diagram(const DiagramCategory& D, const ModMor& u) {
  const auto& I = D.index();
  std::vector<ModMor> maps(3);
  maps[I.morphism_index("id0")] = D.base().identity(u.source());
  maps[I.morphism_index("id1")] = D.base().identity(u.target());
  maps[I.morphism_index("u")] = u;
  return D.make({u.source(), u.target()}, maps);
}

}  // namespace

TEST_CASE("delta axiom suite over Z") {
  std::mt19937_64 rng(5);
  ModuleCategory C;
  auto fixtures = random_fixtures(C, rng, 12);
  for (const auto& F : {FunctorSpec::tensor_with(ModuleObj::cyclic(2)), FunctorSpec::tensor_with(ModuleObj::cyclic(4))}) {
    auto rep = delta_axiom_suite(C, F, fixtures, 1);
    CHECK(rep.cases == 12);
    CHECK(rep.rejected == 0);
    CHECK(rep.passed == 12);
    CHECK(rep.failures.empty());
  }
}

TEST_CASE("delta axiom suite rejects planted non-morphisms") {
  ModuleCategory C;
  auto Z = ModuleObj::cyclic(0), Z2 = ModuleObj::cyclic(2);
  auto s = make_ses(C, zmap(Z, Z, {{2}}), zmap(Z, Z2, {{1}}));
  DeltaFixture<ModuleCategory> id{s, s, {C.identity(Z), C.identity(Z), C.identity(Z2)}};
  auto F = FunctorSpec::tensor_with(Z2);
  CHECK(delta_axiom_case(C, F, id, 2).pass());
  // beta = 3 but alpha = 1: the left square fails
  DeltaFixture<ModuleCategory> bad{s, s, {C.identity(Z), zmap(Z, Z, {{3}}), C.identity(Z2)}};
  auto r = delta_axiom_case(C, F, bad, 2);
  REQUIRE(r.rejected);
  CHECK(r.rejected->find("left square") != std::string::npos);
  auto suite = delta_axiom_suite(C, F, {id, bad}, 1);
  CHECK(suite.passed == 1);
  CHECK(suite.rejected == 1);
  CHECK(suite.all_pass());
}

TEST_CASE("delta axiom suite over diagram categories") {
  std::mt19937_64 rng(6);
  for (const char* name : {"arrow", "square"}) {
    DiagramCategory D(FinCat::standard(name), ModuleCategory());
    auto fixtures = random_fixtures(D, rng, 2);
    auto F = FunctorSpec::exponent(FunctorSpec::tensor_with(ModuleObj::cyclic(2)), D.index_ptr());
    auto rep = delta_axiom_suite(D, F, fixtures, 1);
    INFO(name);
    for (const auto& f : rep.failures) INFO(f);
    CHECK(rep.passed == 2);
  }
}

TEST_CASE("comparison of derived functors of diagrams") {
  DiagramCategory D(FinCat::standard("arrow"), ModuleCategory());
  const ModuleCategory& C = D.base();
  auto Z4 = ModuleObj::cyclic(4), Z2 = ModuleObj::cyclic(2);
  auto A = arrow_diagram(D, zmap(Z4, Z2, {{1}}));
  auto F = FunctorSpec::tensor_with(Z2);
  auto r = comparison_iso(D, F, A, 1);
  CHECK(r.iso);
  CHECK_FALSE(r.natural);
  // Tor_1(Z/4, Z/2) = Z/2 and Tor_1(Z/2, Z/2) = Z/2 by hand
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(r.left_diagram.at(i).invariant_factors() == std::vector<Int>{2});
    CHECK(r.right.object.at(i).invariant_factors() == std::vector<Int>{2});
  }
  auto r3 = comparison_iso(D, F, A, 3);
  CHECK(r3.iso);
  CHECK(D.is_zero_object(r3.left_diagram));
  CHECK(D.is_zero_object(r3.right.object));

  DiagramCategory P(FinCat::standard("point"), C);
  CHECK(comparison_iso(P, F, P.constant(Z4), 1).iso);
}

TEST_CASE("comparison iso on random diagrams with naturality") {
  std::mt19937_64 rng(17);
  Ring c2 = group_algebra(2, cyclic_group_table(2));
  for (const char* name : {"arrow", "square"}) {
    DiagramCategory D(FinCat::standard(name), ModuleCategory());
    auto F = FunctorSpec::tensor_with(ModuleObj::cyclic(2));
    for (int t = 0; t < 3; ++t) {
      auto a = random_presented(D, rng);
      auto f = random_morphism_from(D, a, rng);
      for (std::size_t n = 1; n <= 2; ++n) {
        auto ca = comparison_iso(D, F, a.object, n);
        auto cb = comparison_iso(D, F, f.target.object, n);
        CHECK(ca.iso);
        CHECK_FALSE(ca.natural);
        CHECK(comparison_naturality(D, F, ca, cb, f.map, n));
      }
    }
    DiagramCategory G(FinCat::standard(name), ModuleCategory(c2));
    auto H = FunctorSpec::coinvariants(c2);
    auto d = random_diagram(G, rng);
    CHECK(comparison_iso(G, H, d, 1).iso);
  }
}
