#pragma once

// Seeded property batteries shared by the workbench, the CLI and the
// acceptance runner. Each returns a tally; failures carry the case number.

#include "fch/bifunctor.hpp"
#include "fch/derived.hpp"
#include "fch/random.hpp"
#include "fch/snf.hpp"
#include "fch/spectral.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace fch {

struct Battery {
  std::string suite;
  std::size_t cases = 0, passed = 0, rejected = 0;
  std::vector<std::string> failures;

  bool pass() const { return cases > 0 && failures.empty() && passed + rejected == cases; }
  std::string summary() const {
    std::string s = std::to_string(passed) + "/" + std::to_string(cases) + " pass";
    if (rejected) s += ", " + std::to_string(rejected) + " rejected";
    return s;
  }
  void record(std::size_t k, bool ok, const std::string& why = {}) {
    ++cases;
    if (ok) ++passed;
    else failures.push_back("case " + std::to_string(k) + (why.empty() ? "" : ": " + why));
  }
};

namespace detail {

/// Exact determinant by fraction-free elimination.
inline Int bareiss_det(IntMatrix a) {
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && a(r, k) == 0) ++r;
      if (r == n) return 0;
      a.swap_rows(k, r);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Int x = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = x;
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

template <class F>
void guarded(Battery& b, std::size_t k, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    b.record(k, false, std::string("exception: ") + e.what());
  }
}

}  // namespace detail

/// U A V = D with unimodular U, V and a divisibility chain.
inline Battery snf_battery(std::size_t cases, std::uint64_t seed, std::size_t max_dim = 6, long bound = 10) {
  Battery b;
  b.suite = "snf";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> dim(1, max_dim);
  std::uniform_int_distribution<long> val(-bound, bound);
  for (std::size_t k = 0; k < cases; ++k) {
    IntMatrix a(dim(rng), dim(rng));
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = val(rng);
    auto s = snf(a);
    std::string why;
    if (!(s.U * a * s.V == s.D)) why = "U A V != D";
    else if (abs(detail::bareiss_det(s.U)) != 1) why = "det U is not a unit";
    else if (abs(detail::bareiss_det(s.V)) != 1) why = "det V is not a unit";
    for (std::size_t i = 0; why.empty() && i < s.D.rows(); ++i)
      for (std::size_t j = 0; j < s.D.cols(); ++j)
        if (i != j && sgn(s.D(i, j)) != 0) why = "off-diagonal entry";
    for (std::size_t i = 0; why.empty() && i + 1 < s.rank; ++i)
      if (!mpz_divisible_p(s.D(i + 1, i + 1).get_mpz_t(), s.D(i, i).get_mpz_t())) why = "divisibility chain broken";
    b.record(k, why.empty(), why);
  }
  return b;
}

/// Exactness of random composable pairs of diagram maps, decided in C^I and
/// componentwise; the verdicts must agree.
inline Battery les_battery(std::size_t cases, std::uint64_t seed) {
  Battery b;
  b.suite = "les";
  std::mt19937_64 rng(seed);
  std::vector<DiagramCategory> cats;
  for (const char* name : {"arrow", "square", "parallel"}) cats.emplace_back(FinCat::standard(name), ModuleCategory());
  for (std::size_t k = 0; k < cases; ++k)
    detail::guarded(b, k, [&] {
      const auto& D = cats[k % 3];
      auto kind = static_cast<PairKind>((k / 3) % 3);
      auto pr = random_composable_pair(D, rng, kind);
      auto r = d_is_exact_at(D, pr.f, pr.g);
      bool ok = r.intrinsic == r.componentwise && (kind == PairKind::ZeroComposite || r.intrinsic);
      b.record(k, ok, ok ? "" : "intrinsic and componentwise verdicts differ");
    });
  return b;
}

/// Kernels in C^I: f o mono = 0, the induced structure maps satisfy their
/// squares, and maps killed by f factor uniquely through the kernel.
inline Battery kernel_battery(std::size_t cases, std::uint64_t seed) {
  Battery b;
  b.suite = "kernel";
  std::mt19937_64 rng(seed);
  std::vector<DiagramCategory> cats;
  for (const char* name : {"arrow", "square", "parallel"}) cats.emplace_back(FinCat::standard(name), ModuleCategory());
  for (std::size_t k = 0; k < cases; ++k)
    detail::guarded(b, k, [&] {
      const auto& D = cats[k % 3];
      const auto& C = D.base();
      const auto& I = D.index();
      auto a = random_presented(D, rng);
      auto f = random_morphism_from(D, a, rng).map;
      auto ker = D.kernel(f);
      std::string why;
      if (!D.is_zero(D.compose(f, ker.mono))) why = "f o mono != 0";
      else if (!is_mono(D, ker.mono)) why = "kernel map is not mono";
      for (std::size_t m = 0; why.empty() && m < I.num_morphisms(); ++m) {
        const auto s = I.arrow(m).source, t = I.arrow(m).target;
        if (!C.equal(C.compose(ker.mono.at(t), ker.object.map(m)), C.compose(f.source().map(m), ker.mono.at(s))))
          why = "induced map over " + I.arrow(m).label + " fails its square";
      }
      for (int trial = 0; why.empty() && trial < 3; ++trial) {
        auto P = random_free(D, rng);
        // one map that is killed by construction, one arbitrary
        auto h1 = D.compose(ker.mono, D.random_from_free(P, ker.object, rng));
        auto h2 = D.random_from_free(P, f.source(), rng);
        for (const auto& h : {h1, h2}) {
          bool killed = D.is_zero(D.compose(f, h));
          auto g = D.factor_through_mono(ker.mono, h);
          if (killed && (!g || !D.equal(D.compose(ker.mono, *g), h))) why = "a map killed by f does not factor";
          if (!killed && g) why = "a map not killed by f factors";
        }
      }
      b.record(k, why.empty(), why);
    });
  return b;
}

/// Long exact sequences and delta squares for random morphisms of SESs of
/// diagrams, with F cycling through - (x) Z/2, - (x) Z/4 and base change to F_2.
inline Battery delta_battery(std::size_t cases, std::uint64_t seed, std::size_t n_max = 1) {
  Battery b;
  b.suite = "delta";
  std::mt19937_64 rng(seed);
  std::vector<DiagramCategory> cats;
  for (const char* name : {"arrow", "square"}) cats.emplace_back(FinCat::standard(name), ModuleCategory());
  std::vector<FunctorSpec> base{FunctorSpec::tensor_with(ModuleObj::cyclic(2)),
                                FunctorSpec::tensor_with(ModuleObj::cyclic(4)),
                                FunctorSpec::base_change(RingMap::from_integers(Ring::prime_field(2)))};
  for (std::size_t k = 0; k < cases; ++k)
    detail::guarded(b, k, [&] {
      const auto& D = cats[k % 2];
      auto F = FunctorSpec::exponent(base[(k / 2) % 3], D.index_ptr());
      auto s = random_ses(D, rng);
      auto m = random_ses_morphism(D, s, rng);
      auto r = delta_axiom_case(D, F, DeltaFixture<DiagramCategory>{s.ses, m.target.ses, m.map}, n_max);
      if (r.rejected) {
        ++b.cases;
        ++b.rejected;
        return;
      }
      b.record(k, r.pass(), r.failures.empty() ? "" : r.failures.front());
    });
  return b;
}

/// (L_n F)^I(A) -> L_n(F^I)(A) is an isomorphism, natural in A.
inline Battery iso_battery(std::size_t cases, std::uint64_t seed) {
  Battery b;
  b.suite = "iso";
  std::mt19937_64 rng(seed);
  std::vector<DiagramCategory> cats;
  for (const char* name : {"arrow", "square"}) cats.emplace_back(FinCat::standard(name), ModuleCategory());
  std::vector<FunctorSpec> fs{FunctorSpec::tensor_with(ModuleObj::cyclic(2)), FunctorSpec::tensor_with(ModuleObj::cyclic(4))};
  for (std::size_t k = 0; k < cases; ++k)
    detail::guarded(b, k, [&] {
      const auto& D = cats[k % 2];
      const auto& F = fs[(k / 2) % 2];
      const std::size_t n = 1 + (k / 4) % 3;
      auto a = random_presented(D, rng);
      auto f = random_morphism_from(D, a, rng);
      auto ca = comparison_iso(D, F, a.object, n);
      auto cb = comparison_iso(D, F, f.target.object, n);
      std::string why;
      if (!ca.iso || !cb.iso) why = "comparison is not an isomorphism";
      else if (ca.natural || cb.natural) why = "comparison is not a map of diagrams";
      else if (!comparison_naturality(D, F, ca, cb, f.map, n)) why = "naturality square fails";
      b.record(k, why.empty(), why);
    });
  return b;
}

/// Ladders of LESs for B = tensor, in both variables, over Z and over
/// arrow x arrow diagrams, with the product identification.
inline Battery ladder_battery(std::size_t cases, std::uint64_t seed) {
  Battery b;
  b.suite = "ladder";
  std::mt19937_64 rng(seed);
  ModuleCategory C;
  ModuleTensor T(Ring::integers());
  auto arrow = std::make_shared<const FinCat>(FinCat::standard("arrow"));
  DiagramTensor TA(arrow, arrow, Ring::integers());
  for (std::size_t k = 0; k < cases; ++k)
    detail::guarded(b, k, [&] {
      std::string why;
      if (k % 2 == 0) {
        auto s = random_ses(C, rng);
        auto m = random_ses_morphism(C, s, rng);
        auto y = random_presented(C, rng);
        auto g = random_morphism_from(C, y, rng).map;
        if (!ladder(T, s.ses, m.target.ses, m.map, g, 1).pass()) why = "first-variable ladder";
        else if (!ladder_switched(T, s.ses, m.target.ses, m.map, g, 1).pass()) why = "second-variable ladder";
      } else {
        auto s = random_ses(TA.first(), rng);
        auto m = random_ses_morphism(TA.first(), s, rng);
        auto y = random_presented(TA.second(), rng);
        auto g = random_morphism_from(TA.second(), y, rng).map;
        if (!ladder(TA, s.ses, m.target.ses, m.map, g, 1).pass()) why = "diagram ladder";
        else if (!ladder_switched(TA, s.ses, m.target.ses, m.map, g, 1).pass()) why = "switched diagram ladder";
        else if (auto id = product_identification(TA, s.ses, m.target.ses, m.map, g, 1); !id.pass())
          why = "product identification: " + (id.failures.empty() ? std::string("mismatch") : id.failures.front());
      }
      b.record(k, why.empty(), why);
    });
  return b;
}

/// Tor computed by resolving either variable gives isomorphic answers.
inline Battery balance_battery(std::size_t cases, std::uint64_t seed, std::size_t n_max = 2) {
  Battery b;
  b.suite = "balance";
  std::mt19937_64 rng(seed);
  Ring c2 = group_algebra(2, cyclic_group_table(2));
  std::vector<ModuleCategory> cats{ModuleCategory(), ModuleCategory(c2)};
  for (std::size_t k = 0; k < cases; ++k)
    detail::guarded(b, k, [&] {
      const auto& C = cats[k % 2];
      auto A = random_module(C, rng), B = random_module(C, rng);
      std::string why;
      for (std::size_t n = 0; n <= n_max && why.empty(); ++n)
        if (!balance(A, B, n).iso) why = "comparison not iso in degree " + std::to_string(n);
      b.record(k, why.empty(), why);
    });
  return b;
}

/// Grothendieck spectral sequences for random F_2[C4]-modules along
/// C4 -> C2 -> 1, and random double complexes; every fourth case is an
/// arrow diagram checked for naturality.
inline Battery ss_battery(std::size_t cases, std::uint64_t seed, std::size_t n_max = 2) {
  Battery b;
  b.suite = "ss";
  std::mt19937_64 rng(seed);
  Ring c4 = group_algebra(2, cyclic_group_table(4));
  Ring c2 = group_algebra(2, cyclic_group_table(2));
  auto F = FunctorSpec::base_change(RingMap::from_group_hom(c4, c2, {0, 1, 0, 1}));
  auto G = FunctorSpec::coinvariants(c2);
  ModuleCategory C(c4);
  DiagramCategory D(FinCat::standard("arrow"), C);
  RandomOptions small;
  small.max_summands = 2;
  small.max_relations = 1;
  for (std::size_t k = 0; k < cases; ++k)
    detail::guarded(b, k, [&] {
      std::string why;
      if (k % 4 == 3) {
        auto a = random_presented(D, rng, small);
        auto r = ss_componentwise(F, G, a.object, D.index(), n_max);
        if (!r.pass()) why = r.failures.empty() ? "component spectral sequence" : r.failures.front();
      } else {
        auto a = random_module(C, rng, small);
        auto r = grothendieck_ss(F, G, a, n_max);
        if (!r.e2_matches) why = "E2 differs from (L_pG)(L_qF)";
        else if (!r.abutment_matches) why = "abutment differs from L_n(GF)";
        else if (!r.data.ss.converges || !r.data.ss.pages_coherent || !r.data.ss.euler_consistent)
          why = "pages inconsistent";
        else if (!r.hypothesis.holds()) why = "acyclicity hypothesis fails";
      }
      b.record(k, why.empty(), why);
    });
  return b;
}

/// Suites reachable by name from the workbench and the CLI.
inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"les", "kernel", "delta", "iso", "ladder", "ss"};
  return names;
}

inline std::size_t default_cases(const std::string& suite) {
  if (suite == "les" || suite == "kernel") return 200;
  if (suite == "ss") return 8;
  return 20;
}

inline Battery run_suite(const std::string& suite, std::size_t cases, std::uint64_t seed) {
  if (suite == "les") return les_battery(cases, seed);
  if (suite == "kernel") return kernel_battery(cases, seed);
  if (suite == "delta") return delta_battery(cases, seed);
  if (suite == "iso") return iso_battery(cases, seed);
  if (suite == "ladder") return ladder_battery(cases, seed);
  if (suite == "ss") return ss_battery(cases, seed);
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

}  // namespace fch
