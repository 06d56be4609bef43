#pragma once

#include "fch/homology.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fch {

/// A morphism of SESs s -> t, as fed to the delta-functor checks.
template <AbelianCategory C>
struct DeltaFixture {
  SESOf<C> s, t;
  SESMorphism<typename C::Morphism> m;
};

struct DeltaCaseReport {
  std::optional<std::string> rejected;  // fixture validation failure
  bool les_exact = false;
  bool squares_commute = false;
  bool components_exact = true;  // each F^i family (diagram targets only)
  bool gamma_natural = true;     // F_n(i), F_n(p), delta_n are maps of diagrams
  std::vector<std::string> failures;

  bool pass() const { return !rejected && les_exact && squares_commute && components_exact && gamma_natural; }
};

namespace detail {

template <class Mor>
void check_natural(const Mor& f, const std::string& name, DeltaCaseReport& r) {
  if constexpr (std::is_same_v<Mor, DiagMor>) {
    if (auto why = naturality_violation(f)) {
      r.gamma_natural = false;
      r.failures.push_back(name + ": " + *why);
    }
  }
}

template <class T, class Obj, class Mor>
void check_components(const T& t, const LES<Obj, Mor>& les, DeltaCaseReport& r) {
  if constexpr (std::is_same_v<Mor, DiagMor>) {
    const auto& base = t.base();
    for (std::size_t i = 0; i < t.index().num_objects(); ++i) {
      const std::string at = " at " + t.index().objects()[i];
      for (std::size_t n = 0; n <= les.n_max; ++n) {
        const std::string k = std::to_string(n);
        auto fp_next = n >= 1 ? les.delta[n].at(i) : base.zero_morphism(les.FN[0].at(i), base.zero_object());
        std::vector<std::pair<std::string, std::pair<ModMor, ModMor>>> pos{
            {"F" + k + "(M)", {les.Fi[n].at(i), les.Fp[n].at(i)}},
            {"F" + k + "(N)", {les.Fp[n].at(i), fp_next}},
            {"F" + k + "(L)", {les.delta[n + 1].at(i), les.Fi[n].at(i)}}};
        for (const auto& [name, fg] : pos) {
          auto e = check_position(base, name, fg.first, fg.second);
          if (!e.composite_zero || !e.exact) {
            r.components_exact = false;
            r.failures.push_back("component LES not exact at " + name + at);
          }
        }
      }
    }
    for (std::size_t n = 0; n <= les.n_max + 1; ++n) {
      const std::string k = std::to_string(n);
      check_natural(les.Fi[n], "F" + k + "(i)", r);
      check_natural(les.Fp[n], "F" + k + "(p)", r);
      if (n >= 1) check_natural(les.delta[n], "delta" + k, r);
    }
  }
}

}  // namespace detail

/// Axioms (ii) and (iii) of a homological delta-functor on one fixture;
/// (i) holds by construction since resolutions start in degree 0.
template <AbelianCategory C, class F>
DeltaCaseReport delta_axiom_case(const C& c, const F& functor, const DeltaFixture<C>& fx, std::size_t n_max) {
  DeltaCaseReport r;
  if (auto why = ses_violation(c, fx.s)) r.rejected = "source: " + *why;
  else if (auto why2 = ses_violation(c, fx.t)) r.rejected = "target: " + *why2;
  else if (auto why3 = ses_morphism_violation(c, fx.s, fx.t, fx.m)) r.rejected = "morphism: " + *why3;
  if (r.rejected) return r;

  auto t = target_category(functor, c);
  auto a = les_of_ses(c, functor, fx.s, n_max);
  auto b = les_of_ses(c, functor, fx.t, n_max);
  r.les_exact = a.les.all_exact() && b.les.all_exact();
  for (const auto* les : {&a.les, &b.les})
    for (const auto& e : les->checks)
      if (!e.exact || !e.composite_zero) r.failures.push_back("LES not exact at " + e.position);
  auto sq = les_morphism_squares(c, functor, t, a, b, fx.m);
  r.squares_commute = sq.all_commute();
  for (const auto& e : sq.squares)
    if (!e.exact) r.failures.push_back(e.position + " does not commute");
  detail::check_components(t, a.les, r);
  detail::check_components(t, b.les, r);
  return r;
}

struct SuiteReport {
  std::size_t cases = 0, passed = 0, rejected = 0;
  std::vector<std::string> failures;
  bool all_pass() const { return passed + rejected == cases && failures.empty(); }
};

template <AbelianCategory C, class F>
SuiteReport delta_axiom_suite(const C& c, const F& functor, const std::vector<DeltaFixture<C>>& fixtures,
                              std::size_t n_max) {
  SuiteReport s;
  for (std::size_t k = 0; k < fixtures.size(); ++k) {
    auto r = delta_axiom_case(c, functor, fixtures[k], n_max);
    ++s.cases;
    if (r.rejected) {
      ++s.rejected;
    } else if (r.pass()) {
      ++s.passed;
    } else {
      for (const auto& f : r.failures) s.failures.push_back("case " + std::to_string(k) + ": " + f);
    }
  }
  return s;
}

/// (L_n F)^I(A) -> L_n(F^I)(A): the left side from independent resolutions of
/// each component, the right side from one resolution in C^I, joined by the
/// lifts Q^i -> pi^i(P) of the identity.
struct ComparisonData {
  ResolutionOf<DiagramCategory> diagram_res;
  HomologyOf<DiagramCategory> right;                 // L_n(F^I)(A) with its cycles
  std::vector<ResolutionOf<ModuleCategory>> comp_res;  // Q^i
  std::vector<HomologyOf<ModuleCategory>> left;      // (L_n F)(A^i)
  Diagram left_diagram;                              // (L_n F)^I(A)
  DiagMor map;                                       // the comparison
  bool iso = false;
  std::optional<std::string> natural;  // naturality violation of the comparison, if any
};

namespace detail {

inline ResolutionOf<ModuleCategory> project_resolution(const ResolutionOf<DiagramCategory>& r, std::size_t i) {
  ResolutionOf<ModuleCategory> q;
  q.resolved = r.resolved.at(i);
  q.augmentation = r.augmentation.at(i);
  for (const auto& o : r.complex.objects) q.complex.objects.push_back(o.at(i));
  for (const auto& d : r.complex.d) q.complex.d.push_back(d.at(i));
  return q;
}

inline HomologyOf<ModuleCategory> project_homology(const HomologyOf<DiagramCategory>& h, std::size_t i) {
  return {h.object.at(i), h.cycles.at(i), h.cycles_mono.at(i), h.quotient.at(i)};
}

}  // namespace detail

inline ComparisonData comparison_iso(const DiagramCategory& D, const FunctorSpec& F, const Diagram& a, std::size_t n) {
  const FunctorSpec& F0 = F.base();
  auto FI = FunctorSpec::exponent(F0, D.index_ptr());
  const ModuleCategory& C = D.base();
  auto T = target_category(FI, D);
  const ModuleCategory& TB = T.base();
  const FinCat& I = D.index();

  ComparisonData out;
  out.diagram_res = resolve(D, a, n + 1);
  out.right = homology_at(T, apply_functor<DiagramCategory>(FI, out.diagram_res.complex), n);

  std::vector<ModuleObj> comps;
  std::vector<ModMor> cmaps;
  for (std::size_t i = 0; i < I.num_objects(); ++i) {
    out.comp_res.push_back(resolve(C, a.at(i), n + 1));
    out.left.push_back(homology_at(TB, apply_functor<ModuleCategory>(F0, out.comp_res[i].complex), n));
    comps.push_back(out.left[i].object);
    auto pi = detail::project_resolution(out.diagram_res, i);
    auto phi = lift_chain_map(C, out.comp_res[i], pi, C.identity(a.at(i)));
    cmaps.push_back(induced_on_homology(TB, out.left[i], detail::project_homology(out.right, i), F0(phi[n])));
  }
  std::vector<ModMor> structure;
  for (std::size_t m = 0; m < I.num_morphisms(); ++m) {
    const auto s = I.arrow(m).source, t = I.arrow(m).target;
    auto phi = lift_chain_map(C, out.comp_res[s], out.comp_res[t], a.map(m));
    structure.push_back(induced_on_homology(TB, out.left[s], out.left[t], F0(phi[n])));
  }
  out.left_diagram = T.make(std::move(comps), std::move(structure));
  out.map = DiagMor(out.left_diagram, out.right.object, std::move(cmaps));
  out.natural = naturality_violation(out.map);
  out.iso = is_iso(T, out.map);
  return out;
}

/// Both ways around the square for f: A -> B:
///   comparison_B o (L_n F)^I(f)  ==  L_n(F^I)(f) o comparison_A.
inline bool comparison_naturality(const DiagramCategory& D, const FunctorSpec& F, const ComparisonData& a,
                                  const ComparisonData& b, const DiagMor& f, std::size_t n) {
  const FunctorSpec& F0 = F.base();
  auto FI = FunctorSpec::exponent(F0, D.index_ptr());
  auto T = target_category(FI, D);
  const ModuleCategory& C = D.base();
  auto phi = lift_chain_map(D, a.diagram_res, b.diagram_res, f);
  auto right = induced_on_homology(T, a.right, b.right, FI(phi[n]));
  std::vector<ModMor> lc;
  for (std::size_t i = 0; i < D.index().num_objects(); ++i) {
    auto psi = lift_chain_map(C, a.comp_res[i], b.comp_res[i], f.at(i));
    lc.push_back(induced_on_homology(T.base(), a.left[i], b.left[i], F0(psi[n])));
  }
  DiagMor left(a.left_diagram, b.left_diagram, std::move(lc));
  if (naturality_violation(left)) return false;
  return T.equal(T.compose(b.map, left), T.compose(right, a.map));
}

}  // namespace fch
