#pragma once

#include "fch/category.hpp"
#include "fch/functor.hpp"

#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fch {

/// A chain complex in degrees 0..top(): d[k] is the differential
/// objects[k+1] -> objects[k].
template <class Obj, class Mor>
struct Complex {
  std::vector<Obj> objects;
  std::vector<Mor> d;

  std::size_t top() const { return objects.empty() ? 0 : objects.size() - 1; }
  const Mor& diff(std::size_t n) const { return d.at(n - 1); }  // d_n: C_n -> C_{n-1}
};

template <AbelianCategory C>
using ComplexOf = Complex<typename C::Object, typename C::Morphism>;

/// A projective resolution P_top -> ... -> P_0 -> A (truncated at top()).
template <class Obj, class Mor>
struct Resolution {
  Complex<Obj, Mor> complex;
  Mor augmentation;  // P_0 -> A
  Obj resolved;
};

template <AbelianCategory C>
using ResolutionOf = Resolution<typename C::Object, typename C::Morphism>;

/// d o d = 0 in every degree.
template <AbelianCategory C>
bool is_complex(const C& c, const ComplexOf<C>& x) {
  for (std::size_t n = 2; n <= x.top(); ++n)
    if (!c.is_zero(c.compose(x.diff(n - 1), x.diff(n)))) return false;
  return true;
}

/// Iterated free covers of kernels, degrees 0..n_max.
template <AbelianCategory C>
ResolutionOf<C> resolve(const C& c, const typename C::Object& a, std::size_t n_max) {
  ResolutionOf<C> r;
  r.resolved = a;
  auto cov = c.free_cover(a);
  r.complex.objects.push_back(cov.object);
  r.augmentation = cov.epi;
  auto prev = cov.epi;
  for (std::size_t n = 1; n <= n_max; ++n) {
    auto k = c.kernel(prev);
    auto kc = c.free_cover(k.object);
    auto dn = c.compose(k.mono, kc.epi);
    r.complex.objects.push_back(kc.object);
    r.complex.d.push_back(dn);
    prev = dn;
  }
  return r;
}

template <class Obj, class Mor>
struct Homology {
  Obj object;
  Obj cycles;
  Mor cycles_mono;  // Z_n -> C_n
  Mor quotient;     // Z_n -> H_n
};

template <AbelianCategory C>
using HomologyOf = Homology<typename C::Object, typename C::Morphism>;

/// ker(d_n) / im(d_{n+1}); at the top degree the truncation is ignored, so
/// callers use n < top() for honest homology.
template <AbelianCategory C>
HomologyOf<C> homology_at(const C& c, const ComplexOf<C>& x, std::size_t n) {
  if (n > x.top() || x.objects.empty()) throw std::out_of_range("homology_at: degree out of range");
  auto out = n == 0 ? c.zero_morphism(x.objects[0], c.zero_object()) : x.diff(n);
  auto z = c.kernel(out);
  typename C::Morphism b;
  if (n < x.top()) {
    auto f = c.factor_through_mono(z.mono, x.diff(n + 1));
    if (!f) throw std::invalid_argument("homology_at: d o d != 0");
    b = *f;
  } else {
    b = c.zero_morphism(c.zero_object(), z.object);
  }
  auto q = c.cokernel(b);
  return {q.object, z.object, z.mono, q.epi};
}

/// The map H_n(X) -> H_n(Y) induced by a degree-n component of a chain map.
template <AbelianCategory C>
typename C::Morphism induced_on_homology(const C& c, const HomologyOf<C>& hx, const HomologyOf<C>& hy,
                                         const typename C::Morphism& phi_n) {
  auto z = c.factor_through_mono(hy.cycles_mono, c.compose(phi_n, hx.cycles_mono));
  if (!z) throw std::invalid_argument("induced_on_homology: map does not preserve cycles");
  auto h = c.factor_through_epi(hx.quotient, c.compose(hy.quotient, *z));
  if (!h) throw std::invalid_argument("induced_on_homology: map does not preserve boundaries");
  return *h;
}

/// F applied degreewise.
template <AbelianCategory C, class F>
auto apply_functor(const F& f, const ComplexOf<C>& x) {
  using O = decltype(f(x.objects.front()));
  using M = decltype(f(x.d.front()));
  Complex<O, M> y;
  for (const auto& o : x.objects) y.objects.push_back(f(o));
  for (const auto& m : x.d) y.d.push_back(f(m));
  return y;
}

/// Chain map lifting f: A -> B along resolutions P -> A, Q -> B (degrees 0..min top).
template <AbelianCategory C>
std::vector<typename C::Morphism> lift_chain_map(const C& c, const ResolutionOf<C>& p, const ResolutionOf<C>& q,
                                                 const typename C::Morphism& f) {
  std::vector<typename C::Morphism> phi;
  auto phi0 = c.lift(q.augmentation, c.compose(f, p.augmentation));
  if (!phi0) throw std::logic_error("lift_chain_map: degree 0 lift failed");
  phi.push_back(*phi0);
  const std::size_t top = std::min(p.complex.top(), q.complex.top());
  for (std::size_t n = 1; n <= top; ++n) {
    auto h = c.lift(q.complex.diff(n), c.compose(phi[n - 1], p.complex.diff(n)));
    if (!h) throw std::logic_error("lift_chain_map: lift failed in degree " + std::to_string(n));
    phi.push_back(*h);
  }
  return phi;
}

/// A short exact sequence 0 -> L -i-> M -p-> N -> 0.
template <class Obj, class Mor>
struct SES {
  Mor i, p;
  const Obj& L() const { return i.source(); }
  const Obj& M() const { return i.target(); }
  const Obj& N() const { return p.target(); }
};

template <AbelianCategory C>
using SESOf = SES<typename C::Object, typename C::Morphism>;

template <AbelianCategory C>
std::optional<std::string> ses_violation(const C& c, const SESOf<C>& s) {
  if (!c.is_zero(c.compose(s.p, s.i))) return "composite p o i is nonzero";
  if (!is_mono(c, s.i)) return "first map is not a monomorphism";
  if (!is_epi(c, s.p)) return "second map is not an epimorphism";
  if (!is_exact_at(c, s.i, s.p)) return "not exact at the middle term";
  return std::nullopt;
}

template <AbelianCategory C>
SESOf<C> make_ses(const C& c, typename C::Morphism i, typename C::Morphism p) {
  SESOf<C> s{std::move(i), std::move(p)};
  if (auto why = ses_violation(c, s)) throw std::invalid_argument("not a short exact sequence: " + *why);
  return s;
}

/// Vertical maps between two SESs.
template <class Mor>
struct SESMorphism {
  Mor alpha, beta, gamma;
};

template <AbelianCategory C>
std::optional<std::string> ses_morphism_violation(const C& c, const SESOf<C>& s, const SESOf<C>& t,
                                                  const SESMorphism<typename C::Morphism>& m) {
  if (!c.equal(c.compose(t.i, m.alpha), c.compose(m.beta, s.i))) return "left square does not commute";
  if (!c.equal(c.compose(t.p, m.beta), c.compose(m.gamma, s.p))) return "right square does not commute";
  return std::nullopt;
}

/// A resolution of M built from resolutions of L and N, with the split
/// inclusion / projection chain maps.
template <AbelianCategory C>
struct Horseshoe {
  ResolutionOf<C> middle;
  std::vector<typename C::Morphism> in, pr;    // P^L_n -> P^M_n, P^M_n -> P^N_n
  std::vector<typename C::Morphism> in2, pr1;  // the splitting: P^N_n -> P^M_n, P^M_n -> P^L_n
};

template <AbelianCategory C>
Horseshoe<C> horseshoe(const C& c, const SESOf<C>& s, const ResolutionOf<C>& rl, const ResolutionOf<C>& rn) {
  using Mor = typename C::Morphism;
  const std::size_t top = std::min(rl.complex.top(), rn.complex.top());
  Horseshoe<C> h;
  auto sigma0 = c.lift(s.p, rn.augmentation);
  if (!sigma0) throw std::invalid_argument("horseshoe: cannot lift the augmentation of N");
  std::vector<Mor> sigma{*sigma0};
  std::vector<typename C::Object> objs;
  std::vector<Mor> pr1, pr2, in2;
  for (std::size_t n = 0; n <= top; ++n) {
    auto b = c.biproduct(rl.complex.objects[n], rn.complex.objects[n]);
    objs.push_back(b.object);
    h.in.push_back(b.in1);
    h.pr.push_back(b.pr2);
    h.in2.push_back(b.in2);
    h.pr1.push_back(b.pr1);
    pr1.push_back(b.pr1);
    pr2.push_back(b.pr2);
    in2.push_back(b.in2);
  }
  h.middle.resolved = s.M();
  h.middle.complex.objects = objs;
  h.middle.augmentation =
      c.add(c.compose(c.compose(s.i, rl.augmentation), pr1[0]), c.compose(sigma[0], pr2[0]));
  for (std::size_t n = 1; n <= top; ++n) {
    Mor sn;
    if (n == 1) {
      auto x = c.lift(c.compose(s.i, rl.augmentation), c.negate(c.compose(sigma[0], rn.complex.diff(1))));
      if (!x) throw std::invalid_argument("horseshoe: degree 1 correction does not lift");
      sn = *x;
    } else {
      auto x = c.lift(rl.complex.diff(n - 1), c.negate(c.compose(sigma[n - 1], rn.complex.diff(n))));
      if (!x) throw std::invalid_argument("horseshoe: correction does not lift in degree " + std::to_string(n));
      sn = *x;
    }
    sigma.push_back(sn);
    // d^M_n = in1 d^L pr1 + in1 sigma_n pr2 + in2 d^N pr2
    Mor dm = c.add(c.add(c.compose(h.in[n - 1], c.compose(rl.complex.diff(n), pr1[n])),
                         c.compose(h.in[n - 1], c.compose(sn, pr2[n]))),
                   c.compose(in2[n - 1], c.compose(rn.complex.diff(n), pr2[n])));
    h.middle.complex.d.push_back(dm);
  }
  return h;
}

/// A chain map between horseshoe resolutions lifting a morphism of SESs m,
/// restricting to in' phi_L on P^L and projecting to phi_N pr on P^N.
/// Only the correction P^N_n -> P'^L_n is solved for.
template <AbelianCategory C>
std::vector<typename C::Morphism> horseshoe_lift(const C& c, const Horseshoe<C>& h, const Horseshoe<C>& h2,
                                                 const SESOf<C>& s, const SESMorphism<typename C::Morphism>& m,
                                                 const std::vector<typename C::Morphism>& phi_l,
                                                 const std::vector<typename C::Morphism>& phi_n) {
  using Mor = typename C::Morphism;
  const auto& M = h.middle;
  const auto& M2 = h2.middle;
  const std::size_t top = std::min({M.complex.top(), M2.complex.top(), phi_l.size() - 1, phi_n.size() - 1});
  std::vector<Mor> out;
  for (std::size_t n = 0; n <= top; ++n) {
    Mor base_n = c.compose(h2.in2[n], phi_n[n]);
    Mor want, along;
    if (n == 0) {
      // augmentation: eps' X = beta eps in2
      want = c.add(c.compose(m.beta, c.compose(M.augmentation, h.in2[0])), c.negate(c.compose(M2.augmentation, base_n)));
      along = c.compose(M2.augmentation, h2.in[0]);
    } else {
      want = c.add(c.compose(out[n - 1], c.compose(M.complex.diff(n), h.in2[n])),
                   c.negate(c.compose(M2.complex.diff(n), base_n)));
      along = c.compose(M2.complex.diff(n), h2.in[n]);
    }
    auto tau = c.lift(along, want);
    if (!tau) throw std::logic_error("horseshoe_lift: correction does not lift in degree " + std::to_string(n));
    Mor x = c.add(base_n, c.compose(h2.in[n], *tau));
    out.push_back(c.add(c.compose(h2.in[n], c.compose(phi_l[n], h.pr1[n])), c.compose(x, h.pr[n])));
  }
  (void)s;
  return out;
}

/// A degreewise short exact sequence of complexes X -iota-> Y -rho-> W.
template <class Obj, class Mor>
struct ComplexSES {
  Complex<Obj, Mor> X, Y, W;
  std::vector<Mor> iota, rho;
};

/// delta_n: H_n(W) -> H_{n-1}(X) by the zig-zag through a free cover of the
/// cycles of W. With a generator, the lifts are perturbed by elements of the
/// kernel of rho and by boundaries.
template <AbelianCategory C>
typename C::Morphism connecting(const C& c, const ComplexSES<typename C::Object, typename C::Morphism>& s,
                                const HomologyOf<C>& hw_n, const HomologyOf<C>& hx_nm1, std::size_t n,
                                std::mt19937_64* perturb = nullptr) {
  if (n == 0) throw std::invalid_argument("connecting: n must be positive");
  auto cov = c.free_cover(hw_n.cycles);
  auto lam = c.lift(s.rho[n], c.compose(hw_n.cycles_mono, cov.epi));
  if (!lam) throw std::invalid_argument("connecting: rho is not onto in degree " + std::to_string(n));
  auto lambda = *lam;
  if (perturb) {
    lambda = c.add(lambda, c.compose(s.iota[n], c.random_from_free(cov.object, s.X.objects[n], *perturb)));
    if (n + 1 <= s.Y.top())
      lambda = c.add(lambda, c.compose(s.Y.diff(n + 1), c.random_from_free(cov.object, s.Y.objects[n + 1], *perturb)));
  }
  auto mu = c.factor_through_mono(s.iota[n - 1], c.compose(s.Y.diff(n), lambda));
  if (!mu) throw std::invalid_argument("connecting: boundary does not come from X (not a SES of complexes?)");
  auto nu = c.factor_through_mono(hx_nm1.cycles_mono, *mu);
  if (!nu) throw std::logic_error("connecting: zig-zag does not land in cycles");
  auto delta = c.factor_through_epi(c.compose(hw_n.quotient, cov.epi), c.compose(hx_nm1.quotient, *nu));
  if (!delta) throw std::logic_error("connecting: zig-zag is not well defined on homology");
  return *delta;
}

/// One position of a long exact sequence and its verdict.
struct ExactnessCheck {
  std::string position;
  bool composite_zero = false;
  bool exact = false;
};

/// ... -> F_n L -> F_n M -> F_n N -delta_n-> F_{n-1} L -> ... -> F_0 N -> 0.
template <class Obj, class Mor>
struct LES {
  std::size_t n_max = 0;
  std::vector<Obj> FL, FM, FN;  // n = 0..n_max+1
  std::vector<Mor> Fi, Fp;      // F_n(i), F_n(p)
  std::vector<Mor> delta;       // delta[n]: F_n N -> F_{n-1} L, n >= 1 (delta[0] unused)
  std::vector<ExactnessCheck> checks;

  bool all_exact() const {
    for (const auto& c : checks)
      if (!c.exact || !c.composite_zero) return false;
    return true;
  }
};

/// Homology of the three rows of a degreewise SES of complexes and the LES
/// joining them.
template <AbelianCategory T>
struct LESData {
  ComplexSES<typename T::Object, typename T::Morphism> applied;
  std::vector<HomologyOf<T>> hl, hm, hn;
  LES<typename T::Object, typename T::Morphism> les;
};

/// The derived data of a SES under a functor, kept for naturality checks.
template <class SrcC, class TgtC>
struct LESComputation : LESData<TgtC> {
  ResolutionOf<SrcC> rl, rn;
  Horseshoe<SrcC> hs;
};

template <AbelianCategory T>
ExactnessCheck check_position(const T& t, const std::string& where, const typename T::Morphism& f,
                              const typename T::Morphism& g) {
  ExactnessCheck e{where, t.is_zero(t.compose(g, f)), false};
  if (e.composite_zero) e.exact = is_exact_at(t, f, g);
  return e;
}

/// Fills homology, induced maps, connecting maps and exactness checks for
/// degrees 0..n_max (the complexes must reach degree n_max + 2).
template <AbelianCategory T>
void les_from_complex_ses(const T& t, LESData<T>& out, std::size_t n_max, std::mt19937_64* perturb = nullptr) {
  const auto& ap = out.applied;
  auto& les = out.les;
  les.n_max = n_max;
  les.delta.resize(n_max + 2);
  for (std::size_t n = 0; n <= n_max + 1; ++n) {
    out.hl.push_back(homology_at(t, ap.X, n));
    out.hm.push_back(homology_at(t, ap.Y, n));
    out.hn.push_back(homology_at(t, ap.W, n));
    les.FL.push_back(out.hl[n].object);
    les.FM.push_back(out.hm[n].object);
    les.FN.push_back(out.hn[n].object);
    les.Fi.push_back(induced_on_homology(t, out.hl[n], out.hm[n], ap.iota[n]));
    les.Fp.push_back(induced_on_homology(t, out.hm[n], out.hn[n], ap.rho[n]));
    if (n >= 1) les.delta[n] = connecting(t, ap, out.hn[n], out.hl[n - 1], n, perturb);
  }
  for (std::size_t n = 0; n <= n_max; ++n) {
    const std::string k = std::to_string(n);
    les.checks.push_back(check_position(t, "F" + k + "(M)", les.Fi[n], les.Fp[n]));
    if (n >= 1)
      les.checks.push_back(check_position(t, "F" + k + "(N)", les.Fp[n], les.delta[n]));
    else
      les.checks.push_back(check_position(t, "F0(N)", les.Fp[0], t.zero_morphism(les.FN[0], t.zero_object())));
    les.checks.push_back(check_position(t, "F" + k + "(L)", les.delta[n + 1], les.Fi[n]));
  }
}

/// Functors that know their own target category (bifunctor slices).
template <class F, class C>
  requires requires(const F& f) { f.target_category(); }
auto target_category(const F& f, const C&) {
  return f.target_category();
}

/// LES of L_n F for a SES, via horseshoe + F + connecting maps, checked exact
/// at every position up to degree n_max.
template <AbelianCategory C, class F>
auto les_of_ses(const C& c, const F& functor, const SESOf<C>& s, std::size_t n_max,
                std::mt19937_64* perturb = nullptr) {
  using T = decltype(target_category(functor, c));
  T t = target_category(functor, c);
  LESComputation<C, T> out;
  const std::size_t depth = n_max + 2;
  out.rl = resolve(c, s.L(), depth);
  out.rn = resolve(c, s.N(), depth);
  out.hs = horseshoe(c, s, out.rl, out.rn);
  auto& ap = out.applied;
  ap.X = apply_functor<C>(functor, out.rl.complex);
  ap.Y = apply_functor<C>(functor, out.hs.middle.complex);
  ap.W = apply_functor<C>(functor, out.rn.complex);
  for (std::size_t n = 0; n <= depth; ++n) {
    ap.iota.push_back(functor(out.hs.in[n]));
    ap.rho.push_back(functor(out.hs.pr[n]));
  }
  les_from_complex_ses(t, out, n_max, perturb);
  return out;
}

/// Left derived functor L_n F(A) with the resolution used.
template <AbelianCategory C, class F>
auto derived(const C& c, const F& functor, const typename C::Object& a, std::size_t n) {
  auto t = target_category(functor, c);
  auto r = resolve(c, a, n + 1);
  auto fx = apply_functor<C>(functor, r.complex);
  return homology_at(t, fx, n).object;
}

/// Squares induced by a morphism of SESs between two LES computations.
struct DeltaSquareReport {
  std::vector<ExactnessCheck> squares;  // composite_zero unused; exact = commutes
  bool all_commute() const {
    for (const auto& s : squares)
      if (!s.exact) return false;
    return true;
  }
};

/// Vertical maps between two LES rows: the maps induced on homology by the
/// degreewise components va, vb, vc (chain maps X -> X', Y -> Y', W -> W').
template <AbelianCategory T>
struct LESMap {
  std::vector<typename T::Morphism> FA, FB, FG;
};

template <AbelianCategory T>
LESMap<T> induced_les_map(const T& t, const LESData<T>& a, const LESData<T>& b,
                          const std::vector<typename T::Morphism>& va, const std::vector<typename T::Morphism>& vb,
                          const std::vector<typename T::Morphism>& vc) {
  LESMap<T> m;
  for (std::size_t n = 0; n <= a.les.n_max + 1; ++n) {
    m.FA.push_back(induced_on_homology(t, a.hl[n], b.hl[n], va[n]));
    m.FB.push_back(induced_on_homology(t, a.hm[n], b.hm[n], vb[n]));
    m.FG.push_back(induced_on_homology(t, a.hn[n], b.hn[n], vc[n]));
  }
  return m;
}

template <AbelianCategory T>
DeltaSquareReport les_map_squares(const T& t, const LESData<T>& a, const LESData<T>& b, const LESMap<T>& v) {
  DeltaSquareReport r;
  for (std::size_t n = 0; n <= a.les.n_max + 1; ++n) {
    const std::string k = std::to_string(n);
    r.squares.push_back({"F" + k + "(i) square", true,
                         t.equal(t.compose(b.les.Fi[n], v.FA[n]), t.compose(v.FB[n], a.les.Fi[n]))});
    r.squares.push_back({"F" + k + "(p) square", true,
                         t.equal(t.compose(b.les.Fp[n], v.FB[n]), t.compose(v.FG[n], a.les.Fp[n]))});
    if (n >= 1)
      r.squares.push_back({"delta" + k + " square", true,
                           t.equal(t.compose(b.les.delta[n], v.FG[n]), t.compose(v.FA[n - 1], a.les.delta[n]))});
  }
  return r;
}

/// Chain-map lifts of (alpha, beta, gamma) along the resolutions of each row,
/// pushed through vert (F itself, or a bifunctor slice).
template <AbelianCategory C, class V, class T>
LESMap<T> les_morphism_map(const C& c, const V& vert, const T& t, const LESComputation<C, T>& a,
                           const LESComputation<C, T>& b, const SESMorphism<typename C::Morphism>& m) {
  auto al = lift_chain_map(c, a.rl, b.rl, m.alpha);
  auto ga = lift_chain_map(c, a.rn, b.rn, m.gamma);
  auto be = lift_chain_map(c, a.hs.middle, b.hs.middle, m.beta);
  std::vector<typename T::Morphism> va, vb, vc;
  for (std::size_t n = 0; n <= a.les.n_max + 1; ++n) {
    va.push_back(vert(al[n]));
    vb.push_back(vert(be[n]));
    vc.push_back(vert(ga[n]));
  }
  return induced_les_map(t, a, b, va, vb, vc);
}

/// Squares induced by a morphism of SESs between two LES computations.
template <AbelianCategory C, class F, class T>
DeltaSquareReport les_morphism_squares(const C& c, const F& functor, const T& t, const LESComputation<C, T>& a,
                                       const LESComputation<C, T>& b, const SESMorphism<typename C::Morphism>& m) {
  return les_map_squares(t, a, b, les_morphism_map(c, functor, t, a, b, m));
}

/// The canonical iso H_n computed from two resolutions of the same object.
template <AbelianCategory C, class F>
auto resolution_comparison(const C& c, const F& functor, const ResolutionOf<C>& p, const ResolutionOf<C>& q,
                           std::size_t n) {
  auto t = target_category(functor, c);
  auto phi = lift_chain_map(c, p, q, c.identity(p.resolved));
  auto fp = apply_functor<C>(functor, p.complex);
  auto fq = apply_functor<C>(functor, q.complex);
  auto hp = homology_at(t, fp, n);
  auto hq = homology_at(t, fq, n);
  return induced_on_homology(t, hp, hq, functor(phi[n]));
}

}  // namespace fch
