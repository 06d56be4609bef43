#pragma once

#include "fch/derived.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fch {

/// A (x) B over a commutative base, as a bifunctor Mod x Mod -> Mod.
class ModuleTensor {
 public:
  using First = ModuleCategory;
  using Second = ModuleCategory;

  explicit ModuleTensor(const Ring& r) : c_(r) {
    if (!r.is_integers() && !r.commutative()) throw std::invalid_argument("tensor: base algebra must be commutative");
  }

  ModuleObj operator()(const ModuleObj& a, const ModuleObj& b) const { return t_(a, b); }
  ModMor operator()(const ModMor& f, const ModMor& g) const { return t_(f, g); }
  const ModuleCategory& first() const { return c_; }
  const ModuleCategory& second() const { return c_; }
  const ModuleCategory& target_category() const { return c_; }

 private:
  ModuleCategory c_;
  TensorBifunctor t_;
};

/// (X, Y) -> X (x) Y over I x J: component (i, j) is X^i (x) Y^j, and the
/// structure map of (u, v) is X(u) (x) Y(v).
class DiagramTensor {
 public:
  using First = DiagramCategory;
  using Second = DiagramCategory;

  DiagramTensor(std::shared_ptr<const FinCat> I, std::shared_ptr<const FinCat> J, const Ring& r)
      : first_(I, ModuleCategory(r)),
        second_(J, ModuleCategory(r)),
        target_(std::make_shared<const FinCat>(FinCat::product(*I, *J)), ModuleCategory(r)) {
    if (!r.is_integers() && !r.commutative()) throw std::invalid_argument("tensor: base algebra must be commutative");
  }

  Diagram operator()(const Diagram& x, const Diagram& y) const {
    const FinCat &I = first_.index(), &J = second_.index(), &P = target_.index();
    std::vector<ModuleObj> comps(P.num_objects());
    std::vector<ModMor> maps(P.num_morphisms());
    for (std::size_t i = 0; i < I.num_objects(); ++i)
      for (std::size_t j = 0; j < J.num_objects(); ++j)
        comps[FinCat::product_object(P, I, J, i, j)] = t_(x.at(i), y.at(j));
    for (std::size_t u = 0; u < I.num_morphisms(); ++u)
      for (std::size_t v = 0; v < J.num_morphisms(); ++v)
        maps[FinCat::product_morphism(P, I, J, u, v)] = t_(x.map(u), y.map(v));
    return Diagram{target_.index_ptr(), std::move(comps), std::move(maps), std::nullopt};
  }

  DiagMor operator()(const DiagMor& f, const DiagMor& g) const {
    const FinCat &I = first_.index(), &J = second_.index(), &P = target_.index();
    std::vector<ModMor> comps(P.num_objects());
    for (std::size_t i = 0; i < I.num_objects(); ++i)
      for (std::size_t j = 0; j < J.num_objects(); ++j)
        comps[FinCat::product_object(P, I, J, i, j)] = t_(f.at(i), g.at(j));
    return DiagMor((*this)(f.source(), g.source()), (*this)(f.target(), g.target()), std::move(comps));
  }

  const DiagramCategory& first() const { return first_; }
  const DiagramCategory& second() const { return second_; }
  const DiagramCategory& target_category() const { return target_; }

  std::size_t object(std::size_t i, std::size_t j) const {
    return FinCat::product_object(target_.index(), first_.index(), second_.index(), i, j);
  }
  std::size_t morphism(std::size_t u, std::size_t v) const {
    return FinCat::product_morphism(target_.index(), first_.index(), second_.index(), u, v);
  }

 private:
  DiagramCategory first_, second_, target_;
  TensorBifunctor t_;
};

/// X -> B(X, y) for fixed y.
template <class B>
struct FirstSlice {
  const B* bif;
  typename B::Second::Object y;

  auto operator()(const typename B::First::Object& x) const { return (*bif)(x, y); }
  auto operator()(const typename B::First::Morphism& f) const { return (*bif)(f, bif->second().identity(y)); }
  auto target_category() const { return bif->target_category(); }
};

/// Y -> B(x, Y) for fixed x.
template <class B>
struct SecondSlice {
  const B* bif;
  typename B::First::Object x;

  auto operator()(const typename B::Second::Object& y) const { return (*bif)(x, y); }
  auto operator()(const typename B::Second::Morphism& g) const { return (*bif)(bif->first().identity(x), g); }
  auto target_category() const { return bif->target_category(); }
};

/// Tor_n computed by resolving the first variable.
inline ModuleObj tor_first(const ModuleObj& a, const ModuleObj& b, std::size_t n) {
  ModuleTensor T(a.ring());
  return derived(T.first(), FirstSlice<ModuleTensor>{&T, b}, a, n);
}

/// Tor_n computed by resolving the second variable.
inline ModuleObj tor_second(const ModuleObj& a, const ModuleObj& b, std::size_t n) {
  ModuleTensor T(a.ring());
  return derived(T.second(), SecondSlice<ModuleTensor>{&T, a}, b, n);
}

/// Tot(P (x) Q) for resolutions P of A and Q of B, with the augmentations to
/// P (x) B and A (x) Q.
struct TensorTotal {
  ComplexOf<ModuleCategory> total, first, second;  // Tot, P (x) B, A (x) Q
  std::vector<ModMor> to_first, to_second;
};

inline TensorTotal tensor_total(const ModuleTensor& T, const ResolutionOf<ModuleCategory>& P,
                                const ResolutionOf<ModuleCategory>& Q, std::size_t top) {
  const ModuleCategory& c = T.target_category();
  const ModuleObj &A = P.resolved, &B = Q.resolved;
  TensorTotal out;
  std::vector<MultiBiproduct<ModuleObj, ModMor>> tot;
  for (std::size_t k = 0; k <= top; ++k) {
    std::vector<ModuleObj> parts;
    for (std::size_t p = 0; p <= k; ++p) parts.push_back(T(P.complex.objects[p], Q.complex.objects[k - p]));
    tot.push_back(biproduct_of(c, parts));
    out.total.objects.push_back(tot[k].object);
    out.first.objects.push_back(T(P.complex.objects[k], B));
    out.second.objects.push_back(T(A, Q.complex.objects[k]));
    // summand (p, q) sits at index p of degree p + q
    out.to_first.push_back(c.compose(T(c.identity(P.complex.objects[k]), Q.augmentation), tot[k].pr[k]));
    out.to_second.push_back(c.compose(T(P.augmentation, c.identity(Q.complex.objects[k])), tot[k].pr[0]));
  }
  for (std::size_t k = 1; k <= top; ++k) {
    auto D = c.zero_morphism(tot[k].object, tot[k - 1].object);
    for (std::size_t p = 0; p <= k; ++p) {
      const std::size_t q = k - p;
      const auto& Pp = P.complex.objects[p];
      const auto& Qq = Q.complex.objects[q];
      if (p >= 1)
        D = c.add(D, c.compose(tot[k - 1].in[p - 1], c.compose(T(P.complex.diff(p), c.identity(Qq)), tot[k].pr[p])));
      if (q >= 1) {
        auto v = c.compose(tot[k - 1].in[p], c.compose(T(c.identity(Pp), Q.complex.diff(q)), tot[k].pr[p]));
        D = c.add(D, p % 2 == 0 ? v : c.negate(v));
      }
    }
    out.total.d.push_back(D);
    out.first.d.push_back(T(P.complex.diff(k), c.identity(B)));
    out.second.d.push_back(T(c.identity(A), Q.complex.diff(k)));
  }
  return out;
}

/// tor_first(A, B, n) -> tor_second(A, B, n) through H_n(Tot(P (x) Q)): both
/// augmentations are checked to be isomorphisms on H_n.
struct BalanceResult {
  ModuleObj first, second;
  std::optional<ModMor> map;  // present when both legs are isomorphisms
  bool iso = false;
};

inline BalanceResult balance(const ModuleObj& a, const ModuleObj& b, std::size_t n) {
  ModuleTensor T(a.ring());
  const ModuleCategory& c = T.target_category();
  const std::size_t top = n + 1;
  auto P = resolve(c, a, top), Q = resolve(c, b, top);
  auto tt = tensor_total(T, P, Q, top);
  auto ht = homology_at(c, tt.total, n);
  auto h1 = homology_at(c, tt.first, n);
  auto h2 = homology_at(c, tt.second, n);
  auto e1 = induced_on_homology(c, ht, h1, tt.to_first[n]);
  auto e2 = induced_on_homology(c, ht, h2, tt.to_second[n]);
  BalanceResult r{h1.object, h2.object, std::nullopt, false};
  if (is_iso(c, e1) && is_iso(c, e2)) {
    r.map = c.compose(e2, inverse(c, e1));
    r.iso = is_iso(c, *r.map);
  }
  return r;
}

/// Two LES rows of one variable's derived functors and the vertical maps
/// between them.
template <AbelianCategory T>
struct LadderResult {
  std::optional<std::string> rejected;
  LES<typename T::Object, typename T::Morphism> top, bottom;
  LESMap<T> vertical;
  DeltaSquareReport squares;
  bool rows_exact = false;
  bool degreewise_exact = true;  // F(P, -) exact on the SES, switched variant only

  bool pass() const { return !rejected && rows_exact && squares.all_commute() && degreewise_exact; }
};

/// SES morphism (alpha, beta, gamma): s -> s2 in the first variable, g: Y -> Y2
/// in the second. Rows: L_n B(-, Y) on s and L_n B(-, Y2) on s2.
template <class B>
auto ladder(const B& bif, const SESOf<typename B::First>& s, const SESOf<typename B::First>& s2,
            const SESMorphism<typename B::First::Morphism>& m, const typename B::Second::Morphism& g,
            std::size_t n_max) {
  using T = std::decay_t<decltype(bif.target_category())>;
  const auto& c1 = bif.first();
  const T& t = bif.target_category();
  LadderResult<T> r;
  if (auto why = ses_violation(c1, s)) r.rejected = "top row: " + *why;
  else if (auto why2 = ses_violation(c1, s2)) r.rejected = "bottom row: " + *why2;
  else if (auto why3 = ses_morphism_violation(c1, s, s2, m)) r.rejected = "vertical maps: " + *why3;
  if (r.rejected) return r;

  auto a = les_of_ses(c1, FirstSlice<B>{&bif, g.source()}, s, n_max);
  auto b = les_of_ses(c1, FirstSlice<B>{&bif, g.target()}, s2, n_max);
  auto vert = [&](const typename B::First::Morphism& phi) { return bif(phi, g); };
  r.vertical = les_morphism_map(c1, vert, t, a, b, m);
  r.squares = les_map_squares(t, a, b, r.vertical);
  r.top = a.les;
  r.bottom = b.les;
  r.rows_exact = a.les.all_exact() && b.les.all_exact();
  return r;
}

namespace detail {

/// B(P, -) applied to a SES in the second variable, degreewise.
template <class B, class T>
LESData<T> resolved_first_row(const B& bif, const T& t, const ResolutionOf<typename B::First>& P,
                              const SESOf<typename B::Second>& s, std::size_t n_max, bool& degreewise_exact) {
  const auto& c1 = bif.first();
  const auto& c2 = bif.second();
  LESData<T> out;
  auto& ap = out.applied;
  for (std::size_t k = 0; k <= P.complex.top(); ++k) {
    const auto& Pk = P.complex.objects[k];
    ap.X.objects.push_back(bif(Pk, s.L()));
    ap.Y.objects.push_back(bif(Pk, s.M()));
    ap.W.objects.push_back(bif(Pk, s.N()));
    ap.iota.push_back(bif(c1.identity(Pk), s.i));
    ap.rho.push_back(bif(c1.identity(Pk), s.p));
    if (ses_violation(t, SESOf<T>{ap.iota.back(), ap.rho.back()})) degreewise_exact = false;
    if (k >= 1) {
      ap.X.d.push_back(bif(P.complex.diff(k), c2.identity(s.L())));
      ap.Y.d.push_back(bif(P.complex.diff(k), c2.identity(s.M())));
      ap.W.d.push_back(bif(P.complex.diff(k), c2.identity(s.N())));
    }
  }
  if (degreewise_exact) les_from_complex_ses(t, out, n_max);
  return out;
}

}  // namespace detail

/// SES morphism s -> s2 in the second variable, g: X -> X2 in the first.
/// Resolves the first variable and uses exactness of B(P, -) on the SES.
template <class B>
auto ladder_switched(const B& bif, const SESOf<typename B::Second>& s, const SESOf<typename B::Second>& s2,
                     const SESMorphism<typename B::Second::Morphism>& m, const typename B::First::Morphism& g,
                     std::size_t n_max) {
  using T = std::decay_t<decltype(bif.target_category())>;
  const auto& c1 = bif.first();
  const auto& c2 = bif.second();
  const T& t = bif.target_category();
  LadderResult<T> r;
  if (auto why = ses_violation(c2, s)) r.rejected = "top row: " + *why;
  else if (auto why2 = ses_violation(c2, s2)) r.rejected = "bottom row: " + *why2;
  else if (auto why3 = ses_morphism_violation(c2, s, s2, m)) r.rejected = "vertical maps: " + *why3;
  if (r.rejected) return r;

  auto P = resolve(c1, g.source(), n_max + 2);
  auto P2 = resolve(c1, g.target(), n_max + 2);
  auto a = detail::resolved_first_row(bif, t, P, s, n_max, r.degreewise_exact);
  auto b = detail::resolved_first_row(bif, t, P2, s2, n_max, r.degreewise_exact);
  if (!r.degreewise_exact) return r;
  auto phi = lift_chain_map(c1, P, P2, g);
  std::vector<typename T::Morphism> va, vb, vc;
  for (std::size_t n = 0; n <= n_max + 1; ++n) {
    va.push_back(bif(phi[n], m.alpha));
    vb.push_back(bif(phi[n], m.beta));
    vc.push_back(bif(phi[n], m.gamma));
  }
  r.vertical = induced_les_map(t, a, b, va, vb, vc);
  r.squares = les_map_squares(t, a, b, r.vertical);
  r.top = a.les;
  r.bottom = b.les;
  r.rows_exact = a.les.all_exact() && b.les.all_exact();
  return r;
}

/// Compares the ladder computed over I x J with the ladders computed one
/// object j of J at a time (each over I x point): objects, row maps, vertical
/// maps and the structure maps in both directions must agree componentwise.
struct ProductIdentification {
  bool objects_equal = true;
  bool maps_equal = true;
  std::vector<std::string> failures;
  bool pass() const { return objects_equal && maps_equal; }
};

inline ProductIdentification product_identification(const DiagramTensor& bif, const SESOf<DiagramCategory>& s,
                                                    const SESOf<DiagramCategory>& s2,
                                                    const SESMorphism<DiagMor>& m, const DiagMor& g,
                                                    std::size_t n_max) {
  ProductIdentification out;
  const auto& I = bif.first().index();
  const auto& J = bif.second().index();
  const ModuleCategory& base = bif.target_category().base();
  auto whole = ladder(bif, s, s2, m, g, n_max);
  if (!whole.pass()) {
    out.maps_equal = false;
    out.failures.push_back("ladder over I x J does not pass");
    return out;
  }
  DiagramCategory point(FinCat::standard("point"), base);
  DiagramTensor slice(bif.first().index_ptr(), point.index_ptr(), base.ring());
  auto obj_eq = [&](const Diagram& w, const Diagram& p, std::size_t j, const std::string& what) {
    for (std::size_t i = 0; i < I.num_objects(); ++i)
      if (!(w.at(bif.object(i, j)) == p.at(slice.object(i, 0)))) {
        out.objects_equal = false;
        out.failures.push_back(what + " differs at (" + I.objects()[i] + "," + J.objects()[j] + ")");
      }
    for (std::size_t u = 0; u < I.num_morphisms(); ++u)
      if (!base.equal(w.map(bif.morphism(u, J.identity(j))), p.map(slice.morphism(u, 0)))) {
        out.maps_equal = false;
        out.failures.push_back(what + " structure map differs along " + I.arrow(u).label);
      }
  };
  auto mor_eq = [&](const DiagMor& w, const DiagMor& p, std::size_t j, const std::string& what) {
    for (std::size_t i = 0; i < I.num_objects(); ++i)
      if (!base.equal(w.at(bif.object(i, j)), p.at(slice.object(i, 0)))) {
        out.maps_equal = false;
        out.failures.push_back(what + " differs at (" + I.objects()[i] + "," + J.objects()[j] + ")");
      }
  };
  for (std::size_t j = 0; j < J.num_objects(); ++j) {
    auto gj = point.constant(g.at(j));
    auto part = ladder(slice, s, s2, m, gj, n_max);
    for (std::size_t n = 0; n <= n_max + 1; ++n) {
      const std::string k = std::to_string(n);
      obj_eq(whole.top.FL[n], part.top.FL[n], j, "F" + k + "(L)");
      obj_eq(whole.top.FM[n], part.top.FM[n], j, "F" + k + "(M)");
      obj_eq(whole.top.FN[n], part.top.FN[n], j, "F" + k + "(N)");
      mor_eq(whole.top.Fi[n], part.top.Fi[n], j, "F" + k + "(i)");
      mor_eq(whole.top.Fp[n], part.top.Fp[n], j, "F" + k + "(p)");
      if (n >= 1) mor_eq(whole.top.delta[n], part.top.delta[n], j, "delta" + k);
      mor_eq(whole.vertical.FB[n], part.vertical.FB[n], j, "vertical F" + k + "(beta)");
    }
  }
  // the J-direction structure maps of the top row are the vertical maps of
  // the ladder along Y(v) with the identity SES morphism
  const auto& c1 = bif.first();
  SESMorphism<DiagMor> id{c1.identity(s.L()), c1.identity(s.M()), c1.identity(s.N())};
  const Diagram& Y = g.source();
  for (std::size_t v = 0; v < J.num_morphisms(); ++v) {
    const auto j0 = J.arrow(v).source, j1 = J.arrow(v).target;
    DiagMor yv(point.constant(Y.at(j0)), point.constant(Y.at(j1)), {Y.map(v)});
    auto along = ladder(slice, s, s, id, yv, n_max);
    for (std::size_t n = 0; n <= n_max + 1; ++n)
      for (std::size_t i = 0; i < I.num_objects(); ++i) {
        const auto w = bif.morphism(I.identity(i), v);
        const auto p = slice.object(i, 0);
        bool ok = base.equal(whole.top.FL[n].map(w), along.vertical.FA[n].at(p)) &&
                  base.equal(whole.top.FM[n].map(w), along.vertical.FB[n].at(p)) &&
                  base.equal(whole.top.FN[n].map(w), along.vertical.FG[n].at(p));
        if (!ok) {
          out.maps_equal = false;
          out.failures.push_back("structure map along " + J.arrow(v).label + " differs in degree " + std::to_string(n));
        }
      }
  }
  return out;
}

}  // namespace fch
