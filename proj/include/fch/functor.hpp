#pragma once

#include "fch/diagram.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

namespace fch {

/// A module built as a quotient of "raw" coordinates, with the comparison maps.
struct RawPresentation {
  ModuleObj object;
  ModMor::Matrix to_raw;    // raw coords x object coords
  ModMor::Matrix from_raw;  // object coords x raw coords
};

namespace detail {

inline RawPresentation from_simplified(const ModuleObj& raw) {
  auto s = simplify_int(raw);
  return {s.object, s.to_old, s.from_old};
}

inline RawPresentation fp_quotient_presentation(const Ring& R, std::size_t raw_dim, const FpMatrix& relations,
                                                const std::vector<FpMatrix>& raw_actions) {
  auto quo = fp_quotient(relations);
  std::vector<FpMatrix> actions;
  for (const auto& a : raw_actions) actions.push_back(quo.q * a * quo.s);
  (void)raw_dim;
  ModuleObj m = ModuleObj::representation(R, quo.q.rows(), std::move(actions));
  return {m, quo.s, quo.q};
}

inline FpMatrix fp_mod(std::uint32_t p, const IntMatrix& m) {
  FpMatrix out(p, m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Int r;
      Int pp = static_cast<unsigned long>(p);
      mpz_fdiv_r(r.get_mpz_t(), m(i, j).get_mpz_t(), pp.get_mpz_t());
      out(i, j) = static_cast<FpMatrix::Scalar>(r.get_ui());
    }
  return out;
}

}  // namespace detail

/// A (x) B over a commutative base ring; raw coordinates are pairs, a-major.
inline RawPresentation tensor_presentation(const ModuleObj& a, const ModuleObj& b) {
  if (!(a.ring() == b.ring())) throw std::invalid_argument("tensor: ring mismatch");
  const Ring& R = a.ring();
  if (R.is_integers()) {
    const std::size_t ga = a.coord_dim(), gb = b.coord_dim();
    IntMatrix rel = vconcat(kron(a.int_data().relations, IntMatrix::identity(gb)),
                            kron(IntMatrix::identity(ga), b.int_data().relations));
    return detail::from_simplified(ModuleObj::integer_presentation(std::move(rel), ga * gb));
  }
  if (!R.commutative()) throw std::invalid_argument("tensor: base algebra must be commutative");
  const auto p = R.prime();
  const std::size_t na = a.coord_dim(), nb = b.coord_dim();
  FpMatrix W(p, na * nb, 0);
  std::vector<FpMatrix> acts;
  for (std::size_t r = 0; r < R.dim(); ++r) {
    const auto& ra = a.fp_data().actions[r];
    const auto& rb = b.fp_data().actions[r];
    W = hconcat(W, kron(ra, FpMatrix::identity(p, nb)) - kron(FpMatrix::identity(p, na), rb));
    acts.push_back(kron(ra, FpMatrix::identity(p, nb)));
  }
  return detail::fp_quotient_presentation(R, na * nb, W, acts);
}

/// The raw matrix of f (x) g.
inline ModMor::Matrix raw_kron(const ModMor& f, const ModMor& g) {
  if (f.is_integer()) return kron(f.int_matrix(), g.int_matrix());
  return kron(f.fp_matrix(), g.fp_matrix());
}

inline ModMor::Matrix mat_mul(const ModMor::Matrix& a, const ModMor::Matrix& b) {
  if (std::holds_alternative<IntMatrix>(a)) return std::get<IntMatrix>(a) * std::get<IntMatrix>(b);
  return std::get<FpMatrix>(a) * std::get<FpMatrix>(b);
}

inline ModMor::Matrix through(const RawPresentation& tgt, const ModMor::Matrix& raw, const RawPresentation& src) {
  return mat_mul(tgt.from_raw, mat_mul(raw, src.to_raw));
}

/// S (x)_R A along a ring map phi: R -> S. Raw coordinates are (a, s), a-major.
inline RawPresentation base_change_presentation(const RingMap& phi, const ModuleObj& a) {
  const Ring& R = phi.source();
  const Ring& S = phi.target();
  if (!(a.ring() == R)) throw std::invalid_argument("base change: module is over the wrong ring");
  const auto p = S.prime();
  const std::size_t ds = S.dim();
  if (R.is_integers()) {
    if (S.is_integers()) {
      const std::size_t g = a.coord_dim();
      return {a, IntMatrix::identity(g), IntMatrix::identity(g)};
    }
    const std::size_t g = a.coord_dim();
    if (a.is_free()) {
      ModuleObj F = ModuleObj::free(S, g);
      return {F, FpMatrix::identity(p, g * ds), FpMatrix::identity(p, g * ds)};
    }
    FpMatrix W = kron(detail::fp_mod(p, a.int_data().relations.transposed()), FpMatrix::identity(p, ds));
    std::vector<FpMatrix> acts;
    for (std::size_t b = 0; b < ds; ++b) acts.push_back(kron(FpMatrix::identity(p, g), S.left_mult(S.basis_vector(b))));
    return detail::fp_quotient_presentation(S, g * ds, W, acts);
  }
  const std::size_t na = a.coord_dim();
  const std::size_t dr = R.dim();
  if (a.is_free()) {
    const std::size_t n = a.free_rank();
    ModuleObj F = ModuleObj::free(S, n);
    FpMatrix from(p, n * ds, na * ds), to(p, na * ds, n * ds);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t rb = 0; rb < dr; ++rb)
        for (std::size_t s = 0; s < ds; ++s) {
          FpVector v = S.multiply(S.basis_vector(s), phi.matrix().column(rb));
          for (std::size_t t = 0; t < ds; ++t) from(k * ds + t, (k * dr + rb) * ds + s) = v[t];
        }
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t s = 0; s < ds; ++s)
        for (std::size_t rb = 0; rb < dr; ++rb) to((k * dr + rb) * ds + s, k * ds + s) = R.unit()[rb];
    return {F, to, from};
  }
  FpMatrix W(p, na * ds, 0);
  for (std::size_t r = 0; r < dr; ++r) {
    FpMatrix right = S.right_mult(phi.matrix().column(r));
    W = hconcat(W, kron(FpMatrix::identity(p, na), right) - kron(a.fp_data().actions[r], FpMatrix::identity(p, ds)));
  }
  std::vector<FpMatrix> acts;
  for (std::size_t b = 0; b < ds; ++b) acts.push_back(kron(FpMatrix::identity(p, na), S.left_mult(S.basis_vector(b))));
  return detail::fp_quotient_presentation(S, na * ds, W, acts);
}

/// A symbolic right-exact additive functor between module categories.
class FunctorSpec {
 public:
  enum class Kind { Identity, TensorWith, BaseChange, Compose, Exponent };

  static FunctorSpec identity(const Ring& r) {
    FunctorSpec f(Kind::Identity);
    f.src_ = f.tgt_ = r;
    return f;
  }

  /// - (x)_R M, for M over a commutative R.
  static FunctorSpec tensor_with(const ModuleObj& m) {
    if (!m.ring().is_integers() && !m.ring().commutative())
      throw std::invalid_argument("tensor_with: base algebra must be commutative");
    FunctorSpec f(Kind::TensorWith);
    f.src_ = f.tgt_ = m.ring();
    f.module_ = m;
    return f;
  }

  static FunctorSpec base_change(const RingMap& phi) {
    FunctorSpec f(Kind::BaseChange);
    f.src_ = phi.source();
    f.tgt_ = phi.target();
    f.phi_ = phi;
    return f;
  }

  /// Coinvariants: base change along the augmentation of a group algebra.
  static FunctorSpec coinvariants(const Ring& group_ring) { return base_change(RingMap::augmentation(group_ring)); }

  /// outer o inner.
  static FunctorSpec compose(const FunctorSpec& outer, const FunctorSpec& inner) {
    if (!(inner.target_ring() == outer.source_ring()))
      throw std::invalid_argument("compose: target ring of inner != source ring of outer");
    FunctorSpec f(Kind::Compose);
    f.src_ = inner.src_;
    f.tgt_ = outer.tgt_;
    f.outer_ = std::make_shared<const FunctorSpec>(outer);
    f.inner_ = std::make_shared<const FunctorSpec>(inner);
    return f;
  }

  /// F^I: F applied componentwise to diagrams over I.
  static FunctorSpec exponent(const FunctorSpec& inner, std::shared_ptr<const FinCat> index) {
    FunctorSpec f(Kind::Exponent);
    f.src_ = inner.src_;
    f.tgt_ = inner.tgt_;
    f.inner_ = std::make_shared<const FunctorSpec>(inner);
    f.index_ = std::move(index);
    return f;
  }

  Kind kind() const { return kind_; }
  const Ring& source_ring() const { return src_; }
  const Ring& target_ring() const { return tgt_; }
  const ModuleObj& module() const { return module_; }
  const RingMap& ring_map() const { return *phi_; }
  const FunctorSpec& outer() const { return *outer_; }
  const FunctorSpec& inner() const { return *inner_; }
  const std::shared_ptr<const FinCat>& index() const { return index_; }

  /// The functor applied on underlying modules (Exponent unwraps to its inner functor).
  const FunctorSpec& base() const { return kind_ == Kind::Exponent ? inner_->base() : *this; }

  std::string describe() const {
    switch (kind_) {
      case Kind::Identity:
        return "id";
      case Kind::TensorWith:
        return "- (x) " + module_.describe();
      case Kind::BaseChange:
        return phi_->target().describe() + " (x)_" + phi_->source().describe() + " -";
      case Kind::Compose:
        return "(" + outer_->describe() + ") o (" + inner_->describe() + ")";
      case Kind::Exponent:
        return "(" + inner_->describe() + ")^I";
    }
    return "?";
  }

  ModuleObj operator()(const ModuleObj& a) const {
    const FunctorSpec& F = base();
    if (F.kind_ == Kind::Identity) return check_ring(a);
    if (F.kind_ == Kind::Compose) return (*F.outer_)((*F.inner_)(a));
    return F.presentation(a).object;
  }

  ModMor operator()(const ModMor& f) const {
    const FunctorSpec& F = base();
    if (F.kind_ == Kind::Identity) {
      check_ring(f.source());
      return f;
    }
    if (F.kind_ == Kind::Compose) return (*F.outer_)((*F.inner_)(f));
    const auto& ps = F.presentation(f.source());
    const auto& pt = F.presentation(f.target());
    return ModMor::unchecked(ps.object, pt.object, through(pt, F.raw_map(f), ps));
  }

  Diagram operator()(const Diagram& d) const {
    if (kind_ == Kind::Exponent && !(*index_ == *d.index))
      throw std::invalid_argument("exponent functor applied to a diagram over a different index");
    std::vector<ModuleObj> comps;
    std::vector<ModMor> maps;
    for (const auto& c : d.components) comps.push_back((*this)(c));
    for (const auto& m : d.maps) maps.push_back((*this)(m));
    return Diagram{d.index, std::move(comps), std::move(maps), std::nullopt};
  }

  DiagMor operator()(const DiagMor& f) const {
    std::vector<ModMor> comps;
    for (const auto& c : f.components()) comps.push_back((*this)(c));
    return DiagMor((*this)(f.source()), (*this)(f.target()), std::move(comps));
  }

  /// Quotient presentation of F(A) for the primitive kinds.
  const RawPresentation& presentation(const ModuleObj& a) const {
    check_ring(a);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->entries.find(a.key());
    if (it != cache_->entries.end()) return it->second.second;
    RawPresentation p = kind_ == Kind::TensorWith ? tensor_presentation(a, module_) : base_change_presentation(*phi_, a);
    return cache_->entries.emplace(a.key(), std::make_pair(a, std::move(p))).first->second.second;
  }

 private:
  explicit FunctorSpec(Kind k) : kind_(k), cache_(std::make_shared<Cache>()) {}

  const ModuleObj& check_ring(const ModuleObj& a) const {
    if (!(a.ring() == src_)) throw std::invalid_argument("functor " + describe() + ": ring mismatch");
    return a;
  }

  ModMor::Matrix raw_map(const ModMor& f) const {
    if (kind_ == Kind::TensorWith) {
      ModuleCategory C(src_);
      return raw_kron(f, C.identity(module_));
    }
    const Ring& S = phi_->target();
    if (S.is_integers()) return f.int_matrix();
    const auto p = S.prime();
    if (f.is_integer()) return kron(detail::fp_mod(p, f.int_matrix()), FpMatrix::identity(p, S.dim()));
    return kron(f.fp_matrix(), FpMatrix::identity(p, S.dim()));
  }

  struct Cache {
    std::mutex mutex;
    // keeps the key module alive so its address is never reused
    std::map<const void*, std::pair<ModuleObj, RawPresentation>> entries;
  };

  Kind kind_;
  Ring src_ = Ring::integers(), tgt_ = Ring::integers();
  ModuleObj module_;
  std::optional<RingMap> phi_;
  std::shared_ptr<const FunctorSpec> outer_, inner_;
  std::shared_ptr<const FinCat> index_;
  std::shared_ptr<Cache> cache_;
};

/// The module category a functor lands in.
inline ModuleCategory target_category(const FunctorSpec& F, const ModuleCategory&) {
  return ModuleCategory(F.target_ring());
}
inline DiagramCategory target_category(const FunctorSpec& F, const DiagramCategory& D) {
  return DiagramCategory(D.index_ptr(), ModuleCategory(F.target_ring()));
}

/// A natural transformation between functors; currently - (x) g for g: M -> M'.
class NatSpec {
 public:
  static NatSpec tensor_map(const ModMor& g) {
    return NatSpec(g, FunctorSpec::tensor_with(g.source()), FunctorSpec::tensor_with(g.target()));
  }

  const FunctorSpec& source() const { return F_; }
  const FunctorSpec& target() const { return G_; }
  const ModMor& map() const { return g_; }

  /// Component at A: F(A) -> G(A).
  ModMor at(const ModuleObj& a) const {
    const auto& ps = F_.presentation(a);
    const auto& pt = G_.presentation(a);
    ModuleCategory C(a.ring());
    return ModMor::unchecked(ps.object, pt.object, through(pt, raw_kron(C.identity(a), g_), ps));
  }

  /// The exponent transformation at a diagram.
  DiagMor at(const Diagram& d) const {
    std::vector<ModMor> comps;
    for (const auto& c : d.components) comps.push_back(at(c));
    return DiagMor(F_(d), G_(d), std::move(comps));
  }

 private:
  NatSpec(ModMor g, FunctorSpec F, FunctorSpec G) : g_(std::move(g)), F_(std::move(F)), G_(std::move(G)) {}
  ModMor g_;
  FunctorSpec F_, G_;
};

/// Applies F to a module or diagram; exponent_apply names the C^I case.
inline Diagram exponent_apply(const FunctorSpec& F, const Diagram& d) { return F(d); }
inline DiagMor exponent_apply(const FunctorSpec& F, const DiagMor& f) { return F(f); }
inline DiagMor exponent_nat(const NatSpec& eta, const Diagram& d) { return eta.at(d); }

/// The bifunctor A (x) B on modules and maps, with f (x) g.
class TensorBifunctor {
 public:
  ModuleObj operator()(const ModuleObj& a, const ModuleObj& b) const { return pres(a, b).object; }
  ModMor operator()(const ModMor& f, const ModMor& g) const {
    const auto& ps = pres(f.source(), g.source());
    const auto& pt = pres(f.target(), g.target());
    return ModMor::unchecked(ps.object, pt.object, through(pt, raw_kron(f, g), ps));
  }
  const RawPresentation& pres(const ModuleObj& a, const ModuleObj& b) const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto key = std::make_pair(a.key(), b.key());
    auto it = cache_->entries.find(key);
    if (it != cache_->entries.end()) return std::get<2>(it->second);
    return std::get<2>(cache_->entries.emplace(key, std::make_tuple(a, b, tensor_presentation(a, b))).first->second);
  }

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::pair<const void*, const void*>, std::tuple<ModuleObj, ModuleObj, RawPresentation>> entries;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

inline ModuleObj tensor(const ModuleObj& a, const ModuleObj& b) { return tensor_presentation(a, b).object; }

}  // namespace fch
