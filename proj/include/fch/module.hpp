#pragma once

#include "fch/ring.hpp"
#include "fch/snf.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace fch {

/// A finitely presented module.
///
/// Over Z: generators are coordinate vectors of Z^g and the module is
/// Z^g / rowspan(relations). Over an F_p-algebra R: the module is F_p^n with
/// one action matrix per basis element of R; its generating set is chosen
/// greedily from the standard basis.
class ModuleObj {
 public:
  struct IntData {
    std::size_t gens = 0;
    IntMatrix relations;  // one relation per row, gens columns
    IntMatrix vt;         // normal-form coordinates y = vt * x
    std::vector<Int> orders;  // per y-coordinate: 1 (dead), d > 1 (mod d), 0 (free)
  };
  struct FpData {
    std::size_t dim = 0;
    std::vector<FpMatrix> actions;
    std::vector<FpVector> generators;
    std::optional<std::size_t> free_rank;
  };

  ModuleObj() : ModuleObj(Ring::integers(), IntMatrix(0, 0), 0) {}

  /// Z^gens / rowspan(relations).
  static ModuleObj integer_presentation(IntMatrix relations, std::size_t gens) {
    if (relations.rows() > 0 && relations.cols() != gens)
      throw std::invalid_argument("presentation: relation width != generator count");
    if (relations.rows() == 0) relations = IntMatrix(0, gens);
    return ModuleObj(Ring::integers(), std::move(relations), gens);
  }

  /// Z/n, with n = 0 meaning Z.
  static ModuleObj cyclic(long n) {
    if (n == 0) return integer_presentation(IntMatrix(0, 1), 1);
    return integer_presentation(IntMatrix::from_rows({{n}}), 1);
  }

  /// Direct sum of cyclic groups Z/n_i (0 meaning Z).
  static ModuleObj cyclic_sum(const std::vector<long>& orders) {
    std::size_t nrel = 0;
    for (long n : orders)
      if (n != 0) ++nrel;
    IntMatrix rel(nrel, orders.size());
    std::size_t r = 0;
    for (std::size_t k = 0; k < orders.size(); ++k)
      if (orders[k] != 0) rel(r++, k) = orders[k];
    return integer_presentation(std::move(rel), orders.size());
  }

  static ModuleObj free(const Ring& ring, std::size_t rank) {
    if (ring.is_integers()) return integer_presentation(IntMatrix(0, rank), rank);
    std::vector<FpMatrix> actions;
    for (std::size_t b = 0; b < ring.dim(); ++b) {
      FpMatrix lm = ring.left_mult(ring.basis_vector(b));
      FpMatrix a(ring.prime(), 0, 0);
      for (std::size_t k = 0; k < rank; ++k) a = block_diag(a, lm);
      actions.push_back(std::move(a));
    }
    ModuleObj m(ring, rank * ring.dim(), std::move(actions), false, false);
    auto& fd = m.fp_mut();
    fd.free_rank = rank;
    fd.generators.clear();
    for (std::size_t k = 0; k < rank; ++k) {
      FpVector g(rank * ring.dim(), 0);
      for (std::size_t b = 0; b < ring.dim(); ++b) g[k * ring.dim() + b] = ring.unit()[b];
      fd.generators.push_back(std::move(g));
    }
    return m;
  }

  static ModuleObj zero(const Ring& ring) {
    if (ring.is_integers()) return integer_presentation(IntMatrix(0, 0), 0);
    return free(ring, 0);
  }

  /// F_p^dim with the given action matrices (one per ring basis element).
  static ModuleObj representation(const Ring& ring, std::size_t dim, std::vector<FpMatrix> actions) {
    if (ring.is_integers()) throw std::invalid_argument("representation: ring must be an F_p-algebra");
    return ModuleObj(ring, dim, std::move(actions), true, true);
  }

  /// F_p with every group element acting as 1 (group algebras only).
  static ModuleObj trivial(const Ring& group_ring) {
    std::vector<FpMatrix> actions;
    const auto p = group_ring.prime();
    for (std::size_t b = 0; b < group_ring.dim(); ++b) {
      FpMatrix a(p, 1, 1);
      a(0, 0) = 1;
      actions.push_back(a);
    }
    return representation(group_ring, 1, std::move(actions));
  }

  const Ring& ring() const { return d_->ring; }
  bool is_integer() const { return d_->ring.is_integers(); }
  const IntData& int_data() const { return std::get<IntData>(d_->data); }
  const FpData& fp_data() const { return std::get<FpData>(d_->data); }

  /// Length of element coordinate vectors.
  std::size_t coord_dim() const { return is_integer() ? int_data().gens : fp_data().dim; }
  std::size_t num_generators() const { return is_integer() ? int_data().gens : fp_data().generators.size(); }

  bool is_free() const {
    if (is_integer()) return int_data().relations.rows() == 0;
    return fp_data().free_rank.has_value();
  }
  std::size_t free_rank() const {
    if (is_integer()) return int_data().gens;
    return fp_data().free_rank.value_or(0);
  }

  bool is_zero() const {
    if (!is_integer()) return fp_data().dim == 0;
    for (const auto& o : int_data().orders)
      if (o != 1) return false;
    return true;
  }

  /// Invariant factors d > 1 followed by one 0 per free summand.
  std::vector<Int> invariant_factors() const {
    std::vector<Int> out;
    for (const auto& o : int_data().orders)
      if (o != 1 && o != 0) out.push_back(o);
    for (const auto& o : int_data().orders)
      if (o == 0) out.push_back(o);
    return out;
  }

  /// F_p-dimension of the underlying vector space (F_p-algebra case only).
  std::size_t fp_dim() const { return fp_data().dim; }

  std::string describe() const {
    if (is_zero()) return "0";
    if (!is_integer()) return "F" + std::to_string(ring().prime()) + "^" + std::to_string(fp_data().dim);
    std::string s;
    std::size_t free = 0;
    for (const auto& o : invariant_factors()) {
      if (o == 0) {
        ++free;
        continue;
      }
      if (!s.empty()) s += " ⊕ ";
      s += "Z/" + o.get_str();
    }
    if (free) {
      if (!s.empty()) s += " ⊕ ";
      s += free == 1 ? "Z" : "Z^" + std::to_string(free);
    }
    return s;
  }

  friend bool operator==(const ModuleObj& a, const ModuleObj& b) {
    if (a.d_ == b.d_) return true;
    if (!(a.ring() == b.ring())) return false;
    if (a.is_integer())
      return a.int_data().gens == b.int_data().gens && a.int_data().relations == b.int_data().relations;
    return a.fp_data().dim == b.fp_data().dim && a.fp_data().actions == b.fp_data().actions;
  }

  /// Identity of the shared representation (stable across copies).
  const void* key() const { return d_.get(); }

  /// Normal form of a coordinate vector (Z case); equal iff the elements agree.
  IntVector normal_form(const IntVector& x) const {
    const auto& id = int_data();
    IntVector y = id.vt * x;
    for (std::size_t k = 0; k < y.size(); ++k) {
      const Int& o = id.orders[k];
      if (o == 1)
        y[k] = 0;
      else if (o != 0) {
        mpz_fdiv_r(y[k].get_mpz_t(), y[k].get_mpz_t(), o.get_mpz_t());
      }
    }
    return y;
  }

 private:
  struct Data {
    Ring ring;
    std::variant<IntData, FpData> data;
  };

  ModuleObj(Ring ring, IntMatrix relations, std::size_t gens) {
    IntData id;
    id.gens = gens;
    if (relations.rows() == 0) {
      id.relations = IntMatrix(0, gens);
      id.vt = IntMatrix::identity(gens);
      id.orders.assign(gens, Int(0));
    } else {
      SnfResult s = snf(relations);
      id.vt = s.V.transposed();
      id.orders.assign(gens, Int(0));
      for (std::size_t k = 0; k < s.rank; ++k) id.orders[k] = s.D(k, k);
      id.relations = std::move(relations);
    }
    d_ = std::make_shared<Data>(Data{std::move(ring), std::move(id)});
  }

  ModuleObj(Ring ring, std::size_t dim, std::vector<FpMatrix> actions, bool validate, bool find_generators) {
    if (actions.size() != ring.dim()) throw std::invalid_argument("module: need one action matrix per ring basis element");
    for (const auto& a : actions)
      if (a.rows() != dim || a.cols() != dim || a.prime() != ring.prime())
        throw std::invalid_argument("module: action matrix has wrong shape or prime");
    FpData fd;
    fd.dim = dim;
    fd.actions = std::move(actions);
    d_ = std::make_shared<Data>(Data{std::move(ring), std::move(fd)});
    if (validate) check_actions();
    if (find_generators) fp_mut().generators = greedy_generators();
  }

  FpData& fp_mut() { return std::get<FpData>(std::const_pointer_cast<Data>(d_)->data); }

  FpMatrix action_of(const FpVector& r) const {
    const auto& fd = fp_data();
    FpMatrix m(ring().prime(), fd.dim, fd.dim);
    for (std::size_t b = 0; b < r.size(); ++b)
      if (r[b]) m = m + scaled(fd.actions[b], r[b]);
    return m;
  }

  void check_actions() const {
    const Ring& R = ring();
    const auto& fd = fp_data();
    if (!(action_of(R.unit()) == FpMatrix::identity(R.prime(), fd.dim)))
      throw std::invalid_argument("module: unit does not act as the identity");
    for (std::size_t a = 0; a < R.dim(); ++a)
      for (std::size_t b = 0; b < R.dim(); ++b) {
        FpMatrix lhs = fd.actions[a] * fd.actions[b];
        FpMatrix rhs = action_of(R.multiply(R.basis_vector(a), R.basis_vector(b)));
        if (!(lhs == rhs))
          throw std::invalid_argument("module: action violates structure constants at (" + R.labels()[a] + ", " +
                                      R.labels()[b] + ")");
      }
  }

  std::vector<FpVector> greedy_generators() const {
    const auto& fd = fp_data();
    const auto p = ring().prime();
    std::vector<FpVector> gens;
    FpMatrix span(p, fd.dim, 0);
    std::size_t rank = 0;
    for (std::size_t j = 0; j < fd.dim && rank < fd.dim; ++j) {
      FpVector e(fd.dim, 0);
      e[j] = 1;
      FpMatrix ej = columns_to_matrix(p, fd.dim, {e});
      if (fp_rank(hconcat(span, ej)) == rank) continue;
      gens.push_back(e);
      for (const auto& a : fd.actions) span = hconcat(span, a * ej);
      span = fp_column_basis(span);
      rank = span.cols();
    }
    return gens;
  }

  std::shared_ptr<const Data> d_;
};

/// A module homomorphism given by its matrix on coordinates
/// (target coords x source coords).
class ModMor {
 public:
  using Matrix = std::variant<IntMatrix, FpMatrix>;

  ModMor() = default;

  /// Validating constructor: the matrix must define a homomorphism.
  static ModMor make(ModuleObj src, ModuleObj tgt, Matrix m) {
    ModMor f(std::move(src), std::move(tgt), std::move(m));
    if (auto why = f.well_defined_violation()) throw std::invalid_argument("morphism not well-defined: " + *why);
    return f;
  }
  static ModMor unchecked(ModuleObj src, ModuleObj tgt, Matrix m) {
    return ModMor(std::move(src), std::move(tgt), std::move(m));
  }

  const ModuleObj& source() const { return src_; }
  const ModuleObj& target() const { return tgt_; }
  const Matrix& matrix() const { return m_; }
  const IntMatrix& int_matrix() const { return std::get<IntMatrix>(m_); }
  const FpMatrix& fp_matrix() const { return std::get<FpMatrix>(m_); }
  bool is_integer() const { return std::holds_alternative<IntMatrix>(m_); }

  std::optional<std::string> well_defined_violation() const {
    if (!(src_.ring() == tgt_.ring())) return "source and target rings differ";
    if (is_integer()) {
      const auto& F = int_matrix();
      if (F.rows() != tgt_.coord_dim() || F.cols() != src_.coord_dim()) return "matrix shape mismatch";
      const auto& rel = src_.int_data().relations;
      for (std::size_t r = 0; r < rel.rows(); ++r) {
        IntVector img = F * rel.row(r);
        auto nf = tgt_.normal_form(img);
        for (const auto& x : nf)
          if (sgn(x) != 0) return "relation " + std::to_string(r) + " of the source is not sent to zero";
      }
      return std::nullopt;
    }
    const auto& F = fp_matrix();
    if (F.rows() != tgt_.coord_dim() || F.cols() != src_.coord_dim()) return "matrix shape mismatch";
    const auto& as = src_.fp_data().actions;
    const auto& at = tgt_.fp_data().actions;
    for (std::size_t b = 0; b < as.size(); ++b)
      if (!(F * as[b] == at[b] * F))
        return "does not commute with the action of " + src_.ring().labels()[b];
    return std::nullopt;
  }

 private:
  ModMor(ModuleObj src, ModuleObj tgt, Matrix m) : src_(std::move(src)), tgt_(std::move(tgt)), m_(std::move(m)) {}

  ModuleObj src_, tgt_;
  Matrix m_;
};

/// An element of a module, in the coordinates of its parent.
struct Element {
  ModuleObj parent;
  std::variant<IntVector, FpVector> coords;

  bool is_zero() const {
    if (parent.is_integer()) {
      for (const auto& x : parent.normal_form(std::get<IntVector>(coords)))
        if (sgn(x) != 0) return false;
      return true;
    }
    for (auto x : std::get<FpVector>(coords))
      if (x) return false;
    return true;
  }

  friend bool operator==(const Element& a, const Element& b) {
    if (!(a.parent == b.parent)) return false;
    if (a.parent.is_integer())
      return a.parent.normal_form(std::get<IntVector>(a.coords)) == b.parent.normal_form(std::get<IntVector>(b.coords));
    return a.coords == b.coords;
  }
};

/// Zero / identity matrices of the coordinate kind used by modules over r.
inline ModMor::Matrix mat_zero(const Ring& r, std::size_t rows, std::size_t cols) {
  if (r.is_integers()) return IntMatrix(rows, cols);
  return FpMatrix(r.prime(), rows, cols);
}
inline ModMor::Matrix mat_identity(const Ring& r, std::size_t n) {
  if (r.is_integers()) return IntMatrix::identity(n);
  return FpMatrix::identity(r.prime(), n);
}

/// Copy src into dst with its top-left corner at (r0, c0).
inline void mat_place(ModMor::Matrix& dst, std::size_t r0, std::size_t c0, const ModMor::Matrix& src) {
  std::visit(
      [&](auto& d) {
        using M = std::decay_t<decltype(d)>;
        const auto& s = std::get<M>(src);
        for (std::size_t i = 0; i < s.rows(); ++i)
          for (std::size_t j = 0; j < s.cols(); ++j) d(r0 + i, c0 + j) = s(i, j);
      },
      dst);
}

inline ModMor::Matrix mat_block(const ModMor::Matrix& m, std::size_t r0, std::size_t c0, std::size_t nr,
                                std::size_t nc) {
  return std::visit([&](const auto& a) -> ModMor::Matrix { return submatrix(a, r0, c0, nr, nc); }, m);
}

struct KernelResult {
  ModuleObj object;
  ModMor mono;
};
struct CokernelResult {
  ModuleObj object;
  ModMor epi;
};

namespace detail {

inline IntMatrix int_zero(std::size_t r, std::size_t c) { return IntMatrix(r, c); }

// Replace a Z-presentation by its Smith form; returns (M', iso M' -> M, inverse M -> M').
struct Simplified {
  ModuleObj object;
  IntMatrix to_old;    // old coords x new coords
  IntMatrix from_old;  // new coords x old coords
};

inline Simplified simplify_int(const ModuleObj& m) {
  const auto& id = m.int_data();
  const std::size_t g = id.gens;
  SnfResult s = snf(id.relations.rows() ? id.relations : IntMatrix(0, g));
  std::vector<std::size_t> kept;
  std::vector<long> dummy;
  std::vector<Int> orders(g, Int(0));
  for (std::size_t k = 0; k < s.rank; ++k) orders[k] = s.D(k, k);
  for (std::size_t k = 0; k < g; ++k)
    if (orders[k] != 1) kept.push_back(k);
  std::size_t ntors = 0;
  for (auto k : kept)
    if (orders[k] != 0) ++ntors;
  IntMatrix rel(ntors, kept.size());
  std::size_t r = 0;
  for (std::size_t c = 0; c < kept.size(); ++c)
    if (orders[kept[c]] != 0) rel(r++, c) = orders[kept[c]];
  IntMatrix to_old(g, kept.size()), from_old(kept.size(), g);
  for (std::size_t c = 0; c < kept.size(); ++c)
    for (std::size_t i = 0; i < g; ++i) {
      to_old(i, c) = s.V_inv(kept[c], i);
      from_old(c, i) = s.V(i, kept[c]);
    }
  return {ModuleObj::integer_presentation(std::move(rel), kept.size()), std::move(to_old), std::move(from_old)};
}

}  // namespace detail

/// The abelian category of finitely presented modules over one base ring.
class ModuleCategory {
 public:
  using Object = ModuleObj;
  using Morphism = ModMor;

  explicit ModuleCategory(Ring ring = Ring::integers()) : ring_(std::move(ring)) {}

  const Ring& ring() const { return ring_; }

  ModuleObj zero_object() const { return ModuleObj::zero(ring_); }

  ModMor identity(const ModuleObj& a) const {
    if (a.is_integer()) return ModMor::unchecked(a, a, IntMatrix::identity(a.coord_dim()));
    return ModMor::unchecked(a, a, FpMatrix::identity(a.ring().prime(), a.coord_dim()));
  }

  ModMor zero_morphism(const ModuleObj& a, const ModuleObj& b) const {
    if (a.is_integer()) return ModMor::unchecked(a, b, IntMatrix(b.coord_dim(), a.coord_dim()));
    return ModMor::unchecked(a, b, FpMatrix(a.ring().prime(), b.coord_dim(), a.coord_dim()));
  }

  ModMor compose(const ModMor& g, const ModMor& f) const {
    if (!(f.target() == g.source())) throw std::invalid_argument("compose: target of f != source of g");
    if (f.is_integer()) return ModMor::unchecked(f.source(), g.target(), g.int_matrix() * f.int_matrix());
    return ModMor::unchecked(f.source(), g.target(), g.fp_matrix() * f.fp_matrix());
  }

  ModMor add(const ModMor& f, const ModMor& g) const {
    check_parallel(f, g);
    if (f.is_integer()) return ModMor::unchecked(f.source(), f.target(), f.int_matrix() + g.int_matrix());
    return ModMor::unchecked(f.source(), f.target(), f.fp_matrix() + g.fp_matrix());
  }

  ModMor negate(const ModMor& f) const {
    if (f.is_integer()) return ModMor::unchecked(f.source(), f.target(), -f.int_matrix());
    return ModMor::unchecked(f.source(), f.target(), -f.fp_matrix());
  }

  ModMor scale(const ModMor& f, long k) const {
    if (f.is_integer()) return ModMor::unchecked(f.source(), f.target(), Int(k) * f.int_matrix());
    return ModMor::unchecked(f.source(), f.target(),
                             scaled(f.fp_matrix(), FpMatrix::reduce(f.source().ring().prime(), k)));
  }

  bool is_zero(const ModMor& f) const {
    if (!f.is_integer()) return f.fp_matrix().is_zero();
    const auto& F = f.int_matrix();
    for (std::size_t j = 0; j < F.cols(); ++j) {
      for (const auto& x : f.target().normal_form(F.column(j)))
        if (sgn(x) != 0) return false;
    }
    return true;
  }

  bool equal(const ModMor& f, const ModMor& g) const {
    if (!(f.source() == g.source()) || !(f.target() == g.target())) return false;
    return is_zero(add(f, negate(g)));
  }

  bool is_zero_object(const ModuleObj& a) const { return a.is_zero(); }

  Element generator(const ModuleObj& a, std::size_t k) const {
    if (a.is_integer()) {
      IntVector v(a.coord_dim());
      v[k] = 1;
      return {a, v};
    }
    return {a, a.fp_data().generators.at(k)};
  }

  Element apply(const ModMor& f, const Element& x) const {
    if (f.is_integer()) return {f.target(), f.int_matrix() * std::get<IntVector>(x.coords)};
    return {f.target(), f.fp_matrix() * std::get<FpVector>(x.coords)};
  }

  /// Some x with f(x) = y, or nullopt when y is not in the image.
  std::optional<Element> preimage(const ModMor& f, const Element& y) const {
    if (f.is_integer()) {
      const auto& F = f.int_matrix();
      const auto& rel = f.target().int_data().relations;
      IntMatrix sys = rel.rows() ? hconcat(F, rel.transposed()) : F;
      auto sol = solve_int(sys, std::get<IntVector>(y.coords));
      if (!sol) return std::nullopt;
      IntVector x(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(F.cols()));
      return Element{f.source(), std::move(x)};
    }
    auto sol = fp_solve(f.fp_matrix(), std::get<FpVector>(y.coords));
    if (!sol) return std::nullopt;
    return Element{f.source(), std::move(*sol)};
  }

  KernelResult kernel(const ModMor& f) const {
    if (f.is_integer()) return kernel_int(f);
    const auto& F = f.fp_matrix();
    const auto p = f.source().ring().prime();
    FpMatrix K = fp_kernel_matrix(F);
    std::vector<FpMatrix> actions;
    for (const auto& a : f.source().fp_data().actions) {
      auto x = fp_solve_matrix(K, a * K);
      if (!x) throw std::logic_error("kernel: subspace not invariant");
      actions.push_back(K.cols() ? *x : FpMatrix(p, 0, 0));
    }
    ModuleObj k = ModuleObj::representation(f.source().ring(), K.cols(), std::move(actions));
    return {k, ModMor::unchecked(k, f.source(), K)};
  }

  CokernelResult cokernel(const ModMor& f) const {
    if (f.is_integer()) {
      const auto& rel = f.target().int_data().relations;
      IntMatrix all = vconcat(rel, f.int_matrix().transposed());
      ModuleObj c0 = ModuleObj::integer_presentation(all, f.target().coord_dim());
      auto s = detail::simplify_int(c0);
      return {s.object, ModMor::unchecked(f.target(), s.object, s.from_old)};
    }
    auto quo = fp_quotient(f.fp_matrix());
    std::vector<FpMatrix> actions;
    for (const auto& a : f.target().fp_data().actions) actions.push_back(quo.q * a * quo.s);
    ModuleObj c = ModuleObj::representation(f.target().ring(), quo.q.rows(), std::move(actions));
    return {c, ModMor::unchecked(f.target(), c, quo.q)};
  }

  /// h = e o result, for a free source of g. Each generator is lifted by preimage.
  std::optional<ModMor> lift(const ModMor& e, const ModMor& g) const {
    if (!(e.target() == g.target())) throw std::invalid_argument("lift: targets differ");
    const ModuleObj& P = g.source();
    if (!P.is_free()) throw std::invalid_argument("lift: source must be free");
    return lift_generators(e, g);
  }

  /// The unique k with m o k = h, for a mono m.
  std::optional<ModMor> factor_through_mono(const ModMor& m, const ModMor& h) const {
    if (!(m.target() == h.target())) throw std::invalid_argument("factor_through_mono: targets differ");
    if (h.is_integer()) {
      IntMatrix K(m.source().coord_dim(), h.source().coord_dim());
      for (std::size_t j = 0; j < h.source().coord_dim(); ++j) {
        auto x = preimage(m, generator_int(h.target(), h.int_matrix().column(j)));
        if (!x) return std::nullopt;
        K.set_column(j, std::get<IntVector>(x->coords));
      }
      return ModMor::unchecked(h.source(), m.source(), std::move(K));
    }
    auto x = fp_solve_matrix(m.fp_matrix(), h.fp_matrix());
    if (!x) return std::nullopt;
    ModMor k = ModMor::unchecked(h.source(), m.source(), *x);
    if (k.well_defined_violation()) return std::nullopt;
    return k;
  }

  /// The k with k o e = h, for an epi e, when h vanishes on ker(e).
  std::optional<ModMor> factor_through_epi(const ModMor& e, const ModMor& h) const {
    if (!(e.source() == h.source())) throw std::invalid_argument("factor_through_epi: sources differ");
    const ModuleObj& Q = e.target();
    std::optional<ModMor> k;
    if (h.is_integer()) {
      IntMatrix K(h.target().coord_dim(), Q.coord_dim());
      for (std::size_t j = 0; j < Q.coord_dim(); ++j) {
        IntVector ej(Q.coord_dim());
        ej[j] = 1;
        auto a = preimage(e, Element{Q, ej});
        if (!a) return std::nullopt;
        K.set_column(j, h.int_matrix() * std::get<IntVector>(a->coords));
      }
      k = ModMor::unchecked(Q, h.target(), std::move(K));
    } else {
      const auto p = Q.ring().prime();
      auto s = fp_solve_matrix(e.fp_matrix(), FpMatrix::identity(p, Q.coord_dim()));
      if (!s) return std::nullopt;
      k = ModMor::unchecked(Q, h.target(), h.fp_matrix() * *s);
    }
    if (k->well_defined_violation()) return std::nullopt;
    if (!equal(compose(*k, e), h)) return std::nullopt;
    return k;
  }

  struct Cover {
    ModuleObj object;
    ModMor epi;
  };

  /// Free module on the listed generators of a, with the evaluation epi.
  Cover free_cover(const ModuleObj& a) const {
    if (a.is_integer()) {
      ModuleObj P = ModuleObj::free(a.ring(), a.coord_dim());
      return {P, ModMor::unchecked(P, a, IntMatrix::identity(a.coord_dim()))};
    }
    const auto& gens = a.fp_data().generators;
    ModuleObj P = ModuleObj::free(a.ring(), gens.size());
    return {P, extend_from_free(P, a, gens)};
  }

  struct Biproduct {
    ModuleObj object;
    ModMor in1, in2, pr1, pr2;
  };

  Biproduct biproduct(const ModuleObj& a, const ModuleObj& b) const {
    if (!(a.ring() == b.ring())) throw std::invalid_argument("biproduct: ring mismatch");
    const std::size_t na = a.coord_dim(), nb = b.coord_dim();
    if (a.is_integer()) {
      ModuleObj s = ModuleObj::integer_presentation(
          block_diag(a.int_data().relations.rows() ? a.int_data().relations : IntMatrix(0, na),
                     b.int_data().relations.rows() ? b.int_data().relations : IntMatrix(0, nb)),
          na + nb);
      IntMatrix i1(na + nb, na), i2(na + nb, nb), p1(na, na + nb), p2(nb, na + nb);
      for (std::size_t k = 0; k < na; ++k) i1(k, k) = p1(k, k) = 1;
      for (std::size_t k = 0; k < nb; ++k) i2(na + k, k) = p2(k, na + k) = 1;
      return {s, ModMor::unchecked(a, s, i1), ModMor::unchecked(b, s, i2), ModMor::unchecked(s, a, p1),
              ModMor::unchecked(s, b, p2)};
    }
    const auto p = a.ring().prime();
    std::vector<FpMatrix> actions;
    for (std::size_t k = 0; k < a.ring().dim(); ++k)
      actions.push_back(block_diag(a.fp_data().actions[k], b.fp_data().actions[k]));
    ModuleObj s = ModuleObj::representation(a.ring(), na + nb, std::move(actions));
    if (a.is_free() && b.is_free()) s = ModuleObj::free(a.ring(), a.free_rank() + b.free_rank());
    FpMatrix i1(p, na + nb, na), i2(p, na + nb, nb), p1(p, na, na + nb), p2(p, nb, na + nb);
    for (std::size_t k = 0; k < na; ++k) i1(k, k) = p1(k, k) = 1;
    for (std::size_t k = 0; k < nb; ++k) i2(na + k, k) = p2(k, na + k) = 1;
    return {s, ModMor::unchecked(a, s, i1), ModMor::unchecked(b, s, i2), ModMor::unchecked(s, a, p1),
            ModMor::unchecked(s, b, p2)};
  }

  /// Homomorphism from a free module sending generator k to images[k].
  ModMor extend_from_free(const ModuleObj& P, const ModuleObj& X, const std::vector<FpVector>& images) const {
    const Ring& R = P.ring();
    const std::size_t d = R.dim();
    FpMatrix H(R.prime(), X.coord_dim(), P.coord_dim());
    for (std::size_t k = 0; k < images.size(); ++k)
      for (std::size_t l = 0; l < d; ++l) H.set_column(k * d + l, X.fp_data().actions[l] * images[k]);
    return ModMor::unchecked(P, X, std::move(H));
  }

  /// A random homomorphism out of a free module.
  ModMor random_from_free(const ModuleObj& P, const ModuleObj& X, std::mt19937_64& rng, long bound = 3) const {
    if (!P.is_free()) throw std::invalid_argument("random_from_free: source must be free");
    if (P.is_integer()) {
      std::uniform_int_distribution<long> dist(-bound, bound);
      IntMatrix H(X.coord_dim(), P.coord_dim());
      for (std::size_t i = 0; i < H.rows(); ++i)
        for (std::size_t j = 0; j < H.cols(); ++j) H(i, j) = dist(rng);
      return ModMor::unchecked(P, X, std::move(H));
    }
    std::uniform_int_distribution<std::uint32_t> dist(0, X.ring().prime() - 1);
    std::vector<FpVector> imgs(P.free_rank(), FpVector(X.coord_dim()));
    for (auto& v : imgs)
      for (auto& x : v) x = dist(rng);
    return extend_from_free(P, X, imgs);
  }

 private:
  static void check_parallel(const ModMor& f, const ModMor& g) {
    if (!(f.source() == g.source()) || !(f.target() == g.target()))
      throw std::invalid_argument("morphisms are not parallel");
  }

  static Element generator_int(const ModuleObj& a, IntVector v) { return {a, std::move(v)}; }

  std::optional<ModMor> lift_generators(const ModMor& e, const ModMor& g) const {
    const ModuleObj& P = g.source();
    if (P.is_integer()) {
      IntMatrix H(e.source().coord_dim(), P.coord_dim());
      for (std::size_t j = 0; j < P.coord_dim(); ++j) {
        auto x = preimage(e, Element{g.target(), g.int_matrix().column(j)});
        if (!x) return std::nullopt;
        H.set_column(j, std::get<IntVector>(x->coords));
      }
      return ModMor::unchecked(P, e.source(), std::move(H));
    }
    std::vector<FpVector> imgs;
    for (const auto& gen : P.fp_data().generators) {
      auto x = preimage(e, Element{g.target(), g.fp_matrix() * gen});
      if (!x) return std::nullopt;
      imgs.push_back(std::get<FpVector>(x->coords));
    }
    return extend_from_free(P, e.source(), imgs);
  }

  KernelResult kernel_int(const ModMor& f) const {
    const ModuleObj& M = f.source();
    const ModuleObj& N = f.target();
    const auto& F = f.int_matrix();
    const std::size_t gm = M.coord_dim();
    const auto& relN = N.int_data().relations;
    IntMatrix sys = relN.rows() ? hconcat(F, relN.transposed()) : F;
    IntMatrix kb = sys.rows() ? int_kernel_basis(sys) : IntMatrix::identity(gm);
    IntMatrix lattice_gens = submatrix(kb, 0, 0, gm, kb.cols());
    IntMatrix B = int_column_basis(lattice_gens);
    const auto& relM = M.int_data().relations;
    IntMatrix krel(relM.rows(), B.cols());
    for (std::size_t r = 0; r < relM.rows(); ++r) {
      auto c = solve_int(B, relM.row(r));
      if (!c) throw std::logic_error("kernel: source relation outside kernel lattice");
      for (std::size_t k = 0; k < B.cols(); ++k) krel(r, k) = (*c)[k];
    }
    ModuleObj k0 = ModuleObj::integer_presentation(std::move(krel), B.cols());
    auto s = detail::simplify_int(k0);
    return {s.object, ModMor::unchecked(s.object, M, B * s.to_old)};
  }

  Ring ring_;
};

}  // namespace fch
