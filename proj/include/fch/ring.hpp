#pragma once

#include "fch/fp_linalg.hpp"

#include <memory>
#include <string>
#include <vector>

namespace fch {

/// The base ring of a module category: the integers, or a finite-dimensional
/// associative unital algebra over F_p given by structure constants.
class Ring {
 public:
  enum class Kind { Integers, FpAlgebra };

  static Ring integers() {
    static const Ring z{std::make_shared<const Data>(Data{Kind::Integers, 0, 0, {}, {}, {}, true, "Z"})};
    return z;
  }

  /// structure[a][b][e] is the coefficient of basis e in b_a * b_b.
  static Ring fp_algebra(std::uint32_t p, std::vector<std::string> labels,
                         const std::vector<std::vector<std::vector<long>>>& structure, const std::vector<long>& unit,
                         std::string name = {}) {
    if (p < 2) throw std::invalid_argument("fp_algebra: p must be prime");
    for (std::uint32_t k = 2; k * k <= p; ++k)
      if (p % k == 0) throw std::invalid_argument("fp_algebra: " + std::to_string(p) + " is not prime");
    const std::size_t d = structure.size();
    if (d == 0) throw std::invalid_argument("fp_algebra: dimension must be positive");
    if (labels.empty())
      for (std::size_t i = 0; i < d; ++i) labels.push_back("b" + std::to_string(i));
    if (labels.size() != d || unit.size() != d) throw std::invalid_argument("fp_algebra: label/unit count != dimension");
    Data data{Kind::FpAlgebra, p, d, std::move(labels), std::vector<FpMatrix::Scalar>(d * d * d), {}, true, std::move(name)};
    for (std::size_t a = 0; a < d; ++a) {
      if (structure[a].size() != d) throw std::invalid_argument("fp_algebra: structure constants not d x d x d");
      for (std::size_t b = 0; b < d; ++b) {
        if (structure[a][b].size() != d) throw std::invalid_argument("fp_algebra: structure constants not d x d x d");
        for (std::size_t e = 0; e < d; ++e) data.c[(a * d + b) * d + e] = FpMatrix::reduce(p, structure[a][b][e]);
      }
    }
    for (long u : unit) data.unit.push_back(FpMatrix::reduce(p, u));
    Ring r{std::make_shared<const Data>(std::move(data))};
    r.check_axioms();
    return r;
  }

  static Ring prime_field(std::uint32_t p) {
    return fp_algebra(p, {"1"}, {{{1}}}, {1}, "F" + std::to_string(p));
  }

  Kind kind() const { return d_->kind; }
  bool is_integers() const { return d_->kind == Kind::Integers; }
  std::uint32_t prime() const { return d_->p; }
  std::size_t dim() const { return d_->dim; }
  const std::vector<std::string>& labels() const { return d_->labels; }
  const std::string& name() const { return d_->name; }
  bool commutative() const { return d_->commutative; }
  const FpVector& unit() const { return d_->unit; }

  FpMatrix::Scalar structure(std::size_t a, std::size_t b, std::size_t e) const {
    return d_->c[(a * d_->dim + b) * d_->dim + e];
  }

  Ring renamed(std::string name) const {
    Data copy = *d_;
    copy.name = std::move(name);
    return Ring{std::make_shared<const Data>(std::move(copy))};
  }

  FpVector basis_vector(std::size_t a) const {
    FpVector v(dim(), 0);
    v[a] = 1;
    return v;
  }

  FpVector multiply(const FpVector& x, const FpVector& y) const {
    const std::size_t d = dim();
    const std::uint64_t p = prime();
    FpVector z(d, 0);
    for (std::size_t a = 0; a < d; ++a) {
      if (!x[a]) continue;
      for (std::size_t b = 0; b < d; ++b) {
        if (!y[b]) continue;
        std::uint64_t xy = std::uint64_t(x[a]) * y[b] % p;
        for (std::size_t e = 0; e < d; ++e)
          z[e] = static_cast<FpMatrix::Scalar>((z[e] + xy * structure(a, b, e)) % p);
      }
    }
    return z;
  }

  /// Matrix of y -> x*y in basis coordinates.
  FpMatrix left_mult(const FpVector& x) const {
    FpMatrix m(prime(), dim(), dim());
    for (std::size_t b = 0; b < dim(); ++b) m.set_column(b, multiply(x, basis_vector(b)));
    return m;
  }

  /// Matrix of y -> y*x in basis coordinates.
  FpMatrix right_mult(const FpVector& x) const {
    FpMatrix m(prime(), dim(), dim());
    for (std::size_t b = 0; b < dim(); ++b) m.set_column(b, multiply(basis_vector(b), x));
    return m;
  }

  friend bool operator==(const Ring& a, const Ring& b) {
    if (a.d_ == b.d_) return true;
    return a.d_->kind == b.d_->kind && a.d_->p == b.d_->p && a.d_->dim == b.d_->dim && a.d_->c == b.d_->c &&
           a.d_->unit == b.d_->unit;
  }

  std::string describe() const {
    if (!name().empty()) return name();
    if (is_integers()) return "Z";
    return "F" + std::to_string(prime()) + "-algebra(dim " + std::to_string(dim()) + ")";
  }

 private:
  struct Data {
    Kind kind;
    std::uint32_t p;
    std::size_t dim;
    std::vector<std::string> labels;
    std::vector<FpMatrix::Scalar> c;
    FpVector unit;
    bool commutative;
    std::string name;
  };

  explicit Ring(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

  void check_axioms() {
    const std::size_t d = dim();
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t c = 0; c < d; ++c) {
          auto ab_c = multiply(multiply(basis_vector(a), basis_vector(b)), basis_vector(c));
          auto a_bc = multiply(basis_vector(a), multiply(basis_vector(b), basis_vector(c)));
          if (ab_c != a_bc)
            throw std::invalid_argument("fp_algebra: associativity fails on basis triple (" + labels()[a] + ", " +
                                        labels()[b] + ", " + labels()[c] + ")");
        }
    bool comm = true;
    for (std::size_t a = 0; a < d; ++a) {
      if (multiply(unit(), basis_vector(a)) != basis_vector(a) || multiply(basis_vector(a), unit()) != basis_vector(a))
        throw std::invalid_argument("fp_algebra: unit law fails at basis element " + labels()[a]);
      for (std::size_t b = 0; b < d; ++b)
        if (multiply(basis_vector(a), basis_vector(b)) != multiply(basis_vector(b), basis_vector(a))) comm = false;
    }
    auto data = std::make_shared<Data>(*d_);
    data->commutative = comm;
    d_ = std::move(data);
  }

  std::shared_ptr<const Data> d_;
};

/// Multiplication table of a finite group: table[i][j] = index of g_i * g_j.
using GroupTable = std::vector<std::vector<std::size_t>>;

inline void check_group_table(const GroupTable& t) {
  const std::size_t n = t.size();
  if (n == 0) throw std::invalid_argument("group table is empty");
  for (const auto& row : t) {
    if (row.size() != n) throw std::invalid_argument("group table is not square");
    for (auto x : row)
      if (x >= n) throw std::invalid_argument("group table entry out of range");
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (t[t[a][b]][c] != t[a][t[b][c]])
          throw std::invalid_argument("group table is not associative at (" + std::to_string(a) + ", " +
                                      std::to_string(b) + ", " + std::to_string(c) + ")");
  std::size_t e = n;
  for (std::size_t a = 0; a < n && e == n; ++a) {
    bool ok = true;
    for (std::size_t b = 0; b < n; ++b)
      if (t[a][b] != b || t[b][a] != b) ok = false;
    if (ok) e = a;
  }
  if (e == n) throw std::invalid_argument("group table has no identity");
  for (std::size_t a = 0; a < n; ++a) {
    bool has_inverse = false;
    for (std::size_t b = 0; b < n; ++b)
      if (t[a][b] == e && t[b][a] == e) has_inverse = true;
    if (!has_inverse) throw std::invalid_argument("group element " + std::to_string(a) + " has no inverse");
  }
}

inline GroupTable cyclic_group_table(std::size_t n) {
  GroupTable t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return t;
}

/// Direct product; element (a, b) has index a * |H| + b.
inline GroupTable product_group_table(const GroupTable& g, const GroupTable& h) {
  const std::size_t m = g.size(), n = h.size();
  GroupTable t(m * n, std::vector<std::size_t>(m * n));
  for (std::size_t a1 = 0; a1 < m; ++a1)
    for (std::size_t b1 = 0; b1 < n; ++b1)
      for (std::size_t a2 = 0; a2 < m; ++a2)
        for (std::size_t b2 = 0; b2 < n; ++b2) t[a1 * n + b1][a2 * n + b2] = g[a1][a2] * n + h[b1][b2];
  return t;
}

/// Group algebra F_p[G] with basis the group elements.
inline Ring group_algebra(std::uint32_t p, const GroupTable& table, std::vector<std::string> labels = {},
                          std::string name = {}) {
  check_group_table(table);
  const std::size_t n = table.size();
  if (labels.empty())
    for (std::size_t i = 0; i < n; ++i) labels.push_back("g" + std::to_string(i));
  std::vector<std::vector<std::vector<long>>> c(n, std::vector<std::vector<long>>(n, std::vector<long>(n, 0)));
  std::vector<long> unit(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) c[a][b][table[a][b]] = 1;
  for (std::size_t a = 0; a < n; ++a) {
    bool id = true;
    for (std::size_t b = 0; b < n; ++b)
      if (table[a][b] != b) id = false;
    if (id) unit[a] = 1;
  }
  return Ring::fp_algebra(p, std::move(labels), c, unit, std::move(name));
}

/// A unital ring homomorphism. From the integers the map is the unique one;
/// between F_p-algebras it is a d_target x d_source matrix on basis elements.
class RingMap {
 public:
  static RingMap from_integers(const Ring& target) {
    if (target.is_integers()) return RingMap(target, target, FpMatrix{});
    return RingMap(Ring::integers(), target, FpMatrix{});
  }

  RingMap(Ring source, Ring target, FpMatrix images) : src_(std::move(source)), tgt_(std::move(target)), m_(std::move(images)) {
    if (src_.is_integers()) return;
    if (tgt_.is_integers()) throw std::invalid_argument("RingMap: no ring map from an F_p-algebra to Z");
    if (src_.prime() != tgt_.prime()) throw std::invalid_argument("RingMap: characteristic mismatch");
    if (m_.rows() != tgt_.dim() || m_.cols() != src_.dim()) throw std::invalid_argument("RingMap: matrix shape mismatch");
    if (m_ * src_.unit() != tgt_.unit()) throw std::invalid_argument("RingMap: unit not preserved");
    for (std::size_t a = 0; a < src_.dim(); ++a)
      for (std::size_t b = 0; b < src_.dim(); ++b) {
        auto lhs = m_ * src_.multiply(src_.basis_vector(a), src_.basis_vector(b));
        auto rhs = tgt_.multiply(m_.column(a), m_.column(b));
        if (lhs != rhs)
          throw std::invalid_argument("RingMap: multiplicativity fails on (" + src_.labels()[a] + ", " +
                                      src_.labels()[b] + ")");
      }
  }

  /// Induced by a group homomorphism given as an index map G -> H.
  static RingMap from_group_hom(const Ring& source, const Ring& target, const std::vector<std::size_t>& hom) {
    FpMatrix m(target.prime(), target.dim(), source.dim());
    if (hom.size() != source.dim()) throw std::invalid_argument("group hom: wrong length");
    for (std::size_t a = 0; a < hom.size(); ++a) {
      if (hom[a] >= target.dim()) throw std::invalid_argument("group hom: index out of range");
      m(hom[a], a) = 1;
    }
    return RingMap(source, target, std::move(m));
  }

  /// Augmentation F_p[G] -> F_p sending every group element to 1.
  static RingMap augmentation(const Ring& group_ring) {
    Ring k = Ring::prime_field(group_ring.prime());
    FpMatrix m(group_ring.prime(), 1, group_ring.dim());
    for (std::size_t a = 0; a < group_ring.dim(); ++a) m(0, a) = 1;
    return RingMap(group_ring, k, std::move(m));
  }

  const Ring& source() const { return src_; }
  const Ring& target() const { return tgt_; }
  const FpMatrix& matrix() const { return m_; }

  friend bool operator==(const RingMap& a, const RingMap& b) {
    return a.src_ == b.src_ && a.tgt_ == b.tgt_ && (a.src_.is_integers() || a.m_ == b.m_);
  }

 private:
  Ring src_, tgt_;
  FpMatrix m_;
};

}  // namespace fch
