#pragma once

#include "fch/matrix.hpp"

#include <optional>

namespace fch {

inline FpMatrix::Scalar fp_inverse(std::uint32_t p, FpMatrix::Scalar a) {
  // Fermat; p is prime
  std::uint64_t result = 1, base = a % p;
  std::uint64_t e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<FpMatrix::Scalar>(result);
}

struct Rref {
  FpMatrix reduced;
  std::vector<std::size_t> pivots;  // pivot column per nonzero row
  std::size_t rank() const { return pivots.size(); }
};

inline Rref rref(FpMatrix a) {
  const std::uint32_t p = a.prime();
  Rref out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t piv = row;
    while (piv < a.rows() && a(piv, col) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
    auto inv = fp_inverse(p, a(row, col));
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) = a.mul(a(row, j), inv);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      auto f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) = a.sub(a(i, j), a.mul(f, a(row, j)));
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(a);
  return out;
}

inline std::size_t fp_rank(const FpMatrix& a) { return rref(a).rank(); }

/// Basis of the null space; count = cols - rank.
inline std::vector<FpVector> fp_kernel_basis(const FpMatrix& a) {
  Rref r = rref(a);
  const std::uint32_t p = a.prime();
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : r.pivots) is_pivot[c] = true;
  std::vector<FpVector> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    FpVector v(a.cols(), 0);
    v[free] = 1 % p;
    for (std::size_t k = 0; k < r.pivots.size(); ++k) v[r.pivots[k]] = a.sub(0, r.reduced(k, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

inline FpMatrix fp_kernel_matrix(const FpMatrix& a) {
  return columns_to_matrix(a.prime(), a.cols(), fp_kernel_basis(a));
}

/// Some x with A x = b, or nullopt.
inline std::optional<FpVector> fp_solve(const FpMatrix& a, const FpVector& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("fp_solve: b length != rows(A)");
  FpMatrix aug(a.prime(), a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  Rref r = rref(aug);
  FpVector x(a.cols(), 0);
  for (std::size_t k = 0; k < r.pivots.size(); ++k) {
    if (r.pivots[k] == a.cols()) return std::nullopt;
    x[r.pivots[k]] = r.reduced(k, a.cols());
  }
  return x;
}

/// Solve A X = B column by column; nullopt if any column is unsolvable.
inline std::optional<FpMatrix> fp_solve_matrix(const FpMatrix& a, const FpMatrix& b) {
  if (b.rows() != a.rows()) throw std::invalid_argument("fp_solve_matrix: row mismatch");
  FpMatrix aug = hconcat(a, b);
  Rref r = rref(aug);
  FpMatrix x(a.prime(), a.cols(), b.cols());
  for (std::size_t k = 0; k < r.pivots.size(); ++k) {
    if (r.pivots[k] >= a.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(r.pivots[k], j) = r.reduced(k, a.cols() + j);
  }
  return x;
}

/// Basis (columns) of the column space, taken from the pivot columns of A.
inline FpMatrix fp_column_basis(const FpMatrix& a) {
  Rref r = rref(a);
  FpMatrix b(a.prime(), a.rows(), r.rank());
  for (std::size_t k = 0; k < r.rank(); ++k)
    for (std::size_t i = 0; i < a.rows(); ++i) b(i, k) = a(i, r.pivots[k]);
  return b;
}

/// Quotient data for F_p^n / colspan(W): a surjection q (k x n) with kernel
/// colspan(W) and a section s (n x k) with q s = I.
struct FpQuotient {
  FpMatrix q;
  FpMatrix s;
};

inline FpQuotient fp_quotient(const FpMatrix& w) {
  const std::uint32_t p = w.prime();
  const std::size_t n = w.rows();
  FpMatrix basis = fp_column_basis(w);
  FpMatrix aug = hconcat(basis, FpMatrix::identity(p, n));
  Rref r = rref(aug);
  std::vector<std::size_t> comp;
  for (auto c : r.pivots)
    if (c >= basis.cols()) comp.push_back(c - basis.cols());
  FpMatrix s(p, n, comp.size());
  for (std::size_t k = 0; k < comp.size(); ++k) s(comp[k], k) = 1 % p;
  FpMatrix t = hconcat(basis, s);
  // t is invertible; q = trailing rows of t^{-1}
  auto tinv = fp_solve_matrix(t, FpMatrix::identity(p, n));
  if (!tinv) throw std::logic_error("fp_quotient: complement basis is singular");
  FpMatrix q = submatrix(*tinv, basis.cols(), 0, comp.size(), n);
  return {std::move(q), std::move(s)};
}

}  // namespace fch
