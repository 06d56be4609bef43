#pragma once

#include "fch/matrix.hpp"

#include <optional>

namespace fch {

/// Smith normal form U*A*V = D with inverses of the unimodular factors.
///
/// Pivot rule: smallest nonzero absolute value in the active block, topmost
/// then leftmost on ties. Determinant signs of U and V are tracked per
/// elementary operation.
struct SnfResult {
  IntMatrix U, D, V;
  IntMatrix U_inv, V_inv;
  std::size_t rank = 0;
  int det_u = 1;
  int det_v = 1;

  /// Nonzero diagonal entries d_1 | d_2 | ... (all positive).
  std::vector<Int> invariant_factors() const {
    std::vector<Int> out;
    for (std::size_t i = 0; i < rank; ++i) out.push_back(D(i, i));
    return out;
  }
};

namespace detail {

class SnfWorker {
 public:
  explicit SnfWorker(const IntMatrix& a)
      : m_(a.rows()), n_(a.cols()), r_{IntMatrix::identity(a.rows()), a, IntMatrix::identity(a.cols()),
                                        IntMatrix::identity(a.rows()), IntMatrix::identity(a.cols())} {}

  SnfResult run() {
    std::size_t t = 0;
    const std::size_t lim = std::min(m_, n_);
    for (; t < lim; ++t) {
      if (!select_pivot(t)) break;
      reduce_at(t);
      if (sgn(r_.D(t, t)) < 0) row_neg(t);
    }
    r_.rank = t;
    return std::move(r_);
  }

 private:
  bool select_pivot(std::size_t t) {
    bool found = false;
    std::size_t bi = 0, bj = 0;
    Int best;
    for (std::size_t i = t; i < m_; ++i)
      for (std::size_t j = t; j < n_; ++j) {
        const Int& x = r_.D(i, j);
        if (sgn(x) == 0) continue;
        Int ax = abs(x);
        if (!found || ax < best) {
          found = true;
          best = ax;
          bi = i;
          bj = j;
        }
      }
    if (!found) return false;
    row_swap(t, bi);
    col_swap(t, bj);
    return true;
  }

  void reduce_at(std::size_t t) {
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m_; ++i) {
        if (sgn(r_.D(i, t)) == 0) continue;
        Int q = r_.D(i, t) / r_.D(t, t);
        row_add(i, t, -q);
        if (sgn(r_.D(i, t)) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n_; ++j) {
        if (sgn(r_.D(t, j)) == 0) continue;
        Int q = r_.D(t, j) / r_.D(t, t);
        col_add(j, t, -q);
        if (sgn(r_.D(t, j)) != 0) clean = false;
      }
      if (!clean) {
        // a remainder is strictly smaller than the pivot; promote the smallest
        bool found = false;
        bool in_col = true;
        std::size_t idx = 0;
        Int best;
        for (std::size_t i = t + 1; i < m_; ++i) {
          const Int& x = r_.D(i, t);
          if (sgn(x) != 0 && (!found || abs(x) < best)) {
            found = true;
            best = abs(x);
            in_col = true;
            idx = i;
          }
        }
        for (std::size_t j = t + 1; j < n_; ++j) {
          const Int& x = r_.D(t, j);
          if (sgn(x) != 0 && (!found || abs(x) < best)) {
            found = true;
            best = abs(x);
            in_col = false;
            idx = j;
          }
        }
        if (in_col)
          row_swap(t, idx);
        else
          col_swap(t, idx);
        continue;
      }
      // divisibility of the remaining block by the pivot
      bool divisible = true;
      for (std::size_t i = t + 1; i < m_ && divisible; ++i)
        for (std::size_t j = t + 1; j < n_; ++j) {
          if (sgn(r_.D(i, j)) == 0) continue;
          if (!mpz_divisible_p(r_.D(i, j).get_mpz_t(), r_.D(t, t).get_mpz_t())) {
            row_add(t, i, Int(1));
            divisible = false;
            break;
          }
        }
      if (divisible) return;
    }
  }

  void row_swap(std::size_t a, std::size_t b) {
    if (a == b) return;
    r_.D.swap_rows(a, b);
    r_.U.swap_rows(a, b);
    r_.U_inv.swap_cols(a, b);
    r_.det_u = -r_.det_u;
  }
  void col_swap(std::size_t a, std::size_t b) {
    if (a == b) return;
    r_.D.swap_cols(a, b);
    r_.V.swap_cols(a, b);
    r_.V_inv.swap_rows(a, b);
    r_.det_v = -r_.det_v;
  }
  void row_add(std::size_t dst, std::size_t src, const Int& k) {
    r_.D.add_row(dst, src, k);
    r_.U.add_row(dst, src, k);
    r_.U_inv.add_col(src, dst, -k);
  }
  void col_add(std::size_t dst, std::size_t src, const Int& k) {
    r_.D.add_col(dst, src, k);
    r_.V.add_col(dst, src, k);
    r_.V_inv.add_row(src, dst, -k);
  }
  void row_neg(std::size_t i) {
    r_.D.negate_row(i);
    r_.U.negate_row(i);
    r_.U_inv.negate_col(i);
    r_.det_u = -r_.det_u;
  }

  std::size_t m_, n_;
  SnfResult r_;
};

}  // namespace detail

inline SnfResult snf(const IntMatrix& a) { return detail::SnfWorker(a).run(); }

/// Integer solution of A x = b, or nullopt when none exists.
inline std::optional<IntVector> solve_int(const IntMatrix& a, const IntVector& b) {
  if (b.size() != a.rows()) throw std::invalid_argument("solve_int: b length != rows(A)");
  SnfResult s = snf(a);
  IntVector c = s.U * b;
  IntVector y(a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (i < s.rank) {
      if (!mpz_divisible_p(c[i].get_mpz_t(), s.D(i, i).get_mpz_t())) return std::nullopt;
      y[i] = c[i] / s.D(i, i);
    } else if (sgn(c[i]) != 0) {
      return std::nullopt;
    }
  }
  return s.V * y;
}

/// Z-basis of {x : A x = 0}, as columns.
inline IntMatrix int_kernel_basis(const IntMatrix& a) {
  SnfResult s = snf(a);
  return submatrix(s.V, 0, s.rank, a.cols(), a.cols() - s.rank);
}

/// Z-basis of the column lattice of G, as columns.
inline IntMatrix int_column_basis(const IntMatrix& g) {
  SnfResult s = snf(g);
  IntMatrix b(g.rows(), s.rank);
  for (std::size_t k = 0; k < s.rank; ++k)
    for (std::size_t i = 0; i < g.rows(); ++i) b(i, k) = s.U_inv(i, k) * s.D(k, k);
  return b;
}

}  // namespace fch
