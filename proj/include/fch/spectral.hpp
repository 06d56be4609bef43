#pragma once

#include "fch/fp_linalg.hpp"
#include "fch/homology.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fch {

/// First-quadrant double complex of F_p vector spaces on a P x Q grid.
/// dh[p][q]: (p,q) -> (p-1,q), dv[p][q]: (p,q) -> (p,q-1); the two commute,
/// and the total differential is dh + (-1)^p dv.
struct DoubleComplex {
  std::uint32_t prime = 2;
  std::vector<std::vector<std::size_t>> dims;
  std::vector<std::vector<FpMatrix>> dh, dv;

  std::size_t columns() const { return dims.size(); }
  std::size_t rows() const { return dims.empty() ? 0 : dims[0].size(); }
  std::size_t dim(long p, long q) const {
    if (p < 0 || q < 0 || std::size_t(p) >= columns() || std::size_t(q) >= rows()) return 0;
    return dims[p][q];
  }

  /// All differentials zero.
  static DoubleComplex zero(std::uint32_t prime, std::vector<std::vector<std::size_t>> dims) {
    DoubleComplex dc;
    dc.prime = prime;
    dc.dims = std::move(dims);
    const std::size_t P = dc.columns(), Q = dc.rows();
    dc.dh.assign(P, std::vector<FpMatrix>(Q));
    dc.dv.assign(P, std::vector<FpMatrix>(Q));
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t q = 0; q < Q; ++q) {
        dc.dh[p][q] = FpMatrix(prime, dc.dim(long(p) - 1, q), dc.dims[p][q]);
        dc.dv[p][q] = FpMatrix(prime, dc.dim(p, long(q) - 1), dc.dims[p][q]);
      }
    return dc;
  }
};

inline std::optional<std::string> double_complex_violation(const DoubleComplex& dc) {
  const std::size_t P = dc.columns(), Q = dc.rows();
  if (dc.dh.size() != P || dc.dv.size() != P) return "differential grids have the wrong size";
  for (std::size_t p = 0; p < P; ++p) {
    if (dc.dims[p].size() != Q || dc.dh[p].size() != Q || dc.dv[p].size() != Q) return "ragged grid";
    for (std::size_t q = 0; q < Q; ++q) {
      const std::string at = "(" + std::to_string(p) + "," + std::to_string(q) + ")";
      const auto& h = dc.dh[p][q];
      const auto& v = dc.dv[p][q];
      if (h.rows() != dc.dim(long(p) - 1, q) || h.cols() != dc.dims[p][q]) return "dh shape at " + at;
      if (v.rows() != dc.dim(p, long(q) - 1) || v.cols() != dc.dims[p][q]) return "dv shape at " + at;
      if (p >= 2 && !(dc.dh[p - 1][q] * h).is_zero()) return "dh o dh != 0 at " + at;
      if (q >= 2 && !(dc.dv[p][q - 1] * v).is_zero()) return "dv o dv != 0 at " + at;
      if (p >= 1 && q >= 1 && !(dc.dv[p - 1][q] * h == dc.dh[p][q - 1] * v)) return "dh and dv do not commute at " + at;
    }
  }
  return std::nullopt;
}

/// Tot with the column filtration: coordinates of Tot_n ordered by column.
struct TotalComplex {
  std::uint32_t prime = 2;
  std::size_t columns = 0;
  std::vector<std::size_t> dim;                  // per total degree
  std::vector<std::vector<std::size_t>> offset;  // offset[n][k]: start of column k, k = 0..columns
  std::vector<FpMatrix> d;                       // d[n]: Tot_n -> Tot_{n-1}; d[0] has no rows

  std::size_t top() const { return dim.empty() ? 0 : dim.size() - 1; }
  std::size_t size(long n) const { return n < 0 || std::size_t(n) > top() ? 0 : dim[n]; }

  /// dim F_k Tot_n.
  std::size_t filtered(long n, long k) const {
    if (n < 0 || std::size_t(n) > top() || k < 0) return 0;
    return offset[n][std::min<std::size_t>(k + 1, columns)];
  }

  /// d_n, with zero-size shapes outside the range.
  FpMatrix diff(long n) const {
    if (n >= 0 && std::size_t(n) <= top()) return d[n];
    return FpMatrix(prime, size(n - 1), size(n));
  }

  /// Unit-vector basis of F_k Tot_n.
  FpMatrix filtration(long n, long k) const {
    FpMatrix m(prime, size(n), filtered(n, k));
    for (std::size_t j = 0; j < m.cols(); ++j) m(j, j) = 1;
    return m;
  }

  /// Z^r_k = { x in F_k Tot_n : dx in F_{k-r} Tot_{n-1} }.
  FpMatrix almost_cycles(long n, long k, long r) const {
    const std::size_t cols = filtered(n, k);
    const FpMatrix D = diff(n);
    const std::size_t r0 = filtered(n - 1, k - r);
    auto K = fp_kernel_matrix(submatrix(D, r0, 0, D.rows() - r0, cols));
    return vconcat(K, FpMatrix(prime, size(n) - cols, K.cols()));
  }
};

inline TotalComplex total_complex(const DoubleComplex& dc) {
  TotalComplex t;
  t.prime = dc.prime;
  t.columns = dc.columns();
  const std::size_t P = dc.columns(), Q = dc.rows();
  if (P == 0 || Q == 0) return t;
  const std::size_t top = P + Q - 2;
  for (std::size_t n = 0; n <= top; ++n) {
    std::vector<std::size_t> off(P + 1, 0);
    for (std::size_t k = 0; k < P; ++k) off[k + 1] = off[k] + (n >= k ? dc.dim(k, long(n) - long(k)) : 0);
    t.offset.push_back(off);
    t.dim.push_back(off[P]);
  }
  for (std::size_t n = 0; n <= top; ++n) {
    FpMatrix D(dc.prime, t.size(long(n) - 1), t.dim[n]);
    for (std::size_t p = 0; p < P && p <= n; ++p) {
      const std::size_t q = n - p;
      if (q >= Q || dc.dims[p][q] == 0) continue;
      const std::size_t c0 = t.offset[n][p];
      if (p >= 1) {
        const auto& h = dc.dh[p][q];
        const std::size_t r0 = t.offset[n - 1][p - 1];
        for (std::size_t i = 0; i < h.rows(); ++i)
          for (std::size_t j = 0; j < h.cols(); ++j) D(r0 + i, c0 + j) = D.add(D(r0 + i, c0 + j), h(i, j));
      }
      if (q >= 1) {
        const auto& v = dc.dv[p][q];
        const std::size_t r0 = t.offset[n - 1][p];
        for (std::size_t i = 0; i < v.rows(); ++i)
          for (std::size_t j = 0; j < v.cols(); ++j) {
            auto x = p % 2 ? D.sub(0, v(i, j)) : v(i, j);
            D(r0 + i, c0 + j) = D.add(D(r0 + i, c0 + j), x);
          }
      }
    }
    t.d.push_back(std::move(D));
  }
  return t;
}

/// A subquotient num/den of Tot_n, with representatives of a basis.
struct Subquotient {
  FpMatrix reps;  // columns in Tot_n
  FpMatrix den;   // basis of the denominator
  FpMatrix span;  // [reps | den]

  std::size_t dim() const { return reps.cols(); }

  /// Coordinates of the columns of v (which must lie in num) in the basis.
  FpMatrix coordinates(const FpMatrix& v) const {
    auto x = fp_solve_matrix(span, v);
    if (!x) throw std::logic_error("Subquotient: vector outside the numerator");
    return submatrix(*x, 0, 0, dim(), v.cols());
  }

  bool contains(const FpMatrix& v) const { return fp_solve_matrix(span, v).has_value(); }
};

inline Subquotient subquotient(const FpMatrix& num, const FpMatrix& den) {
  Subquotient s;
  s.den = fp_column_basis(den);
  Rref r = rref(hconcat(s.den, num));
  std::vector<FpVector> cols;
  for (auto c : r.pivots)
    if (c >= s.den.cols()) cols.push_back(num.column(c - s.den.cols()));
  s.reps = columns_to_matrix(num.prime(), num.rows(), cols);
  s.span = hconcat(s.reps, s.den);
  return s;
}

struct Page {
  std::size_t r = 0;
  std::vector<std::vector<Subquotient>> cells;  // cells[p][q]
  std::vector<std::vector<FpMatrix>> d;         // d[p][q]: E_{p,q} -> E_{p-r,q+r-1}

  std::size_t dim(long p, long q) const {
    if (p < 0 || q < 0 || std::size_t(p) >= cells.size() || std::size_t(q) >= cells[p].size()) return 0;
    return cells[p][q].dim();
  }
  std::vector<std::vector<std::size_t>> dims() const {
    std::vector<std::vector<std::size_t>> out;
    for (const auto& col : cells) {
      out.emplace_back();
      for (const auto& c : col) out.back().push_back(c.dim());
    }
    return out;
  }
};

struct SSResult {
  std::size_t columns = 0, rows = 0;
  std::size_t limit = 0;  // total degrees 0..limit are trustworthy
  TotalComplex tot;
  std::vector<Page> pages;  // r = 1, 2, ..., r_stop
  Page infinity;
  std::vector<Subquotient> homology;  // H_n(Tot)
  std::vector<std::size_t> abutment;
  std::optional<std::size_t> degenerates_at;
  bool pages_coherent = false;   // E^{r+1} = H(E^r, d^r) dimensionwise
  bool converges = false;        // sum of E^inf along p+q = n is dim H_n
  bool euler_consistent = false;

  const Page& page(std::size_t r) const {
    if (r == 0 || r > pages.size()) throw std::out_of_range("SSResult: page " + std::to_string(r) + " not computed");
    return pages[r - 1];
  }
  bool in_range(long p, long q) const {
    return p >= 0 && q >= 0 && std::size_t(p) < columns && std::size_t(q) < rows && std::size_t(p + q) <= limit;
  }
};

namespace detail {

inline Subquotient page_cell(const TotalComplex& t, long p, long q, long r) {
  const long n = p + q;
  auto fil = t.filtration(n, p - 1);
  auto num = hconcat(t.almost_cycles(n, p, r), fil);
  auto den = hconcat(t.diff(n + 1) * t.almost_cycles(n + 1, p + r - 1, r - 1), fil);
  return subquotient(num, den);
}

inline Page make_page(const TotalComplex& t, std::size_t P, std::size_t Q, std::size_t r) {
  Page pg;
  pg.r = r;
  pg.cells.assign(P, std::vector<Subquotient>(Q));
  pg.d.assign(P, std::vector<FpMatrix>(Q));
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = 0; q < Q; ++q) pg.cells[p][q] = page_cell(t, p, q, r);
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = 0; q < Q; ++q) {
      const auto& src = pg.cells[p][q];
      const long tp = long(p) - long(r), tq = long(q) + long(r) - 1;
      if (tp < 0 || std::size_t(tq) >= Q) {
        pg.d[p][q] = FpMatrix(t.prime, 0, src.dim());
        continue;
      }
      pg.d[p][q] = pg.cells[tp][tq].coordinates(t.diff(p + q) * src.reps);
    }
  return pg;
}

inline bool same_dims_in_range(const SSResult& s, const Page& a, const Page& b) {
  for (std::size_t p = 0; p < s.columns; ++p)
    for (std::size_t q = 0; q < s.rows; ++q)
      if (s.in_range(p, q) && a.dim(p, q) != b.dim(p, q)) return false;
  return true;
}

inline long euler(const Page& pg) {
  long x = 0;
  for (std::size_t p = 0; p < pg.cells.size(); ++p)
    for (std::size_t q = 0; q < pg.cells[p].size(); ++q) x += ((p + q) % 2 ? -1 : 1) * long(pg.dim(p, q));
  return x;
}

}  // namespace detail

/// Pages E^1..E^{r_stop} and E^inf of the column filtration of Tot, all
/// computed directly as subquotients of Tot.
inline SSResult ss_pages(const DoubleComplex& dc, std::size_t r_stop, std::optional<std::size_t> limit = {}) {
  if (auto why = double_complex_violation(dc)) throw std::invalid_argument("ss_pages: " + *why);
  SSResult s;
  s.columns = dc.columns();
  s.rows = dc.rows();
  s.tot = total_complex(dc);
  s.limit = limit.value_or(s.tot.top());
  const std::size_t P = s.columns, Q = s.rows;
  r_stop = std::max<std::size_t>(r_stop, 2);
  for (std::size_t r = 1; r <= r_stop; ++r) s.pages.push_back(detail::make_page(s.tot, P, Q, r));
  s.infinity = detail::make_page(s.tot, P, Q, std::max(P, Q) + 1);

  for (std::size_t n = 0; n < s.tot.dim.size(); ++n) {
    auto z = fp_kernel_matrix(s.tot.diff(n));
    s.homology.push_back(subquotient(z, s.tot.diff(n + 1)));
    s.abutment.push_back(s.homology.back().dim());
  }

  s.pages_coherent = true;
  for (std::size_t k = 0; k + 1 < s.pages.size(); ++k) {
    const auto& pg = s.pages[k];
    const long r = long(pg.r);
    for (std::size_t p = 0; p < P; ++p)
      for (std::size_t q = 0; q < Q; ++q) {
        const std::size_t out_rank = fp_rank(pg.d[p][q]);
        const long sp = long(p) + r, sq = long(q) - r + 1;
        std::size_t in_rank = 0;
        if (std::size_t(sp) < P && sq >= 0) in_rank = fp_rank(pg.d[sp][sq]);
        if (pg.dim(p, q) - out_rank - in_rank != s.pages[k + 1].dim(p, q)) s.pages_coherent = false;
      }
  }

  s.converges = true;
  for (std::size_t n = 0; n <= s.limit && n < s.abutment.size(); ++n) {
    std::size_t sum = 0;
    for (std::size_t p = 0; p <= n; ++p) sum += s.infinity.dim(p, long(n) - long(p));
    if (sum != s.abutment[n]) s.converges = false;
  }

  long hx = 0;
  for (std::size_t n = 0; n < s.abutment.size(); ++n) hx += (n % 2 ? -1 : 1) * long(s.abutment[n]);
  s.euler_consistent = detail::euler(s.infinity) == hx;
  for (const auto& pg : s.pages)
    if (detail::euler(pg) != hx) s.euler_consistent = false;

  for (const auto& pg : s.pages)
    if (pg.r >= 2 && detail::same_dims_in_range(s, pg, s.infinity)) {
      s.degenerates_at = pg.r;
      break;
    }
  return s;
}

/// Map on page r at (p,q) induced by a filtration-preserving chain map phi
/// (phi[n]: Tot_n(a) -> Tot_n(b)). r = 0 selects E^inf.
inline FpMatrix page_map(const SSResult& a, const SSResult& b, const std::vector<FpMatrix>& phi, std::size_t r,
                         std::size_t p, std::size_t q) {
  const Page& pa = r ? a.page(r) : a.infinity;
  const Page& pb = r ? b.page(r) : b.infinity;
  return pb.cells[p][q].coordinates(phi.at(p + q) * pa.cells[p][q].reps);
}

inline FpMatrix abutment_map(const SSResult& a, const SSResult& b, const std::vector<FpMatrix>& phi, std::size_t n) {
  return b.homology[n].coordinates(phi.at(n) * a.homology[n].reps);
}

/// phi carries the cycles of F_k Tot_n into F_k H_n for every k.
inline bool preserves_filtration(const SSResult& a, const SSResult& b, const std::vector<FpMatrix>& phi, std::size_t n) {
  for (std::size_t k = 0; k < a.columns; ++k) {
    auto za = a.tot.almost_cycles(n, k, long(k) + 1);
    auto zb = b.tot.almost_cycles(n, k, long(k) + 1);
    auto target = subquotient(hconcat(zb, b.tot.diff(n + 1)), FpMatrix(b.tot.prime, b.tot.size(n), 0));
    if (!target.contains(phi.at(n) * za)) return false;
  }
  return true;
}

/// Cartan-Eilenberg resolution of a complex K in degrees 0..rows-1, each
/// column resolved to depth cols-1. Row q is the horseshoe of
/// 0 -> Z_q -> K_q -> B_{q-1} -> 0 over the horseshoe of 0 -> B_q -> Z_q -> H_q -> 0.
struct CartanEilenberg {
  struct Row {
    ImageResult<ModuleObj, ModMor> bound;  // B_q in K_q, with K_{q+1} -> B_q
    KernelResult cycles;                   // Z_q in K_q
    ModMor b_in_z;
    CokernelResult hom;                    // Z_q -> H_q
    SESOf<ModuleCategory> s1, s2;
    ResolutionOf<ModuleCategory> rb, rh;
    Horseshoe<ModuleCategory> hz, hk;
  };
  ComplexOf<ModuleCategory> K;
  std::vector<Row> rows;
  ResolutionOf<ModuleCategory> zero_res;  // for B_{-1} = 0
  std::size_t depth = 0;

  const ModuleObj& object(std::size_t p, std::size_t q) const { return rows[q].hk.middle.complex.objects[p]; }
  const ModMor& dh(std::size_t p, std::size_t q) const { return rows[q].hk.middle.complex.diff(p); }
  ModMor dv(const ModuleCategory& c, std::size_t p, std::size_t q) const {
    return c.compose(rows[q - 1].hk.in[p], c.compose(rows[q - 1].hz.in[p], rows[q].hk.pr[p]));
  }
};

inline CartanEilenberg cartan_eilenberg(const ModuleCategory& c, const ComplexOf<ModuleCategory>& K, std::size_t nrows,
                                        std::size_t depth) {
  if (K.top() < nrows) throw std::invalid_argument("cartan_eilenberg: complex too short");
  CartanEilenberg ce;
  ce.K = K;
  ce.depth = depth;
  ce.zero_res = resolve(c, c.zero_object(), depth);
  for (std::size_t q = 0; q < nrows; ++q) {
    CartanEilenberg::Row row{image(c, K.diff(q + 1)),
                             c.kernel(q == 0 ? c.zero_morphism(K.objects[0], c.zero_object()) : K.diff(q)),
                             {}, {}, {}, {}, {}, {}, {}, {}};
    auto bz = c.factor_through_mono(row.cycles.mono, row.bound.mono);
    if (!bz) throw std::invalid_argument("cartan_eilenberg: d o d != 0 at degree " + std::to_string(q));
    row.b_in_z = *bz;
    row.hom = c.cokernel(row.b_in_z);
    row.s1 = make_ses(c, row.b_in_z, row.hom.epi);
    row.s2 = q == 0 ? make_ses(c, row.cycles.mono, c.zero_morphism(K.objects[0], c.zero_object()))
                    : make_ses(c, row.cycles.mono, ce.rows[q - 1].bound.epi);
    row.rb = resolve(c, row.bound.object, depth);
    row.rh = resolve(c, row.hom.object, depth);
    row.hz = horseshoe(c, row.s1, row.rb, row.rh);
    row.hk = horseshoe(c, row.s2, row.hz.middle, q == 0 ? ce.zero_res : ce.rows[q - 1].rb);
    ce.rows.push_back(std::move(row));
  }
  return ce;
}

/// The map of CE resolutions over a chain map f: K -> K' (f[q]: K_q -> K'_q).
/// Returns phi[p][q].
inline std::vector<std::vector<ModMor>> cartan_eilenberg_map(const ModuleCategory& c, const CartanEilenberg& a,
                                                             const CartanEilenberg& b, const std::vector<ModMor>& f) {
  const std::size_t nrows = std::min(a.rows.size(), b.rows.size());
  std::vector<std::vector<ModMor>> out(std::min(a.depth, b.depth) + 1, std::vector<ModMor>(nrows));
  auto need = [](std::optional<ModMor> m, const char* what) {
    if (!m) throw std::logic_error(std::string("cartan_eilenberg_map: ") + what);
    return *m;
  };
  std::vector<ModMor> fb(nrows);
  std::vector<std::vector<ModMor>> phib(nrows);
  auto zero_b = c.zero_morphism(c.zero_object(), c.zero_object());
  auto phi_zero = lift_chain_map(c, a.zero_res, b.zero_res, zero_b);
  for (std::size_t q = 0; q < nrows; ++q) {
    const auto& ra = a.rows[q];
    const auto& rb = b.rows[q];
    fb[q] = need(c.factor_through_mono(rb.bound.mono, c.compose(f.at(q), ra.bound.mono)), "boundaries");
    auto fz = need(c.factor_through_mono(rb.cycles.mono, c.compose(f.at(q), ra.cycles.mono)), "cycles");
    auto fh = need(c.factor_through_epi(ra.hom.epi, c.compose(rb.hom.epi, fz)), "homology");
    phib[q] = lift_chain_map(c, ra.rb, rb.rb, fb[q]);
    auto phih = lift_chain_map(c, ra.rh, rb.rh, fh);
    auto phiz = horseshoe_lift(c, ra.hz, rb.hz, ra.s1, SESMorphism<ModMor>{fb[q], fz, fh}, phib[q], phih);
    SESMorphism<ModMor> m2{fz, f.at(q), q == 0 ? zero_b : fb[q - 1]};
    auto phik = horseshoe_lift(c, ra.hk, rb.hk, ra.s2, m2, phiz, q == 0 ? phi_zero : phib[q - 1]);
    for (std::size_t p = 0; p < out.size(); ++p) out[p][q] = phik.at(p);
  }
  return out;
}

/// G applied to a CE resolution, as a double complex of F_p spaces.
inline DoubleComplex apply_to_grid(const FunctorSpec& G, const ModuleCategory& c, const CartanEilenberg& ce) {
  const std::size_t P = ce.depth + 1, Q = ce.rows.size();
  DoubleComplex dc;
  dc.prime = G.target_ring().prime();
  dc.dims.assign(P, std::vector<std::size_t>(Q));
  dc.dh.assign(P, std::vector<FpMatrix>(Q));
  dc.dv.assign(P, std::vector<FpMatrix>(Q));
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = 0; q < Q; ++q) dc.dims[p][q] = G(ce.object(p, q)).fp_dim();
  for (std::size_t p = 0; p < P; ++p)
    for (std::size_t q = 0; q < Q; ++q) {
      dc.dh[p][q] = p ? G(ce.dh(p, q)).fp_matrix() : FpMatrix(dc.prime, 0, dc.dims[p][q]);
      dc.dv[p][q] = q ? G(ce.dv(c, p, q)).fp_matrix() : FpMatrix(dc.prime, 0, dc.dims[p][q]);
    }
  return dc;
}

/// Total-degree blocks of G(phi) for a map of CE grids.
inline std::vector<FpMatrix> total_map(const FunctorSpec& G, const std::vector<std::vector<ModMor>>& phi,
                                       const TotalComplex& a, const TotalComplex& b) {
  std::vector<FpMatrix> out;
  for (std::size_t n = 0; n <= std::min(a.top(), b.top()); ++n) {
    FpMatrix m(a.prime, b.size(n), a.size(n));
    for (std::size_t p = 0; p < a.columns && p <= n; ++p) {
      const std::size_t q = n - p;
      if (p >= phi.size() || q >= phi[p].size()) continue;
      if (a.offset[n][p + 1] == a.offset[n][p] || b.offset[n][p + 1] == b.offset[n][p]) continue;
      auto g = G(phi[p][q]).fp_matrix();
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) m(b.offset[n][p] + i, a.offset[n][p] + j) = g(i, j);
    }
    out.push_back(std::move(m));
  }
  return out;
}

struct AcyclicityReport {
  struct Failure {
    std::size_t witness, degree, dim;
  };
  std::vector<Failure> failures;
  bool holds() const { return failures.empty(); }
};

/// L_n G(F(P)) = 0 for 0 < n <= n_max, for every witness P.
inline AcyclicityReport check_acyclic_hypothesis(const FunctorSpec& F, const FunctorSpec& G,
                                                 const std::vector<ModuleObj>& witnesses, std::size_t n_max) {
  ModuleCategory D(F.target_ring());
  AcyclicityReport r;
  for (std::size_t k = 0; k < witnesses.size(); ++k) {
    auto fp = F(witnesses[k]);
    for (std::size_t n = 1; n <= n_max; ++n) {
      auto dim = derived(D, G, fp, n).fp_dim();
      if (dim) r.failures.push_back({k, n, dim});
    }
  }
  return r;
}

/// Everything built on the way to the spectral sequence of one object.
struct GrothendieckData {
  ResolutionOf<ModuleCategory> P;  // of A
  ComplexOf<ModuleCategory> K;     // F(P)
  CartanEilenberg ce;
  DoubleComplex grid;  // G(CE)
  SSResult ss;
};

struct GrothendieckResult {
  GrothendieckData data;
  std::size_t n_max = 0;
  std::vector<std::vector<std::size_t>> e2, e2_expected;  // [p][q], p, q <= n_max
  std::vector<std::size_t> abutment, abutment_expected;   // n <= n_max
  AcyclicityReport hypothesis;
  bool e2_matches = false, abutment_matches = false;

  bool pass() const { return e2_matches && abutment_matches && data.ss.converges && data.ss.pages_coherent; }
};

namespace detail {

inline void require_field_based(const FunctorSpec& F, const FunctorSpec& G) {
  for (const Ring* r : {&F.source_ring(), &F.target_ring(), &G.source_ring(), &G.target_ring()})
    if (r->is_integers())
      throw std::invalid_argument("spectral sequence: rings must be F_p-algebras, integer coefficients are not supported");
  if (!(F.target_ring() == G.source_ring())) throw std::invalid_argument("spectral sequence: G does not follow F");
}

}  // namespace detail

/// The grid is (n_max+2) x (n_max+2): enough for E^2 at p, q <= n_max and
/// for every page in total degree <= n_max.
inline GrothendieckData grothendieck_data(const FunctorSpec& F, const FunctorSpec& G, const ModuleObj& a,
                                          std::size_t n_max) {
  detail::require_field_based(F, G);
  ModuleCategory C(F.source_ring()), D(F.target_ring());
  const std::size_t side = n_max + 2;
  GrothendieckData g;
  g.P = resolve(C, a, side);
  g.K = apply_functor<ModuleCategory>(F, g.P.complex);
  g.ce = cartan_eilenberg(D, g.K, side, side - 1);
  g.grid = apply_to_grid(G, D, g.ce);
  g.ss = ss_pages(g.grid, side, n_max);
  return g;
}

inline GrothendieckResult grothendieck_ss(const FunctorSpec& F, const FunctorSpec& G, const ModuleObj& a,
                                          std::size_t n_max) {
  GrothendieckResult r;
  r.n_max = n_max;
  r.data = grothendieck_data(F, G, a, n_max);
  ModuleCategory C(F.source_ring()), D(F.target_ring());
  r.hypothesis = check_acyclic_hypothesis(F, G, r.data.P.complex.objects, n_max);
  const auto& e2 = r.data.ss.page(2);
  r.e2.assign(n_max + 1, std::vector<std::size_t>(n_max + 1));
  r.e2_expected = r.e2;
  for (std::size_t q = 0; q <= n_max; ++q) {
    auto lq = derived(C, F, a, q);
    for (std::size_t p = 0; p <= n_max; ++p) {
      r.e2[p][q] = e2.dim(p, q);
      r.e2_expected[p][q] = derived(D, G, lq, p).fp_dim();
    }
  }
  auto GF = FunctorSpec::compose(G, F);
  for (std::size_t n = 0; n <= n_max; ++n) {
    r.abutment.push_back(r.data.ss.abutment[n]);
    r.abutment_expected.push_back(derived(C, GF, a, n).fp_dim());
  }
  r.e2_matches = r.e2 == r.e2_expected;
  r.abutment_matches = r.abutment == r.abutment_expected;
  return r;
}

/// L_n F(f) between independently chosen resolutions.
inline ModMor derived_map(const ModuleCategory& c, const FunctorSpec& F, const ModMor& f, std::size_t n) {
  ModuleCategory t(F.target_ring());
  auto ra = resolve(c, f.source(), n + 1), rb = resolve(c, f.target(), n + 1);
  auto ha = homology_at(t, apply_functor<ModuleCategory>(F, ra.complex), n);
  auto hb = homology_at(t, apply_functor<ModuleCategory>(F, rb.complex), n);
  auto phi = lift_chain_map(c, ra, rb, f);
  return induced_on_homology(t, ha, hb, F(phi[n]));
}

/// Maps induced by one morphism u: i -> j of the index category.
struct SSMorphism {
  std::size_t morphism = 0;
  std::vector<FpMatrix> total;                  // on Tot
  std::vector<std::vector<FpMatrix>> e2;        // [p][q], p, q <= n_max
  std::vector<FpMatrix> abutment;               // n <= n_max
};

struct NaturalityReport {
  std::vector<GrothendieckResult> components;
  std::vector<SSMorphism> maps;
  std::size_t squares_checked = 0;
  bool higher_pages_commute = true;  // recorded only
  std::vector<std::string> failures;
  bool pass() const {
    if (!failures.empty()) return false;
    for (const auto& c : components)
      if (!c.pass()) return false;
    return true;
  }
};

/// Spectral sequences of each A^i with the maps induced by the structure maps,
/// checked against d^2, the filtration on the abutment, composition in I, and
/// ranks of independently derived maps.
inline NaturalityReport ss_componentwise(const FunctorSpec& F, const FunctorSpec& G, const Diagram& A,
                                         const FinCat& I, std::size_t n_max) {
  detail::require_field_based(F, G);
  ModuleCategory C(F.source_ring()), D(F.target_ring());
  auto GF = FunctorSpec::compose(G, F);
  NaturalityReport rep;
  for (std::size_t i = 0; i < I.num_objects(); ++i) rep.components.push_back(grothendieck_ss(F, G, A.at(i), n_max));
  auto fail = [&](const std::string& s) { rep.failures.push_back(s); };

  for (std::size_t m = 0; m < I.num_morphisms(); ++m) {
    const auto s = I.arrow(m).source, t = I.arrow(m).target;
    const std::string lbl = I.arrow(m).label;
    const auto& ga = rep.components[s].data;
    const auto& gb = rep.components[t].data;
    auto lp = lift_chain_map(C, ga.P, gb.P, A.map(m));
    std::vector<ModMor> fk;
    for (const auto& x : lp) fk.push_back(F(x));
    auto phi = cartan_eilenberg_map(D, ga.ce, gb.ce, fk);

    SSMorphism sm;
    sm.morphism = m;
    sm.total = total_map(G, phi, ga.ss.tot, gb.ss.tot);
    for (std::size_t n = 1; n < sm.total.size(); ++n)
      if (!(gb.ss.tot.diff(n) * sm.total[n] == sm.total[n - 1] * ga.ss.tot.diff(n)))
        fail(lbl + ": not a chain map on Tot in degree " + std::to_string(n));

    sm.e2.assign(n_max + 1, std::vector<FpMatrix>(n_max + 1));
    for (std::size_t p = 0; p <= n_max; ++p)
      for (std::size_t q = 0; q <= n_max; ++q) sm.e2[p][q] = page_map(ga.ss, gb.ss, sm.total, 2, p, q);
    for (std::size_t n = 0; n <= n_max; ++n) {
      sm.abutment.push_back(abutment_map(ga.ss, gb.ss, sm.total, n));
      ++rep.squares_checked;
      if (!preserves_filtration(ga.ss, gb.ss, sm.total, n))
        fail(lbl + ": abutment map breaks the filtration in degree " + std::to_string(n));
    }

    // d^2 squares
    const auto& da = ga.ss.page(2).d;
    const auto& db = gb.ss.page(2).d;
    for (std::size_t p = 2; p <= n_max; ++p)
      for (std::size_t q = 0; p + q <= n_max; ++q) {
        ++rep.squares_checked;
        if (!(db[p][q] * sm.e2[p][q] == sm.e2[p - 2][q + 1] * da[p][q]))
          fail(lbl + ": d2 square fails at (" + std::to_string(p) + "," + std::to_string(q) + ")");
      }
    for (std::size_t r = 3; r <= ga.ss.pages.size(); ++r)
      for (std::size_t p = r; p <= n_max; ++p)
        for (std::size_t q = 0; p + q <= n_max; ++q) {
          auto lhs = gb.ss.page(r).d[p][q] * page_map(ga.ss, gb.ss, sm.total, r, p, q);
          auto rhs = page_map(ga.ss, gb.ss, sm.total, r, p - r, q + r - 1) * ga.ss.page(r).d[p][q];
          if (!(lhs == rhs)) rep.higher_pages_commute = false;
        }

    // independent maps: (L_p G)(L_q F)(A(u)) and L_n(GF)(A(u)), compared by rank
    for (std::size_t q = 0; q <= n_max; ++q) {
      auto lq = derived_map(C, F, A.map(m), q);
      for (std::size_t p = 0; p + q <= n_max; ++p) {
        ++rep.squares_checked;
        auto ind = derived_map(D, G, lq, p);
        if (fp_rank(ind.fp_matrix()) != fp_rank(sm.e2[p][q]))
          fail(lbl + ": E2 map rank differs from (L_pG)(L_qF) at (" + std::to_string(p) + "," + std::to_string(q) + ")");
      }
    }
    for (std::size_t n = 0; n <= n_max; ++n) {
      ++rep.squares_checked;
      if (fp_rank(derived_map(C, GF, A.map(m), n).fp_matrix()) != fp_rank(sm.abutment[n]))
        fail(lbl + ": abutment map rank differs from L_n(GF) in degree " + std::to_string(n));
    }
    rep.maps.push_back(std::move(sm));
  }

  // functoriality: identities act as identities, composites compose
  for (std::size_t i = 0; i < I.num_objects(); ++i) {
    const auto& sm = rep.maps[I.identity(i)];
    for (std::size_t p = 0; p <= n_max; ++p)
      for (std::size_t q = 0; q <= n_max; ++q) {
        ++rep.squares_checked;
        if (!(sm.e2[p][q] == FpMatrix::identity(sm.e2[p][q].prime(), sm.e2[p][q].cols())))
          fail("identity of " + I.objects()[i] + " is not the identity on E2");
      }
  }
  for (std::size_t u = 0; u < I.num_morphisms(); ++u)
    for (std::size_t v = 0; v < I.num_morphisms(); ++v) {
      if (I.arrow(v).source != I.arrow(u).target || I.is_identity(u) || I.is_identity(v)) continue;
      const std::size_t w = I.compose(v, u);
      const std::string lbl = I.arrow(v).label + " o " + I.arrow(u).label;
      for (std::size_t p = 0; p <= n_max; ++p)
        for (std::size_t q = 0; q <= n_max; ++q) {
          ++rep.squares_checked;
          if (!(rep.maps[w].e2[p][q] == rep.maps[v].e2[p][q] * rep.maps[u].e2[p][q]))
            fail(lbl + ": E2 maps do not compose at (" + std::to_string(p) + "," + std::to_string(q) + ")");
        }
      for (std::size_t n = 0; n <= n_max; ++n) {
        ++rep.squares_checked;
        if (!(rep.maps[w].abutment[n] == rep.maps[v].abutment[n] * rep.maps[u].abutment[n]))
          fail(lbl + ": abutment maps do not compose in degree " + std::to_string(n));
      }
    }
  return rep;
}

}  // namespace fch
