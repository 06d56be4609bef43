#include "fch/fp_linalg.hpp"
#include "fch/snf.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <functional>
#include <random>

using namespace fch;

namespace {

Int det(const IntMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  if (n == 1) return a(0, 0);
  Int s = 0;
  for (std::size_t j = 0; j < n; ++j) {
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = 0, c = 0; k < n; ++k)
        if (k != j) minor(i - 1, c++) = a(i, k);
    Int term = a(0, j) * det(minor);
    s += (j % 2 == 0) ? term : Int(-term);
  }
  return s;
}

// gcd of all k x k minors
Int determinantal_divisor(const IntMatrix& a, std::size_t k) {
  Int g = 0;
  std::vector<std::size_t> rows(k), cols(k);
  std::function<void(std::size_t, std::size_t, std::size_t, std::size_t)> pick;
  std::function<void(std::size_t, std::size_t)> pick_cols = [&](std::size_t start, std::size_t depth) {
    if (depth == k) {
      IntMatrix m(k, k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) m(i, j) = a(rows[i], cols[j]);
      Int d = det(m);
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
      return;
    }
    for (std::size_t c = start; c < a.cols(); ++c) {
      cols[depth] = c;
      pick_cols(c + 1, depth + 1);
    }
  };
  std::function<void(std::size_t, std::size_t)> pick_rows = [&](std::size_t start, std::size_t depth) {
    if (depth == k) {
      pick_cols(0, 0);
      return;
    }
    for (std::size_t r = start; r < a.rows(); ++r) {
      rows[depth] = r;
      pick_rows(r + 1, depth + 1);
    }
  };
  pick_rows(0, 0);
  return g;
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t maxdim, long bound) {
  std::uniform_int_distribution<std::size_t> dim(1, maxdim);
  std::uniform_int_distribution<long> val(-bound, bound);
  IntMatrix m(dim(rng), dim(rng));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = val(rng);
  return m;
}

void check_snf_contract(const IntMatrix& a, const SnfResult& s) {
  REQUIRE(s.U * a * s.V == s.D);
  REQUIRE(abs(det(s.U)) == 1);
  REQUIRE(abs(det(s.V)) == 1);
  REQUIRE(det(s.U) == s.det_u);
  REQUIRE(det(s.V) == s.det_v);
  REQUIRE(s.U * s.U_inv == IntMatrix::identity(a.rows()));
  REQUIRE(s.V * s.V_inv == IntMatrix::identity(a.cols()));
  for (std::size_t i = 0; i < s.D.rows(); ++i)
    for (std::size_t j = 0; j < s.D.cols(); ++j)
      if (i != j) REQUIRE(sgn(s.D(i, j)) == 0);
  for (std::size_t i = 0; i < s.rank; ++i) {
    REQUIRE(sgn(s.D(i, i)) > 0);
    if (i + 1 < s.rank) REQUIRE(mpz_divisible_p(s.D(i + 1, i + 1).get_mpz_t(), s.D(i, i).get_mpz_t()));
  }
  for (std::size_t i = s.rank; i < std::min(a.rows(), a.cols()); ++i) REQUIRE(sgn(s.D(i, i)) == 0);
}

}  // namespace

TEST_CASE("snf of identity and zero") {
  auto s = snf(IntMatrix::identity(3));
  CHECK(s.D == IntMatrix::identity(3));
  auto z = snf(IntMatrix(2, 2));
  CHECK(z.D == IntMatrix(2, 2));
  CHECK(z.U == IntMatrix::identity(2));
  CHECK(z.V == IntMatrix::identity(2));
  CHECK(z.rank == 0);
}

TEST_CASE("snf of diag(2,3) is diag(1,6)") {
  IntMatrix a = IntMatrix::from_rows({{2, 0}, {0, 3}});
  auto s = snf(a);
  check_snf_contract(a, s);
  CHECK(s.D == IntMatrix::from_rows({{1, 0}, {0, 6}}));
}

TEST_CASE("snf invariant factors match determinantal divisors") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    IntMatrix a = random_matrix(rng, 4, 6);
    auto s = snf(a);
    check_snf_contract(a, s);
    Int prev = 1;
    for (std::size_t k = 1; k <= std::min(a.rows(), a.cols()); ++k) {
      Int dk = determinantal_divisor(a, k);
      if (dk == 0) {
        CHECK(s.rank < k);
        break;
      }
      CHECK(s.D(k - 1, k - 1) == dk / prev);
      prev = dk;
    }
  }
}

TEST_CASE("snf contract on random matrices") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    IntMatrix a = random_matrix(rng, 6, 10);
    check_snf_contract(a, snf(a));
  }
}

TEST_CASE("solve_int examples") {
  auto x = solve_int(IntMatrix::from_rows({{2}}), {Int(4)});
  REQUIRE(x);
  CHECK((*x)[0] == 2);
  CHECK_FALSE(solve_int(IntMatrix::from_rows({{2}}), {Int(3)}));

  IntMatrix a = IntMatrix::from_rows({{1, 2}, {3, 4}});
  // exhaustive search in a small box finds a solution, so one must exist
  bool exists = false;
  for (long u = -5; u <= 5; ++u)
    for (long v = -5; v <= 5; ++v)
      if (u + 2 * v == 1 && 3 * u + 4 * v == 1) exists = true;
  REQUIRE(exists);
  auto y = solve_int(a, {Int(1), Int(1)});
  REQUIRE(y);
  CHECK(a * *y == IntVector{Int(1), Int(1)});
  CHECK_THROWS_AS(solve_int(a, {Int(1)}), std::invalid_argument);
}

TEST_CASE("solve_int recovers A x for random A, x") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<long> val(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    IntMatrix a = random_matrix(rng, 5, 8);
    IntVector x(a.cols());
    for (auto& v : x) v = val(rng);
    IntVector b = a * x;
    auto y = solve_int(a, b);
    REQUIRE(y);
    CHECK(a * *y == b);
  }
}

TEST_CASE("fp kernel basis examples") {
  CHECK(fp_kernel_basis(FpMatrix::identity(2, 3)).empty());
  CHECK(fp_kernel_basis(FpMatrix(2, 1, 3)).size() == 3);
  FpMatrix a = FpMatrix::from_rows(2, {{1, 1}, {1, 1}});
  auto k = fp_kernel_basis(a);
  // enumerate all four vectors of F_2^2
  std::vector<FpVector> annihilated;
  for (unsigned u = 0; u < 2; ++u)
    for (unsigned v = 0; v < 2; ++v)
      if ((u + v) % 2 == 0 && (u || v)) annihilated.push_back({u, v});
  REQUIRE(annihilated.size() == 1);
  REQUIRE(k.size() == 1);
  CHECK(k[0] == annihilated[0]);
}

TEST_CASE("fp kernel basis is independent and annihilated") {
  std::mt19937_64 rng(5);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    std::uniform_int_distribution<std::uint32_t> val(0, p - 1);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    for (int trial = 0; trial < 100; ++trial) {
      FpMatrix a(p, dim(rng), dim(rng));
      for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = val(rng);
      auto basis = fp_kernel_basis(a);
      CHECK(basis.size() == a.cols() - fp_rank(a));
      for (const auto& v : basis) {
        auto img = a * v;
        CHECK(std::all_of(img.begin(), img.end(), [](auto x) { return x == 0; }));
      }
      if (!basis.empty()) CHECK(fp_rank(columns_to_matrix(p, a.cols(), basis)) == basis.size());
    }
  }
}

TEST_CASE("fp quotient has the right kernel and section") {
  FpMatrix w = FpMatrix::from_rows(3, {{1, 0}, {2, 0}, {0, 1}});
  auto quo = fp_quotient(w);
  CHECK(quo.q.rows() == 1);
  CHECK((quo.q * w).is_zero());
  CHECK(quo.q * quo.s == FpMatrix::identity(3, 1));
}
