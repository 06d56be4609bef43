#include "fch/suites.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fch;

TEST_CASE("batteries pass on small seeded runs") {
  for (const auto& b : {snf_battery(50, 1), les_battery(12, 2), kernel_battery(6, 3), delta_battery(4, 4),
                        iso_battery(4, 5), ladder_battery(2, 6), balance_battery(4, 7), ss_battery(4, 8)}) {
    INFO(b.suite << " " << b.summary() << (b.failures.empty() ? "" : " " + b.failures.front()));
    CHECK(b.pass());
  }
}

TEST_CASE("batteries are reproducible from the seed") {
  auto a = les_battery(9, 11), b = les_battery(9, 11);
  CHECK(a.summary() == b.summary());
  CHECK(a.failures == b.failures);
  CHECK(run_suite("les", 3, 1).cases == 3);
  CHECK_THROWS_AS(run_suite("nope", 3, 1), std::invalid_argument);
}

TEST_CASE("fraction-free determinant") {
  CHECK(detail::bareiss_det(IntMatrix::from_rows({{2, 1}, {7, 4}})) == 1);
  CHECK(detail::bareiss_det(IntMatrix::from_rows({{0, 1, 0}, {1, 0, 0}, {0, 0, 5}})) == -5);
  CHECK(detail::bareiss_det(IntMatrix::from_rows({{1, 2}, {2, 4}})) == 0);
}
