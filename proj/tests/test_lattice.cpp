#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "kahler/error.hpp"
#include "kahler/lattice.hpp"
#include "oracle.hpp"

using namespace kahler;

TEST_CASE("shell counts agree with the cube scan") {
  for (int m = 1; m <= 3; ++m) {
    const long lmax = m == 3 ? 6 : 12;
    const auto counts = shell_counts(m, lmax, Execution::serial);
    for (long l = 0; l <= lmax; ++l) {
      INFO("m = " << m << ", lambda = " << l);
      CHECK(counts[static_cast<std::size_t>(l)] == oracle::shell_count(2 * m, l));
    }
  }
}

TEST_CASE("known representation numbers") {
  const auto r2 = shell_counts(1, 5, Execution::serial);
  CHECK(r2[1] == 4);
  CHECK(r2[2] == 4);
  CHECK(r2[3] == 0);
  CHECK(r2[5] == 8);
  const auto r4 = shell_counts(2, 2, Execution::serial);
  CHECK(r4[1] == 8);
  CHECK(r4[2] == 24);
}

TEST_CASE("serial and parallel enumeration agree") {
  for (int m = 1; m <= 3; ++m) {
    const long lmax = m == 1 ? 200 : (m == 2 ? 40 : 12);
    CHECK(shell_counts(m, lmax, Execution::serial) == shell_counts(m, lmax, Execution::parallel));
    CHECK(enumerate_shells(m, lmax, Execution::serial) == enumerate_shells(m, lmax, Execution::parallel));
  }
}

TEST_CASE("shells are lexicographic and consistent with the counts") {
  const auto shells = enumerate_shells(2, 20);
  const auto counts = shell_counts(2, 20);
  for (std::size_t l = 0; l < shells.size(); ++l) {
    CHECK(static_cast<long>(shells[l].size()) == counts[l]);
    CHECK(std::is_sorted(shells[l].begin(), shells[l].end()));
    for (const auto& p : shells[l]) CHECK(p.norm2() == static_cast<long>(l));
  }
  REQUIRE(shells[1].size() == 4 * 2);
  CHECK(shells[1].front().xi == std::vector<int>{-1, 0, 0, 0});
}

TEST_CASE("ball count excludes the origin") {
  CHECK(count_ball(1, 0) == 0);
  CHECK(count_ball(1, 1) == 4);
  CHECK(count_ball(1, 2) == 8);
  CHECK(count_ball(1, 100) == 316);
}

TEST_CASE("guards and argument checks") {
  CHECK_THROWS_AS(shell_counts(0, 10), DomainError);
  CHECK_THROWS_AS(shell_counts(1, -1), DomainError);
  CHECK_THROWS_AS(enumerate_shells(3, 10000), ResourceError);
  CHECK_THROWS_AS(shell_counts(4, 1000000), ResourceError);
  CHECK(ball_volume(1, 1.0) == doctest::Approx(3.141592653589793));
  CHECK(ball_volume(2, 2.0) == doctest::Approx(2.0 * 3.141592653589793 * 3.141592653589793));
}
