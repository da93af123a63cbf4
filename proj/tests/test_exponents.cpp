#include <doctest.h>

#include "homeo/exponents.hpp"

using namespace homeo;

TEST_CASE("turan exponent values") {
  CHECK(turan_exponent(2, 1) == Rational(1, 10));
  CHECK(turan_exponent(2, 4) == Rational(1, 40));
  CHECK(turan_exponent(3, 2) == Rational(1, 140));
  CHECK(turan_exponent(3, 6) == Rational(1, 1140));
  CHECK(turan_exponent(4, 2) == Rational(1, 1620));
  CHECK_THROWS_AS(turan_exponent(1, 3), DomainError);
  CHECK_THROWS_AS(turan_exponent(2, 0), DomainError);
}

TEST_CASE("epsilon_max is ten ninths of the exponent") {
  CHECK(epsilon_max(2, 1) == Rational(1, 9));
  CHECK(epsilon_max(3, 6) == Rational(1, 1026));
  for (int r = 2; r <= 5; ++r)
    for (int d = 1; d <= 6; ++d)
      CHECK(epsilon_max(r, d) == Rational(10, 9) * turan_exponent(r, d));
}

TEST_CASE("the exponent dominates the coarse lower bound") {
  CHECK(turan_exponent_lower_bound(2, 1) == Rational(1, 10));
  CHECK(turan_exponent_lower_bound(3, 2) == Rational(1, 900));
  for (int r = 2; r <= 6; ++r)
    for (int d = 1; d <= 8; ++d)
      CHECK(turan_exponent(r, d) >= turan_exponent_lower_bound(r, d));
}

TEST_CASE("homeomorph exponents") {
  CHECK(lambda_exponent(1) == Rational(1));
  CHECK(lambda_exponent(2) == Rational(1, 5));
  CHECK(lambda_exponent(3) == turan_exponent(4, 24));
  CHECK(lambda_exponent(3) == Rational(1, 2258160));
  CHECK_THROWS_AS(lambda_exponent(0), DomainError);

  auto rows = lambda_table(4);
  REQUIRE(rows.size() == 4);
  for (int k = 1; k <= 4; ++k) {
    const auto& row = rows[static_cast<std::size_t>(k - 1)];
    CHECK(row.k == k);
    CHECK(row.lambda == lambda_exponent(k));
    CHECK(row.prior_work == (k <= 2));
    CHECK(row.lambda >= row.headline);  // the table always beats k^(-2k^2)
  }
  CHECK(rows[1].headline == Rational(1, 256));       // 2^(-8)
  CHECK(rows[2].headline == Rational(1, 387420489));  // 3^(-18)
}

TEST_CASE("schedule for r=3, d=6, n=16") {
  auto s = exponent_schedule(3, 6, 16, 3973);
  CHECK(s.epsilon == Rational(1, 1026));
  CHECK(s.alpha == Rational(1, 1140));
  REQUIRE(s.delta.size() == 3);
  REQUIRE(s.beta.size() == 2);
  CHECK(s.delta[2] == Rational(1, 2));
  CHECK(s.beta[1] == Rational(1, 26));
  CHECK(s.delta[1] == Rational(487, 13338));
  CHECK(s.delta[1] > Rational(6) * s.epsilon);
  // 8 * 16^(3 - 1/1026) is about 32680, far above any 16^3-edge host
  CHECK(s.below_threshold);
}

TEST_CASE("schedule for r=2 has only the top delta") {
  auto s = exponent_schedule(2, 1, 16, 100);
  REQUIRE(s.delta.size() == 2);
  CHECK(s.delta[1] == Rational(1, 2));
  CHECK(s.epsilon == Rational(1, 9));
  CHECK_THROWS_AS(exponent_schedule(2, 1, 1, 100), DomainError);
  CHECK_THROWS_AS(exponent_schedule(2, 1, 16, 3), DomainError);  // < 2^r edges
}

TEST_CASE("the density hypothesis is tested exactly at the boundary") {
  // threshold for (r=2, d=1, n=512): 4 * 512^(2 - 1/9) = 4 * 2^17 = 524288
  CHECK_FALSE(exponent_schedule(2, 1, 512, 524288).below_threshold);
  CHECK(exponent_schedule(2, 1, 512, 524287).below_threshold);
}

TEST_CASE("solved epsilon reports the density the input actually has") {
  // m = 4 * 16^(3/2) = 256 solves to epsilon exactly 1/2
  auto s = exponent_schedule(2, 1, 16, 256);
  CHECK(s.solved_epsilon == doctest::Approx(0.5));
}

TEST_CASE("count versus power comparisons are exact") {
  CHECK(compare_count_power(8, 1, 2, Rational(3)) == 0);
  CHECK(compare_count_power(9, 1, 2, Rational(3)) > 0);
  CHECK(compare_count_power(7, 1, 2, Rational(3)) < 0);

  // fractional exponents on an exact boundary use integer cross-powering
  CHECK(compare_count_power(32, 1, 4, Rational(5, 2)) == 0);
  CHECK(compare_count_power(4, 1, 16, Rational(1, 2)) == 0);
  CHECK(compare_count_power(5, 1, 16, Rational(1, 2)) > 0);
  CHECK(compare_count_power(3, 1, 16, Rational(1, 2)) < 0);

  // multiplier and negative exponents: 8 * 16^(-3/4) = 1
  CHECK(compare_count_power(1, 8, 16, Rational(-3, 4)) == 0);
  CHECK(compare_count_power(12, 3, 2, Rational(2)) == 0);

  CHECK(compare_count_power(1024, 1, 2, Rational(10)) == 0);
  CHECK(compare_count_power(1023, 1, 2, Rational(10)) < 0);
  CHECK(compare_count_power(1025, 1, 2, Rational(10)) > 0);

  // zero handling
  CHECK(compare_count_power(0, 0, 2, Rational(5)) == 0);
  CHECK(compare_count_power(3, 0, 2, Rational(5)) > 0);
  CHECK(compare_count_power(0, 1, 2, Rational(5)) < 0);

  CHECK_THROWS_AS(compare_count_power(1, 1, 1, Rational(1)), DomainError);
  CHECK_THROWS_AS(compare_count_power(-1, 1, 2, Rational(1)), DomainError);

  CHECK(count_at_least_power(8, 1, 2, Rational(3)));
  CHECK(count_at_most_power(8, 1, 2, Rational(3)));
  CHECK_FALSE(count_at_least_power(7, 1, 2, Rational(3)));
  CHECK_FALSE(count_at_most_power(9, 1, 2, Rational(3)));
}

TEST_CASE("level edge floors are exact integer tests") {
  // level 1 of r=3, n=16: e1 * 1024 >= m
  CHECK(edge_floor_met(4, 1, 3, 16, 4096));
  CHECK_FALSE(edge_floor_met(3, 1, 3, 16, 4096));
  CHECK(edge_floor_met(4, 1, 3, 16, 3973));
  CHECK_FALSE(edge_floor_met(3, 1, 3, 16, 3973));
  // level r compares edge counts directly
  CHECK(edge_floor_met(5, 3, 3, 16, 5));
  CHECK_FALSE(edge_floor_met(4, 3, 3, 16, 5));
  CHECK(edge_floor_met(0, 1, 3, 16, 0));
  CHECK_FALSE(edge_floor_met(0, 1, 3, 16, 1));
  CHECK_THROWS_AS(edge_floor_met(1, 0, 3, 16, 1), DomainError);
  CHECK_THROWS_AS(edge_floor_met(1, 4, 3, 16, 1), DomainError);
}

TEST_CASE("decimal rendering of rationals") {
  CHECK(rational_decimal(Rational(1, 8), 3) == "0.125");
  CHECK(rational_decimal(Rational(3, 2), 6) == "1.5");
  CHECK(rational_decimal(Rational(1, 3), 4) == "0.3333");
}
