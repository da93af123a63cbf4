#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "homeo/util.hpp"

namespace homeo {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// alpha_{r,d} = (1/(10d)) * (1/(rd+1))^{r-2}: the Turán-type exponent
/// guaranteed for d-trace-bounded r-partite patterns. r >= 2, d >= 1.
Rational turan_exponent(int r, int d);

/// Largest admissible epsilon: (1/(9d)) * (1/(rd+1))^{r-2}.
Rational epsilon_max(int r, int d);

/// (5rd)^{1-r}, the headline lower bound that turan_exponent dominates.
Rational turan_exponent_lower_bound(int r, int d);

struct LambdaRow {
  int k = 0;
  Rational lambda;       // exponent for k-complex homeomorphs
  Rational headline;     // k^{-2k^2}
  bool prior_work = false;  // k = 1, 2 use sharper classical values
};

/// lambda_k: k = 1 gives 1 and k = 2 gives 1/5 (classical results, sharper
/// than the reduction); k >= 3 uses alpha(k+1, (k+1)!).
Rational lambda_exponent(int k);
std::vector<LambdaRow> lambda_table(int k_max);

/// The exponent schedule for one pipeline run. epsilon is always the largest
/// admissible value (the monotone chains then hold by construction and the
/// marking thresholds are the weakest valid ones); the input density only
/// determines whether the theorem's edge hypothesis e(G) >= 2^r * n^(r-eps)
/// is met at that epsilon. When it is not, below_threshold is set and the
/// pipeline runs best-effort.
///
/// Edge floors are never computed through epsilon: the level-i floor
/// e(G_i) >= 2^i * n^(i-eps_hat) with eps_hat solved from the input density
/// is equivalent to the exact integer test e(G_i) * (2n)^(r-i) >= e(G).
struct ParamSchedule {
  int r = 0;
  int d = 0;
  std::size_t n = 0;
  std::uint64_t input_edges = 0;
  Rational epsilon;              // = epsilon_max(r, d)
  double solved_epsilon = 0.0;   // from e(G) = 2^r * n^(r-eps), reporting only
  bool below_threshold = false;  // e(G) < 2^r * n^(r - epsilon) exactly
  Rational alpha;
  std::vector<Rational> delta;  // delta[i] for 1 <= i <= r-1; index 0 unused
  std::vector<Rational> beta;   // beta[i] for 1 <= i <= r-2; index 0 unused
};

/// Build and validate the schedule: delta[r-1] = 1/2, beta[i] =
/// delta[i+1]/((i+1)d+1), delta[i] = beta[i] - 2*epsilon, and the chains
/// 1/2 = delta[r-1] >= ... >= delta[1] > d*epsilon,
/// 1/2 >= beta[r-2] >= ... >= beta[1] > 0 are asserted on construction.
/// Requires r >= 2, d >= 1, n >= 2, m_edges >= 2^r.
ParamSchedule exponent_schedule(int r, int d, std::size_t n,
                                std::uint64_t m_edges);

/// Sign of count - multiplier * n^exponent, computed exactly (interval
/// arithmetic on logarithms first, integer cross-powering when the interval
/// straddles zero). count, multiplier >= 0; n >= 2.
int compare_count_power(const BigInt& count, const BigInt& multiplier,
                        std::size_t n, const Rational& exponent);

inline bool count_at_least_power(const BigInt& count, const BigInt& multiplier,
                                 std::size_t n, const Rational& exponent) {
  return compare_count_power(count, multiplier, n, exponent) >= 0;
}
inline bool count_at_most_power(const BigInt& count, const BigInt& multiplier,
                                std::size_t n, const Rational& exponent) {
  return compare_count_power(count, multiplier, n, exponent) <= 0;
}

/// Exact level-i edge floor relative to the input graph:
/// level_edges * (2n)^(r-i) >= input_edges.
bool edge_floor_met(std::uint64_t level_edges, int level_i, int r,
                    std::size_t n, std::uint64_t input_edges);

/// Decimal rendering of a rational to the given precision (for tables).
std::string rational_decimal(const Rational& x, int digits = 12);

}  // namespace homeo
