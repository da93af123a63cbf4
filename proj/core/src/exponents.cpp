#include "homeo/exponents.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace homeo {

namespace {

Rational rational_pow(const Rational& base, int exp) {
  using boost::multiprecision::pow;
  if (exp >= 0)
    return Rational(pow(numerator(base), static_cast<unsigned>(exp)),
                    pow(denominator(base), static_cast<unsigned>(exp)));
  return Rational(pow(denominator(base), static_cast<unsigned>(-exp)),
                  pow(numerator(base), static_cast<unsigned>(-exp)));
}

void require_rd(int r, int d) {
  if (r < 2 || d < 1)
    throw DomainError("exponents need r >= 2 and d >= 1");
}

}  // namespace

Rational turan_exponent(int r, int d) {
  require_rd(r, d);
  return Rational(1, 10 * d) * rational_pow(Rational(1, r * d + 1), r - 2);
}

Rational epsilon_max(int r, int d) {
  require_rd(r, d);
  return Rational(1, 9 * d) * rational_pow(Rational(1, r * d + 1), r - 2);
}

Rational turan_exponent_lower_bound(int r, int d) {
  require_rd(r, d);
  return rational_pow(Rational(1, 5 * r * d), r - 1);
}

Rational lambda_exponent(int k) {
  if (k < 1) throw DomainError("lambda needs k >= 1");
  if (k == 1) return Rational(1);     // tight classical value
  if (k == 2) return Rational(1, 5);  // classical value, beats the reduction
  int factorial = 1;
  for (int i = 2; i <= k + 1; ++i) factorial *= i;
  return turan_exponent(k + 1, factorial);
}

std::vector<LambdaRow> lambda_table(int k_max) {
  std::vector<LambdaRow> rows;
  for (int k = 1; k <= k_max; ++k) {
    LambdaRow row;
    row.k = k;
    row.lambda = lambda_exponent(k);
    row.headline = rational_pow(Rational(1, k), 2 * k * k);
    row.prior_work = k <= 2;
    rows.push_back(std::move(row));
  }
  return rows;
}

ParamSchedule exponent_schedule(int r, int d, std::size_t n,
                                std::uint64_t m_edges) {
  require_rd(r, d);
  if (n < 2) throw DomainError("schedule needs n >= 2");
  if (m_edges < (1ULL << r))
    throw DomainError("schedule needs at least 2^r edges");

  ParamSchedule s;
  s.r = r;
  s.d = d;
  s.n = n;
  s.input_edges = m_edges;
  s.alpha = turan_exponent(r, d);
  s.epsilon = epsilon_max(r, d);
  s.solved_epsilon =
      r - std::log(static_cast<double>(m_edges) / std::pow(2.0, r)) /
              std::log(static_cast<double>(n));
  // the density hypothesis at epsilon: m >= 2^r * n^(r-eps), tested exactly
  s.below_threshold =
      compare_count_power(BigInt(m_edges), BigInt(1) << r, n,
                          Rational(r) - s.epsilon) < 0;

  s.delta.assign(r, Rational(0));
  s.beta.assign(std::max(r - 1, 1), Rational(0));
  s.delta[r - 1] = Rational(1, 2);
  for (int i = r - 2; i >= 1; --i) {
    s.beta[i] = s.delta[i + 1] / ((i + 1) * d + 1);
    s.delta[i] = s.beta[i] - 2 * s.epsilon;
  }

  for (int i = 1; i + 1 <= r - 1; ++i)
    if (s.delta[i] > s.delta[i + 1])
      throw std::logic_error("delta chain is not monotone");
  if (s.delta[1] <= Rational(d) * s.epsilon)
    throw std::logic_error("delta[1] does not dominate d*epsilon");
  for (int i = 1; i + 1 <= r - 2; ++i)
    if (s.beta[i] > s.beta[i + 1])
      throw std::logic_error("beta chain is not monotone");
  if (r >= 3 && (s.beta[1] <= 0 || s.beta[r - 2] > Rational(1, 2)))
    throw std::logic_error("beta chain leaves (0, 1/2]");
  return s;
}

namespace {

// Sign of log(count) - log(mult) - exp*log(n) if it can be certified at this
// precision, else 0 (undecided). The tolerance is outward-rounded: a zero
// answer never lies, it only defers.
template <typename Float>
int log_interval_sign(const BigInt& count, const BigInt& mult, std::size_t n,
                      const Rational& exp, int reliable_digits) {
  using std::log;
  Float lc = log(Float(count));
  Float lm = log(Float(mult));
  Float le = Float(exp) * log(Float(n));
  Float diff = lc - lm - le;
  Float tol = (fabs(lc) + fabs(lm) + fabs(le) + 1) *
              pow(Float(10), -reliable_digits);
  if (diff > tol) return 1;
  if (diff < -tol) return -1;
  return 0;
}

}  // namespace

int compare_count_power(const BigInt& count, const BigInt& multiplier,
                        std::size_t n, const Rational& exponent) {
  if (n < 2) throw DomainError("power comparison needs n >= 2");
  if (count < 0 || multiplier < 0)
    throw DomainError("power comparison needs nonnegative counts");
  if (multiplier == 0) return count == 0 ? 0 : 1;
  if (count == 0) return -1;

  // widening logarithm intervals decide every non-boundary case
  using boost::multiprecision::cpp_bin_float_100;
  using boost::multiprecision::cpp_bin_float_50;
  using Float400 = boost::multiprecision::number<
      boost::multiprecision::cpp_bin_float<400>>;
  if (int s = log_interval_sign<cpp_bin_float_50>(count, multiplier, n,
                                                  exponent, 40))
    return s;
  if (int s = log_interval_sign<cpp_bin_float_100>(count, multiplier, n,
                                                   exponent, 90))
    return s;
  if (int s = log_interval_sign<Float400>(count, multiplier, n, exponent, 380))
    return s;

  // boundary: settle by exact integer cross-powering,
  // count^q versus multiplier^q * n^p
  using boost::multiprecision::pow;
  BigInt p = numerator(exponent);
  BigInt q = denominator(exponent);  // q > 0 canonically
  if (q > 1000000)
    throw ResourceError("power comparison on the boundary of an exponent "
                        "with a huge denominator");
  unsigned uq = q.convert_to<unsigned>();
  BigInt lhs = pow(count, uq);
  BigInt rhs = pow(multiplier, uq);
  if (p >= 0) {
    rhs *= pow(BigInt(n), p.convert_to<unsigned>());
  } else {
    BigInt np = -p;
    lhs *= pow(BigInt(n), np.convert_to<unsigned>());
  }
  return lhs < rhs ? -1 : lhs == rhs ? 0 : 1;
}

bool edge_floor_met(std::uint64_t level_edges, int level_i, int r,
                    std::size_t n, std::uint64_t input_edges) {
  if (level_i < 1 || level_i > r) throw DomainError("level out of range");
  using boost::multiprecision::pow;
  return BigInt(level_edges) * pow(BigInt(2 * n),
                                   static_cast<unsigned>(r - level_i)) >=
         BigInt(input_edges);
}

std::string rational_decimal(const Rational& x, int digits) {
  boost::multiprecision::cpp_bin_float_50 v(x);
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace homeo
