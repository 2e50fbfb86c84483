#include "ampcs/special.hpp"

#include <cmath>

namespace ampcs {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kSqrt1_2 = 0.70710678118654752440;

// erfcx(x) ~ 1/(x sqrt(pi)) sum_k (-1)^k (2k-1)!! / (2x^2)^k, x >= 10.
// Truncated at the smallest term; below 1e-15 relative already at x = 10.
double erfcx_tail(double x) {
  const double r = 1.0 / (2.0 * x * x);
  double term = 1.0, sum = 1.0, prev = 2.0;
  for (int k = 1; k <= 16; ++k) {
    term *= -(2 * k - 1) * r;
    if (std::abs(term) >= prev) break;
    sum += term;
    prev = std::abs(term);
  }
  return sum / (x * kSqrtPi);
}

}  // namespace

double erfcx(double x) {
  if (x < 0.0) {
    // saturates to +inf once exp overflows (x <~ -26.6), the correct limit
    return 2.0 * std::exp(x * x) - erfcx(-x);
  }
  if (x < 10.0) return std::exp(x * x) * std::erfc(x);
  return erfcx_tail(x);
}

double std_normal_cdf(double t) { return 0.5 * std::erfc(-t * kSqrt1_2); }

double log_std_normal_cdf(double t) {
  if (t > -1.0) return std::log(std_normal_cdf(t));
  return std::log(0.5 * erfcx(-t * kSqrt1_2)) - 0.5 * t * t;
}

}  // namespace ampcs
