#pragma once

namespace ampcs {

// Scaled complementary error function exp(x^2) erfc(x).
// Direct product for x < 10, asymptotic tail series above, reflection for
// x < 0 (saturates to +inf where exp(x^2) overflows, which is the correct
// limit for every downstream use).
double erfcx(double x);

double std_normal_cdf(double t);

// log Phi(t), stable for t << 0 via erfcx.
double log_std_normal_cdf(double t);

}  // namespace ampcs
