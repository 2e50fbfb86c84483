#pragma once

#include <span>
#include <vector>

namespace ampcs {

// eta(x; b) = sign(x) (|x| - b)_+, the proximal operator of b |.|
double soft_threshold(double x, double b);

// d/dx eta(x; b): 1 on |x| > b, else 0. The kink points |x| = b count as 0.
double soft_threshold_deriv(double x, double b);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

// Parameters of the density f(s) ~ exp(-beta |s| - beta/(2 width) (s-center)^2)
struct LaplaceGaussianFamily {
  double beta = 1.0;
  double center = 0.0;  // x
  double width = 1.0;   // b
};

// Closed-form mean/variance of the normalized family density, evaluated as a
// two-component mixture of truncated Gaussians with log-domain weights.
// Throws PrecisionLossError when beta * width > kFBetaPrecisionLimit, where
// the truncated-moment formulas run out of double precision.
inline constexpr double kFBetaPrecisionLimit = 1e12;
Moments f_beta_moments(const LaplaceGaussianFamily& fam);

struct Prior {
  enum class Kind { PointMassMixture, BernoulliGaussian };
  Kind kind = Kind::BernoulliGaussian;
  std::vector<double> weights;  // point-mass mixture
  std::vector<double> atoms;
  double eps = 0.1;  // bernoulli-gaussian
  double variance = 1.0;

  // Both factories validate: weights nonnegative summing to 1 within 1e-12,
  // eps in [0,1], variance > 0. Throw ConfigError otherwise.
  static Prior point_mass_mixture(std::vector<double> weights,
                                  std::vector<double> atoms);
  static Prior bernoulli_gaussian(double eps, double variance);
};

// Conditional mean and variance of S ~ prior given S + N(0, noise_var) = x.
Moments posterior_moments(const Prior& prior, double x, double noise_var);

struct Denoiser {
  enum class Kind { SoftThreshold, PosteriorMean };
  Kind kind = Kind::SoftThreshold;
  Prior prior;  // used by PosteriorMean

  static Denoiser soft() { return {}; }
  static Denoiser posterior(Prior p) {
    return {Kind::PosteriorMean, std::move(p)};
  }
};

struct DenoiserOutput {
  std::vector<double> values;
  double mean_deriv = 0.0;
};

// Coordinatewise denoiser plus the vector-averaged derivative in the first
// argument. For the posterior denoiser b is the noise variance and the
// derivative uses the exact identity F' = G / b, no finite differences.
DenoiserOutput apply_denoiser_vec(const Denoiser& den, std::span<const double> v,
                                  double b);

}  // namespace ampcs
