#include "ampcs/denoisers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ampcs/errors.hpp"
#include "ampcs/special.hpp"

namespace ampcs {

double soft_threshold(double x, double b) {
  const double m = std::abs(x) - b;
  return m > 0 ? (x > 0 ? m : -m) : 0.0;
}

double soft_threshold_deriv(double x, double b) {
  return std::abs(x) > b ? 1.0 : 0.0;
}

namespace {

constexpr double kSqrt2OverPi = 0.79788456080286535588;
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kSqrt1_2 = 0.70710678118654752440;

// Normal(mu, v) truncated to (0, inf), parameterized by alpha = -mu / sigma:
//   mean     = sigma * r           (r = hazard(alpha) - alpha)
//   variance = v * vratio          (vratio = 1 - hazard * r)
//   log mass = log P(N(mu, v) > 0) = log Phi(-alpha)
struct TruncatedPiece {
  double r;
  double vratio;
  double log_mass;
};

TruncatedPiece truncated_gaussian_piece(double alpha) {
  if (alpha >= 15.0) {
    // Deep truncation. hazard - alpha and 1 - hazard*r both cancel badly in
    // the direct formulas, so use the Mills-ratio asymptotics
    //   S = alpha * mills(alpha) = 1 - 1/a^2 + 3/a^4 - 15/a^6 + ...
    //   T = 1 - S               =     1/a^2 - 3/a^4 + 15/a^6 - ...
    // truncated at the smallest term.
    const double a2 = alpha * alpha;
    double s = 1.0, t = 0.0, term = 1.0, prev = std::numeric_limits<double>::max();
    double sign = -1.0;
    for (int k = 1; k <= 18; ++k) {
      term *= (2 * k - 1) / a2;
      if (term >= prev) break;
      s += sign * term;
      t -= sign * term;
      prev = term;
      sign = -sign;
    }
    TruncatedPiece out;
    out.r = alpha * t / s;
    out.vratio = (s * s - a2 * t) / (s * s);
    out.log_mass = -0.5 * a2 - 0.5 * kLog2Pi + std::log(s) - std::log(alpha);
    return out;
  }
  const double e = erfcx(alpha * kSqrt1_2);
  const double hazard = kSqrt2OverPi / e;  // phi(alpha) / Phi(-alpha); e=inf -> 0
  TruncatedPiece out;
  out.r = hazard - alpha;
  out.vratio = 1.0 - hazard * out.r;
  out.log_mass = log_std_normal_cdf(-alpha);
  return out;
}

}  // namespace

Moments f_beta_moments(const LaplaceGaussianFamily& fam) {
  const double beta = fam.beta, x = fam.center, b = fam.width;
  if (!(beta > 0) || !(b > 0))
    throw std::invalid_argument("f_beta_moments: beta and width must be > 0");
  if (beta * b > kFBetaPrecisionLimit)
    throw PrecisionLossError("f_beta_moments: beta*width exceeds 1e12, "
                             "truncated-moment formulas lose all precision");

  // The density splits at the kink into two Gaussian pieces with common
  // variance v = b/beta: N(x-b, v) on s > 0 and N(x+b, v) on s < 0.
  const double v = b / beta;
  const double sig = std::sqrt(v);
  const TruncatedPiece pos = truncated_gaussian_piece((b - x) / sig);
  const TruncatedPiece neg = truncated_gaussian_piece((x + b) / sig);
  const double mean_pos = sig * pos.r;
  const double mean_neg = -sig * neg.r;

  // completed-square offsets; only the difference of the log weights matters
  const double log_w_pos = beta * (0.5 * b - x) + pos.log_mass;
  const double log_w_neg = beta * (0.5 * b + x) + neg.log_mass;
  const double m = std::max(log_w_pos, log_w_neg);
  const double w_pos = std::exp(log_w_pos - m);
  const double w_neg = std::exp(log_w_neg - m);
  const double p_pos = w_pos / (w_pos + w_neg);
  const double p_neg = w_neg / (w_pos + w_neg);

  Moments out;
  out.mean = p_pos * mean_pos + p_neg * mean_neg;
  const double gap = mean_pos - mean_neg;
  out.variance = p_pos * (v * pos.vratio) + p_neg * (v * neg.vratio) +
                 p_pos * p_neg * gap * gap;
  return out;
}

Prior Prior::point_mass_mixture(std::vector<double> weights,
                                std::vector<double> atoms) {
  if (weights.empty() || weights.size() != atoms.size())
    throw ConfigError("point_mass_mixture: need matching nonempty weights/atoms");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0) throw ConfigError("point_mass_mixture: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ConfigError("point_mass_mixture: weights must sum to 1 within 1e-12");
  Prior p;
  p.kind = Kind::PointMassMixture;
  p.weights = std::move(weights);
  p.atoms = std::move(atoms);
  return p;
}

Prior Prior::bernoulli_gaussian(double eps, double variance) {
  if (eps < 0 || eps > 1)
    throw ConfigError("bernoulli_gaussian: eps must be in [0, 1]");
  if (!(variance > 0))
    throw ConfigError("bernoulli_gaussian: variance must be > 0");
  Prior p;
  p.kind = Kind::BernoulliGaussian;
  p.eps = eps;
  p.variance = variance;
  return p;
}

Moments posterior_moments(const Prior& prior, double x, double noise_var) {
  if (!(noise_var > 0))
    throw std::invalid_argument("posterior_moments: noise_var must be > 0");

  if (prior.kind == Prior::Kind::PointMassMixture) {
    const std::size_t m = prior.atoms.size();
    // posterior weights ~ w_k exp(-(x - a_k)^2 / 2v), log-domain
    double lmax = -std::numeric_limits<double>::infinity();
    std::vector<double> lw(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double d = x - prior.atoms[k];
      lw[k] = prior.weights[k] > 0
                  ? std::log(prior.weights[k]) - d * d / (2 * noise_var)
                  : -std::numeric_limits<double>::infinity();
      lmax = std::max(lmax, lw[k]);
    }
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      lw[k] = std::exp(lw[k] - lmax);
      total += lw[k];
    }
    Moments out;
    for (std::size_t k = 0; k < m; ++k)
      out.mean += (lw[k] / total) * prior.atoms[k];
    for (std::size_t k = 0; k < m; ++k) {
      const double d = prior.atoms[k] - out.mean;
      out.variance += (lw[k] / total) * d * d;
    }
    return out;
  }

  const double eps = prior.eps, svar = prior.variance;
  const double slab_mean = x * svar / (svar + noise_var);
  const double slab_var = svar * noise_var / (svar + noise_var);
  if (eps <= 0) return {0.0, 0.0};
  if (eps >= 1) return {slab_mean, slab_var};
  // marginal likelihoods of the spike (N(0, v)) and slab (N(0, svar + v))
  const double l_spike = std::log1p(-eps) - x * x / (2 * noise_var) -
                         0.5 * std::log(noise_var);
  const double l_slab = std::log(eps) - x * x / (2 * (svar + noise_var)) -
                        0.5 * std::log(svar + noise_var);
  const double m = std::max(l_spike, l_slab);
  const double w_spike = std::exp(l_spike - m);
  const double w_slab = std::exp(l_slab - m);
  const double p_slab = w_slab / (w_spike + w_slab);
  Moments out;
  out.mean = p_slab * slab_mean;
  out.variance = p_slab * slab_var + p_slab * (1.0 - p_slab) * slab_mean * slab_mean;
  return out;
}

DenoiserOutput apply_denoiser_vec(const Denoiser& den,
                                  std::span<const double> v, double b) {
  if (v.empty())
    throw std::invalid_argument("apply_denoiser_vec: empty input");
  const int len = static_cast<int>(v.size());
  DenoiserOutput out;
  out.values.resize(v.size());

  if (den.kind == Denoiser::Kind::SoftThreshold) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < len; ++i) out.values[i] = soft_threshold(v[i], b);
    double acc = 0.0;  // serial: summation order must not depend on threads
    for (int i = 0; i < len; ++i) acc += soft_threshold_deriv(v[i], b);
    out.mean_deriv = acc / len;
    return out;
  }

  if (!(b > 0))
    throw std::invalid_argument("apply_denoiser_vec: posterior noise_var <= 0");
  std::vector<double> variances(v.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < len; ++i) {
    const Moments mo = posterior_moments(den.prior, v[i], b);
    out.values[i] = mo.mean;
    variances[i] = mo.variance;
  }
  double acc = 0.0;
  for (int i = 0; i < len; ++i) acc += variances[i];
  out.mean_deriv = (acc / len) / b;  // F' = G / v
  return out;
}

}  // namespace ampcs
