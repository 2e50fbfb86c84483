#include "ampcs/sum_product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ampcs/amp.hpp"
#include "ampcs/denoisers.hpp"
#include "ampcs/errors.hpp"
#include "ampcs/linalg.hpp"

namespace ampcs {

namespace {

constexpr double kThresholdFloor = std::numeric_limits<double>::min();

void check_shapes(const EdgeMessages& msgs, const ProblemInstance& inst) {
  if (msgs.n != inst.matrix.rows || msgs.N != inst.matrix.cols)
    throw ConfigError("edge messages do not match instance dimensions");
}

// at = A^T stored variable-major (N x n), same layout as the message tables
EdgeMessages step_impl(const EdgeMessages& msgs, const ProblemInstance& inst,
                       const std::vector<double>& at) {
  const int n = msgs.n, N = msgs.N;
  const double tau = msgs.threshold;
  if (!(tau > kThresholdFloor))
    throw DegenerateThresholdError(
        "mp_step: threshold collapsed to the machine floor at iteration " +
        std::to_string(msgs.iter));
  const double* z = msgs.factor_to_var.data();
  const double* y = inst.measurements.data();

  EdgeMessages next;
  next.n = n;
  next.N = N;
  next.iter = msgs.iter + 1;
  next.var_to_factor.resize(msgs.var_to_factor.size());
  next.factor_to_var.resize(msgs.factor_to_var.size());
  double* xn = next.var_to_factor.data();

  // full sums S_i = sum_b A_bi z_{b->i}, then cavity by subtraction
  std::vector<double> full(N);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < N; ++i) {
    const double* ai = at.data() + static_cast<std::size_t>(i) * n;
    const double* zi = z + static_cast<std::size_t>(i) * n;
    double acc = 0.0;
    for (int a = 0; a < n; ++a) acc += ai[a] * zi[a];
    full[i] = acc;
    double* xi = xn + static_cast<std::size_t>(i) * n;
    for (int a = 0; a < n; ++a)
      xi[a] = soft_threshold(acc - ai[a] * zi[a], tau);
  }

  // threshold recursion over the full sums; N * delta = n
  double deriv_sum = 0.0;
  for (int i = 0; i < N; ++i) deriv_sum += soft_threshold_deriv(full[i], tau);
  next.threshold = tau / n * deriv_sum;

  // factor sums T_a = sum_j A_aj x_{j->a}; one output element per thread
  std::vector<double> t_sum(n);
#pragma omp parallel for schedule(static)
  for (int a = 0; a < n; ++a) {
    double acc = 0.0;
    for (int j = 0; j < N; ++j)
      acc += at[static_cast<std::size_t>(j) * n + a] *
             xn[static_cast<std::size_t>(j) * n + a];
    t_sum[a] = acc;
  }

  double* zn = next.factor_to_var.data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < N; ++i) {
    const double* ai = at.data() + static_cast<std::size_t>(i) * n;
    const double* xi = xn + static_cast<std::size_t>(i) * n;
    double* zi = zn + static_cast<std::size_t>(i) * n;
    for (int a = 0; a < n; ++a) zi[a] = y[a] - t_sum[a] + ai[a] * xi[a];
  }
  return next;
}

EdgeMessages finite_beta_step_impl(const EdgeMessages& msgs,
                                   const ProblemInstance& inst, double beta,
                                   const std::vector<double>& at) {
  const int n = msgs.n, N = msgs.N;
  const double tau = msgs.threshold;
  if (!(beta > 0)) throw ConfigError("mp_finite_beta_step: beta must be > 0");
  if (!(tau > kThresholdFloor))
    throw DegenerateThresholdError(
        "mp_finite_beta_step: threshold collapsed at iteration " +
        std::to_string(msgs.iter));
  if (beta * tau > kFBetaPrecisionLimit)
    throw PrecisionLossError("mp_finite_beta_step: beta * tau out of range");
  const double* z = msgs.factor_to_var.data();
  const double* y = inst.measurements.data();

  EdgeMessages next;
  next.n = n;
  next.N = N;
  next.iter = msgs.iter + 1;
  next.var_to_factor.resize(msgs.var_to_factor.size());
  next.factor_to_var.resize(msgs.factor_to_var.size());
  double* xn = next.var_to_factor.data();

  // per-variable partial sums of A_ai^2 * beta * G keep the reduction order
  // fixed regardless of the thread count
  std::vector<double> tau_partial(N);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < N; ++i) {
    const double* ai = at.data() + static_cast<std::size_t>(i) * n;
    const double* zi = z + static_cast<std::size_t>(i) * n;
    double full = 0.0;
    for (int a = 0; a < n; ++a) full += ai[a] * zi[a];
    double* xi = xn + static_cast<std::size_t>(i) * n;
    double acc = 0.0;
    for (int a = 0; a < n; ++a) {
      const Moments mo =
          f_beta_moments({beta, full - ai[a] * zi[a], tau});
      xi[a] = mo.mean;
      acc += ai[a] * ai[a] * beta * mo.variance;
    }
    tau_partial[i] = acc;
  }
  double tau_acc = 0.0;
  for (int i = 0; i < N; ++i) tau_acc += tau_partial[i];
  next.threshold = tau_acc / n;

  std::vector<double> t_sum(n);
#pragma omp parallel for schedule(static)
  for (int a = 0; a < n; ++a) {
    double acc = 0.0;
    for (int j = 0; j < N; ++j)
      acc += at[static_cast<std::size_t>(j) * n + a] *
             xn[static_cast<std::size_t>(j) * n + a];
    t_sum[a] = acc;
  }
  double* zn = next.factor_to_var.data();
#pragma omp parallel for schedule(static)
  for (int i = 0; i < N; ++i) {
    const double* ai = at.data() + static_cast<std::size_t>(i) * n;
    const double* xi = xn + static_cast<std::size_t>(i) * n;
    double* zi = zn + static_cast<std::size_t>(i) * n;
    for (int a = 0; a < n; ++a) zi[a] = y[a] - t_sum[a] + ai[a] * xi[a];
  }
  return next;
}

std::vector<double> estimate_impl(const EdgeMessages& msgs,
                                  const std::vector<double>& at) {
  const int n = msgs.n, N = msgs.N;
  const double* z = msgs.factor_to_var.data();
  std::vector<double> out(N);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < N; ++i) {
    const double* ai = at.data() + static_cast<std::size_t>(i) * n;
    const double* zi = z + static_cast<std::size_t>(i) * n;
    double acc = 0.0;
    for (int a = 0; a < n; ++a) acc += ai[a] * zi[a];
    out[i] = soft_threshold(acc, msgs.threshold);
  }
  return out;
}

}  // namespace

EdgeMessages mp_init(const ProblemInstance& inst, double tau0) {
  if (!(tau0 > 0)) throw ConfigError("mp_init: tau0 must be > 0");
  EdgeMessages msgs;
  msgs.n = inst.matrix.rows;
  msgs.N = inst.matrix.cols;
  msgs.threshold = tau0;
  msgs.var_to_factor.assign(
      static_cast<std::size_t>(msgs.n) * msgs.N, 0.0);
  msgs.factor_to_var.resize(static_cast<std::size_t>(msgs.n) * msgs.N);
  for (int i = 0; i < msgs.N; ++i)
    for (int a = 0; a < msgs.n; ++a)
      msgs.factor_to_var[static_cast<std::size_t>(i) * msgs.n + a] =
          inst.measurements[a];
  return msgs;
}

EdgeMessages mp_step(const EdgeMessages& msgs, const ProblemInstance& inst) {
  check_shapes(msgs, inst);
  const std::vector<double> at =
      transpose(msgs.n, msgs.N, inst.matrix.entries.data());
  return step_impl(msgs, inst, at);
}

EdgeMessages mp_step_naive(const EdgeMessages& msgs,
                           const ProblemInstance& inst) {
  check_shapes(msgs, inst);
  const int n = msgs.n, N = msgs.N;
  const double tau = msgs.threshold;
  if (!(tau > kThresholdFloor))
    throw DegenerateThresholdError("mp_step_naive: threshold collapsed");
  const auto& A = inst.matrix;

  EdgeMessages next;
  next.n = n;
  next.N = N;
  next.iter = msgs.iter + 1;
  next.var_to_factor.resize(msgs.var_to_factor.size());
  next.factor_to_var.resize(msgs.factor_to_var.size());

  for (int i = 0; i < N; ++i) {
    for (int a = 0; a < n; ++a) {
      double cavity = 0.0;
      for (int b = 0; b < n; ++b)
        if (b != a) cavity += A(b, i) * msgs.z(b, i);
      next.var_to_factor[static_cast<std::size_t>(i) * n + a] =
          soft_threshold(cavity, tau);
    }
  }

  double deriv_sum = 0.0;
  for (int i = 0; i < N; ++i) {
    double full = 0.0;
    for (int b = 0; b < n; ++b) full += A(b, i) * msgs.z(b, i);
    deriv_sum += soft_threshold_deriv(full, tau);
  }
  next.threshold = tau / n * deriv_sum;

  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < N; ++i) {
      double acc = 0.0;
      for (int j = 0; j < N; ++j)
        if (j != i) acc += A(a, j) * next.x(j, a);
      next.factor_to_var[static_cast<std::size_t>(i) * n + a] =
          inst.measurements[a] - acc;
    }
  }
  return next;
}

EdgeMessages mp_finite_beta_step(const EdgeMessages& msgs,
                                 const ProblemInstance& inst, double beta) {
  check_shapes(msgs, inst);
  const std::vector<double> at =
      transpose(msgs.n, msgs.N, inst.matrix.entries.data());
  return finite_beta_step_impl(msgs, inst, beta, at);
}

std::vector<double> mp_estimate(const EdgeMessages& msgs,
                                const ProblemInstance& inst) {
  check_shapes(msgs, inst);
  const std::vector<double> at =
      transpose(msgs.n, msgs.N, inst.matrix.entries.data());
  return estimate_impl(msgs, at);
}

double kolmogorov_distance(std::span<const double> samples,
                           const std::function<double(double)>& cdf) {
  if (samples.empty())
    throw std::invalid_argument("kolmogorov_distance: empty sample set");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double inv = 1.0 / static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, std::abs((i + 1) * inv - f));
    d = std::max(d, std::abs(i * inv - f));
  }
  return std::min(d, 1.0);
}

std::vector<MpCompareRow> compare_mp_amp(const ProblemInstance& inst,
                                         double tau0, int iters, double beta) {
  const int n = inst.matrix.rows, N = inst.matrix.cols;
  const std::vector<double> at = transpose(n, N, inst.matrix.entries.data());

  std::vector<int> support;
  for (int i = 0; i < N; ++i)
    if (inst.signal.values.size() == static_cast<std::size_t>(N) &&
        inst.signal.values[i] != 0.0)
      support.push_back(i);
  if (support.empty())
    for (int i = 0; i < N; ++i) support.push_back(i);

  EdgeMessages msgs = mp_init(inst, tau0);
  AmpState amp = amp_init(inst, tau0);

  std::vector<MpCompareRow> rows;
  rows.reserve(iters);
  for (int t = 1; t <= iters; ++t) {
    // node estimate from iteration t-1 messages matches the AMP iterate x^t
    const std::vector<double> est = estimate_impl(msgs, at);
    const AmpState amp_next = amp_bp_step(amp, inst);

    MpCompareRow row;
    row.t = t;
    for (int i = 0; i < N; ++i)
      row.max_discrepancy =
          std::max(row.max_discrepancy, std::abs(est[i] - amp_next.x[i]));

    msgs = beta > 0 ? finite_beta_step_impl(msgs, inst, beta, at)
                    : step_impl(msgs, inst, at);
    amp = amp_next;

    std::vector<double> spreads;
    spreads.reserve(support.size());
    for (int i : support) {
      double lo = msgs.x(i, 0), hi = lo;
      for (int a = 1; a < n; ++a) {
        lo = std::min(lo, msgs.x(i, a));
        hi = std::max(hi, msgs.x(i, a));
      }
      spreads.push_back(hi - lo);
    }
    std::sort(spreads.begin(), spreads.end());
    const std::size_t m = spreads.size();
    row.median_edge_spread =
        m % 2 ? spreads[m / 2] : 0.5 * (spreads[m / 2 - 1] + spreads[m / 2]);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ampcs
