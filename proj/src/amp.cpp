#include "ampcs/amp.hpp"

#include <cmath>
#include <limits>

#include "ampcs/errors.hpp"
#include "ampcs/linalg.hpp"

namespace ampcs {

namespace {

constexpr double kThresholdFloor = std::numeric_limits<double>::min();

// u = A^T z + x
std::vector<double> pseudo_data(const AmpState& s, const ProblemInstance& inst) {
  const int n = inst.matrix.rows, N = inst.matrix.cols;
  std::vector<double> u(N);
  matvec_t(n, N, inst.matrix.entries.data(), s.z.data(), u.data());
  for (int i = 0; i < N; ++i) u[i] += s.x[i];
  return u;
}

// z' = y - A x' + correction * z
std::vector<double> corrected_residual(const std::vector<double>& x_new,
                                       const AmpState& s,
                                       const ProblemInstance& inst,
                                       double correction) {
  const int n = inst.matrix.rows, N = inst.matrix.cols;
  std::vector<double> z_new(n);
  matvec(n, N, inst.matrix.entries.data(), x_new.data(), z_new.data());
  for (int a = 0; a < n; ++a)
    z_new[a] = inst.measurements[a] - z_new[a] + correction * s.z[a];
  return z_new;
}

}  // namespace

double default_tau0(const ProblemInstance& inst) {
  const double norm = norm2(inst.measurements);
  if (norm == 0.0) return 1.0;
  return norm / std::sqrt(static_cast<double>(inst.matrix.rows));
}

AmpState amp_init(const ProblemInstance& inst, double tau0) {
  if (!(tau0 > 0)) throw ConfigError("amp_init: tau0 must be > 0");
  AmpState s;
  s.x.assign(inst.matrix.cols, 0.0);
  s.z = inst.measurements;
  s.threshold = tau0;
  return s;
}

AmpState amp_bp_step(const AmpState& state, const ProblemInstance& inst,
                     bool onsager) {
  const double tau = state.threshold;
  if (!(tau > kThresholdFloor))
    throw DegenerateThresholdError(
        "amp_bp_step: threshold collapsed to the machine floor at iteration " +
        std::to_string(state.t));
  const double delta = undersampling_ratio(inst);

  const std::vector<double> u = pseudo_data(state, inst);
  DenoiserOutput den = apply_denoiser_vec(Denoiser::soft(), u, tau);
  const double md = den.mean_deriv;

  AmpState next;
  next.threshold = tau / delta * md;
  next.z = corrected_residual(den.values, state, inst,
                              onsager ? md / delta : 0.0);
  next.x = std::move(den.values);
  next.t = state.t + 1;
  next.last_mean_deriv = md;
  return next;
}

AmpState amp_lasso_step(const AmpState& state, const ProblemInstance& inst,
                        double lambda, bool onsager, bool lagged_deriv) {
  if (lambda < 0) throw ConfigError("amp_lasso_step: lambda must be >= 0");
  const double gamma = state.threshold;
  const double b = gamma + lambda;
  if (!(b > kThresholdFloor))
    throw DegenerateThresholdError(
        "amp_lasso_step: effective threshold collapsed at iteration " +
        std::to_string(state.t));
  const double delta = undersampling_ratio(inst);

  const std::vector<double> u = pseudo_data(state, inst);
  DenoiserOutput den = apply_denoiser_vec(Denoiser::soft(), u, b);
  const double md = den.mean_deriv;
  const double used_md = lagged_deriv ? state.last_mean_deriv : md;

  AmpState next;
  next.threshold = (lambda + gamma) / delta * md;
  next.z = corrected_residual(den.values, state, inst,
                              onsager ? used_md / delta : 0.0);
  next.x = std::move(den.values);
  next.t = state.t + 1;
  next.last_mean_deriv = md;
  return next;
}

AmpState amp_bayes_step(const AmpState& state, const ProblemInstance& inst,
                        const Prior& prior, double noise_var) {
  if (noise_var < 0)
    throw ConfigError("amp_bayes_step: noise_var must be >= 0");
  const double gamma = state.threshold;
  const double b = gamma + noise_var;
  if (!(b > kThresholdFloor))
    throw DegenerateNoiseError(
        "amp_bayes_step: effective noise variance collapsed at iteration " +
        std::to_string(state.t));
  const double delta = undersampling_ratio(inst);

  const std::vector<double> u = pseudo_data(state, inst);
  DenoiserOutput den = apply_denoiser_vec(Denoiser::posterior(prior), u, b);
  const double md = den.mean_deriv;  // <F'> = <G> / b

  AmpState next;
  next.threshold = md * b / delta;  // (1/delta) <G(u; gamma + lambda)>
  next.z = corrected_residual(den.values, state, inst, md / delta);
  next.x = std::move(den.values);
  next.t = state.t + 1;
  next.last_mean_deriv = md;
  return next;
}

TrialRecord run_solver(const ProblemInstance& inst, const SolverOptions& opts) {
  if (opts.max_iters < 1) throw ConfigError("run_solver: max_iters must be >= 1");
  if (!(opts.tol > 0)) throw ConfigError("run_solver: tol must be > 0");

  const int N = inst.matrix.cols;
  const double tau0 = opts.tau0 > 0 ? opts.tau0 : default_tau0(inst);
  const bool have_truth = !inst.signal.values.empty();
  const double y_norm = norm2(inst.measurements);

  TrialRecord rec;
  rec.seed = opts.seed;
  rec.trial_index = opts.trial_index;

  AmpState state = amp_init(inst, tau0);
  for (int t = 0; t < opts.max_iters; ++t) {
    AmpState next;
    try {
      switch (opts.variant) {
        case AmpVariant::BasisPursuit:
          next = amp_bp_step(state, inst, opts.onsager);
          break;
        case AmpVariant::Lasso:
          next = amp_lasso_step(state, inst, opts.lambda, opts.onsager,
                                opts.lagged_deriv);
          break;
        case AmpVariant::Bayes:
          next = amp_bayes_step(state, inst, opts.prior, opts.lambda);
          break;
      }
    } catch (const DegenerateThresholdError&) {
      break;  // recorded as non-convergence
    } catch (const DegenerateNoiseError&) {
      break;
    }

    if (opts.record_trajectory) {
      if (have_truth) {
        double acc = 0.0;
        for (int i = 0; i < N; ++i) {
          const double d = next.x[i] - inst.signal.values[i];
          acc += d * d;
        }
        rec.per_iteration_mse.push_back(acc / N);
      }
      rec.threshold_trajectory.push_back(next.threshold);
    }

    const double prev_norm = norm2(state.x);
    double change = 0.0;
    for (int i = 0; i < N; ++i) {
      const double d = next.x[i] - state.x[i];
      change += d * d;
    }
    change = std::sqrt(change);
    state = std::move(next);

    if (change <= opts.tol * std::max(prev_norm, 1e-12)) {
      // An all-zero iterate with nonzero data and a collapsed threshold is a
      // dead state, not a solution; keep iterating so the degenerate step
      // error is what ends the run.
      const double next_b =
          opts.variant == AmpVariant::BasisPursuit
              ? state.threshold
              : state.threshold + opts.lambda;
      const bool dead_zero = norm2(state.x) == 0.0 && y_norm > 0.0 &&
                             !(next_b > kThresholdFloor);
      if (!dead_zero) {
        rec.converged = true;
        break;
      }
    }
  }

  rec.iterations_used = state.t;
  if (have_truth) {
    const double s_norm = norm2(inst.signal.values);
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
      const double d = state.x[i] - inst.signal.values[i];
      acc += d * d;
    }
    rec.final_rel_error =
        s_norm > 0 ? std::sqrt(acc) / s_norm : norm2(state.x);
  }

  std::vector<double> ax(inst.matrix.rows);
  matvec(inst.matrix.rows, N, inst.matrix.entries.data(), state.x.data(),
         ax.data());
  double resid = 0.0;
  for (int a = 0; a < inst.matrix.rows; ++a) {
    const double d = inst.measurements[a] - ax[a];
    resid += d * d;
  }
  switch (opts.variant) {
    case AmpVariant::BasisPursuit:
      rec.final_objective = norm1(state.x);
      break;
    case AmpVariant::Lasso:
      rec.final_objective = opts.lambda * norm1(state.x) + 0.5 * resid;
      break;
    case AmpVariant::Bayes:
      rec.final_objective = 0.5 * resid;
      break;
  }
  return rec;
}

}  // namespace ampcs
