#include "ampcs/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <omp.h>

#include <json.hpp>

#include "ampcs/amp.hpp"
#include "ampcs/errors.hpp"
#include "ampcs/linalg.hpp"
#include "ampcs/oracle.hpp"
#include "ampcs/sum_product.hpp"

namespace ampcs {

const char* const kToolVersion = "0.1.0";

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size();
  return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

double mse_vs_signal(std::span<const double> x, const ProblemInstance& inst) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - inst.signal.values[i];
    acc += d * d;
  }
  return acc / static_cast<double>(x.size());
}

double rel_error_vs_signal(std::span<const double> x,
                           const ProblemInstance& inst) {
  const double s_norm = norm2(inst.signal.values);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - inst.signal.values[i];
    acc += d * d;
  }
  return s_norm > 0 ? std::sqrt(acc) / s_norm : norm2(x);
}

TrialRecord run_fista_trial(const ExperimentConfig& cfg,
                            const ProblemInstance& inst, int trial_index) {
  if (!(cfg.lambda > 0))
    throw ConfigError("fista solver requires lambda > 0");
  TrialRecord rec;
  rec.seed = cfg.seed;
  rec.trial_index = trial_index;
  const LassoSolution sol = fista_lasso(
      inst, cfg.lambda, cfg.tol, cfg.max_iters,
      [&](int, std::span<const double> x) {
        rec.per_iteration_mse.push_back(mse_vs_signal(x, inst));
      });
  rec.iterations_used = sol.iterations;
  rec.final_rel_error = rel_error_vs_signal(sol.x, inst);
  rec.final_objective = sol.objective;
  rec.converged = sol.kkt_residual <= cfg.tol;
  return rec;
}

TrialRecord run_edge_mp_trial(const ExperimentConfig& cfg,
                              const ProblemInstance& inst, int trial_index) {
  TrialRecord rec;
  rec.seed = cfg.seed;
  rec.trial_index = trial_index;
  const double tau0 = cfg.tau0 > 0 ? cfg.tau0 : default_tau0(inst);
  EdgeMessages msgs = mp_init(inst, tau0);
  std::vector<double> prev(inst.matrix.cols, 0.0);
  for (int t = 0; t < cfg.max_iters; ++t) {
    try {
      msgs = mp_step(msgs, inst);
    } catch (const DegenerateThresholdError&) {
      break;
    }
    const std::vector<double> est = mp_estimate(msgs, inst);
    rec.per_iteration_mse.push_back(mse_vs_signal(est, inst));
    rec.threshold_trajectory.push_back(msgs.threshold);
    rec.iterations_used = msgs.iter;
    double change = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
      const double d = est[i] - prev[i];
      change += d * d;
    }
    const double prev_norm = norm2(prev);
    prev = est;
    if (std::sqrt(change) <= cfg.tol * std::max(prev_norm, 1e-12)) {
      rec.converged = true;
      break;
    }
  }
  rec.final_rel_error = rel_error_vs_signal(prev, inst);
  rec.final_objective = norm1(prev);
  return rec;
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, int trial_index) {
  const ProblemInstance inst = generate_instance(cfg, trial_index);

  SolverOptions opts;
  opts.max_iters = cfg.max_iters;
  opts.tol = cfg.tol;
  opts.tau0 = cfg.tau0;
  opts.seed = cfg.seed;
  opts.trial_index = trial_index;
  opts.lambda = cfg.lambda;

  switch (cfg.solver) {
    case SolverKind::AmpBp:
      opts.variant = AmpVariant::BasisPursuit;
      opts.lambda = 0.0;
      return run_solver(inst, opts);
    case SolverKind::Ista:
      opts.variant = AmpVariant::BasisPursuit;
      opts.lambda = 0.0;
      opts.onsager = false;
      return run_solver(inst, opts);
    case SolverKind::AmpLasso:
      opts.variant = AmpVariant::Lasso;
      return run_solver(inst, opts);
    case SolverKind::AmpBayes:
      opts.variant = AmpVariant::Bayes;
      opts.prior = Prior::bernoulli_gaussian(cfg.prior_eps, cfg.prior_var);
      opts.lambda =
          cfg.noise_var >= 0 ? cfg.noise_var : cfg.sigma * cfg.sigma;
      return run_solver(inst, opts);
    case SolverKind::Fista:
      return run_fista_trial(cfg, inst, trial_index);
    case SolverKind::EdgeMp:
      return run_edge_mp_trial(cfg, inst, trial_index);
  }
  throw ConfigError("run_trial: unknown solver kind");
}

std::string trial_record_to_json(const TrialRecord& rec) {
  nlohmann::json j;
  j["seed"] = rec.seed;
  j["trial_index"] = rec.trial_index;
  j["iterations_used"] = rec.iterations_used;
  j["per_iteration_mse"] = rec.per_iteration_mse;
  j["final_rel_error"] = rec.final_rel_error;
  j["final_objective"] = rec.final_objective;
  j["threshold_trajectory"] = rec.threshold_trajectory;
  j["converged"] = rec.converged;
  return j.dump();
}

std::string sweep_csv(const ExperimentConfig& base,
                      const std::vector<double>& deltas,
                      const std::vector<double>& rhos, int trials, int jobs) {
  if (deltas.empty() || rhos.empty())
    throw ConfigError("sweep: the (delta, rho) grid must be nonempty");
  if (trials < 1) throw ConfigError("sweep: trials must be >= 1");
  if (base.N < 2) throw ConfigError("sweep: N must be >= 2");
  if (jobs < 1) jobs = 1;

  std::vector<double> ds = deltas, rs = rhos;
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());

  struct Cell {
    ExperimentConfig cfg;
    double delta, rho;
  };
  std::vector<Cell> cells;
  for (double d : ds) {
    for (double r : rs) {
      Cell c;
      c.delta = d;
      c.rho = r;
      c.cfg = base;
      c.cfg.n = static_cast<int>(std::lround(d * base.N));
      c.cfg.k = static_cast<int>(std::lround(r * c.cfg.n));
      c.cfg.trials = trials;
      validate_config(c.cfg);
      cells.push_back(c);
    }
  }

  struct Outcome {
    double rel_err = std::numeric_limits<double>::quiet_NaN();
    double iters = 0;
    bool failed = true;
  };
  const int tasks = static_cast<int>(cells.size()) * trials;
  std::vector<Outcome> slots(tasks);

#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (int task = 0; task < tasks; ++task) {
    const int cell = task / trials;
    const int trial = task % trials;
    try {
      const TrialRecord rec = run_trial(cells[cell].cfg, trial);
      slots[task].rel_err = rec.final_rel_error;
      slots[task].iters = rec.iterations_used;
      slots[task].failed = false;
    } catch (const std::exception&) {
      // per-trial failure: counted unsuccessful, the run continues
    }
  }

  std::string out = "delta,rho,trials,success_rate,median_iters,median_rel_err\n";
  for (std::size_t c = 0; c < cells.size(); ++c) {
    int successes = 0;
    std::vector<double> iters, errs;
    for (int t = 0; t < trials; ++t) {
      const Outcome& o = slots[c * trials + t];
      if (o.failed) continue;
      iters.push_back(o.iters);
      errs.push_back(o.rel_err);
      if (o.rel_err <= 1e-3) ++successes;
    }
    out += fmt17(cells[c].delta) + "," + fmt17(cells[c].rho) + "," +
           std::to_string(trials) + "," +
           fmt17(static_cast<double>(successes) / trials) + "," +
           fmt17(median(iters)) + "," + fmt17(median(errs)) + "\n";
  }
  return out;
}

std::string compare_mp_csv(const ExperimentConfig& base, int iters, int seeds,
                           double beta) {
  if (iters < 0) throw ConfigError("compare-mp: iters must be >= 0");
  if (seeds < 1) throw ConfigError("compare-mp: seeds must be >= 1");
  std::string out = "N,seed,t,max_discrepancy,median_edge_spread\n";
  for (int s = 0; s < seeds; ++s) {
    if (iters == 0) continue;
    const ProblemInstance inst = generate_instance(base, s);
    const double tau0 = base.tau0 > 0 ? base.tau0 : default_tau0(inst);
    for (const MpCompareRow& row : compare_mp_amp(inst, tau0, iters, beta)) {
      out += std::to_string(base.N) + "," + std::to_string(s) + "," +
             std::to_string(row.t) + "," + fmt17(row.max_discrepancy) + "," +
             fmt17(row.median_edge_spread) + "\n";
    }
  }
  return out;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["N"] = cfg.N;
  j["n"] = cfg.n;
  j["k"] = cfg.k;
  j["ensemble"] =
      cfg.ensemble == Ensemble::Rademacher ? "rademacher" : "gaussian";
  j["amplitude"] =
      cfg.amplitude == AmplitudeModel::PlusMinusOne ? "pm1" : "gauss";
  j["sigma"] = cfg.sigma;
  j["lambda"] = cfg.lambda;
  switch (cfg.solver) {
    case SolverKind::AmpBp: j["solver"] = "bp"; break;
    case SolverKind::AmpLasso: j["solver"] = "lasso"; break;
    case SolverKind::AmpBayes: j["solver"] = "bayes"; break;
    case SolverKind::Ista: j["solver"] = "ista"; break;
    case SolverKind::Fista: j["solver"] = "fista"; break;
    case SolverKind::EdgeMp: j["solver"] = "edge-mp"; break;
  }
  j["max_iters"] = cfg.max_iters;
  j["tol"] = cfg.tol;
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["tau0"] = cfg.tau0;
  j["prior_eps"] = cfg.prior_eps;
  j["prior_var"] = cfg.prior_var;
  j["noise_var"] = cfg.noise_var;
  return j.dump();
}

std::string manifest_to_json(const RunManifest& m) {
  nlohmann::json j;
  j["tool_version"] = m.tool_version;
  j["config"] = nlohmann::json::parse(config_to_json(m.config));
  j["wall_time_seconds"] = m.wall_time_seconds;
  j["output_paths"] = m.output_paths;
  return j.dump();
}

}  // namespace ampcs
