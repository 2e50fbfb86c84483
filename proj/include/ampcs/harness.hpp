#pragma once

#include <string>
#include <vector>

#include "ampcs/model.hpp"

namespace ampcs {

// Generates the instance for (cfg, trial_index) and runs the configured
// solver; covers all six SolverKind values.
TrialRecord run_trial(const ExperimentConfig& cfg, int trial_index);

std::string trial_record_to_json(const TrialRecord& rec);

// One row per (delta, rho) cell, sorted by (delta, rho):
//   delta,rho,trials,success_rate,median_iters,median_rel_err
// Success is relative l2 error <= 1e-3. Trials run concurrently up to `jobs`
// threads; outputs are buffered per task and emitted in deterministic order.
// Per-trial failures count as unsuccessful and do not abort the run.
std::string sweep_csv(const ExperimentConfig& base,
                      const std::vector<double>& deltas,
                      const std::vector<double>& rhos, int trials, int jobs);

// CSV {N,seed,t,max_discrepancy,median_edge_spread} of the edge-MP vs AMP
// comparison over `seeds` trial streams. beta <= 0 = infinite.
std::string compare_mp_csv(const ExperimentConfig& base, int iters, int seeds,
                           double beta);

struct RunManifest {
  std::string tool_version;
  ExperimentConfig config;
  std::vector<double> wall_time_seconds;  // per trial
  std::vector<std::string> output_paths;
};

std::string manifest_to_json(const RunManifest& m);

std::string config_to_json(const ExperimentConfig& cfg);

extern const char* const kToolVersion;

}  // namespace ampcs
