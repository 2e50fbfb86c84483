#include "ampcs/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "ampcs/errors.hpp"
#include "ampcs/linalg.hpp"
#include "ampcs/rng.hpp"

namespace ampcs {

namespace {

const char* ensemble_name(Ensemble e) {
  return e == Ensemble::Rademacher ? "rademacher" : "gaussian";
}

Ensemble ensemble_from_name(const std::string& s) {
  if (s == "rademacher") return Ensemble::Rademacher;
  if (s == "gaussian") return Ensemble::Gaussian;
  throw ConfigError("unknown ensemble '" + s + "'");
}

const char* amplitude_name(AmplitudeModel m) {
  return m == AmplitudeModel::PlusMinusOne ? "pm1" : "gauss";
}

AmplitudeModel amplitude_from_name(const std::string& s) {
  if (s == "pm1") return AmplitudeModel::PlusMinusOne;
  if (s == "gauss") return AmplitudeModel::GaussianNonzeros;
  throw ConfigError("unknown amplitude model '" + s + "'");
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n < 1 || cfg.n >= cfg.N)
    throw ConfigError("need 1 <= n < N, got n=" + std::to_string(cfg.n) +
                      " N=" + std::to_string(cfg.N));
  if (cfg.k < 1 || cfg.k > cfg.n)
    throw ConfigError("need 0 < k <= n, got k=" + std::to_string(cfg.k) +
                      " n=" + std::to_string(cfg.n));
  if (cfg.max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(cfg.tol > 0)) throw ConfigError("tol must be > 0");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
  if (cfg.sigma < 0) throw ConfigError("sigma must be >= 0");
  if (cfg.lambda < 0) throw ConfigError("lambda must be >= 0");
}

ProblemInstance generate_instance(const ExperimentConfig& cfg,
                                  int trial_index) {
  const int N = cfg.N, n = cfg.n, k = cfg.k;
  if (n < 1 || n >= N)
    throw ConfigError("generate_instance: need 1 <= n < N");
  if (k < 0 || k > n)
    throw ConfigError("generate_instance: need 0 <= k <= n");

  SplitMix64 rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(trial_index)));

  ProblemInstance inst;
  inst.matrix.rows = n;
  inst.matrix.cols = N;
  inst.matrix.ensemble = cfg.ensemble;
  inst.matrix.entries.resize(static_cast<std::size_t>(n) * N);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  if (cfg.ensemble == Ensemble::Rademacher) {
    for (double& e : inst.matrix.entries) e = rng.coin() ? scale : -scale;
  } else {
    for (double& e : inst.matrix.entries) e = rng.normal() * scale;
  }

  inst.signal.values.assign(N, 0.0);
  inst.signal.sparsity = k;
  inst.signal.amplitude = cfg.amplitude;
  std::vector<int> idx(N);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(N - i)));
    std::swap(idx[i], idx[j]);
  }
  for (int i = 0; i < k; ++i) {
    inst.signal.values[idx[i]] =
        cfg.amplitude == AmplitudeModel::PlusMinusOne
            ? (rng.coin() ? 1.0 : -1.0)
            : rng.normal();
  }

  inst.measurements.resize(n);
  matvec_serial(n, N, inst.matrix.entries.data(), inst.signal.values.data(),
                inst.measurements.data());
  inst.noise_std = cfg.sigma;
  if (cfg.sigma > 0) {
    for (double& y : inst.measurements) y += cfg.sigma * rng.normal();
  }
  return inst;
}

double undersampling_ratio(const ProblemInstance& inst) {
  return static_cast<double>(inst.matrix.rows) /
         static_cast<double>(inst.matrix.cols);
}

std::string instance_to_json(const ProblemInstance& inst,
                             const ExperimentConfig& cfg, int trial_index) {
  nlohmann::json j;
  j["N"] = inst.matrix.cols;
  j["n"] = inst.matrix.rows;
  j["k"] = inst.signal.sparsity;
  j["seed"] = cfg.seed;
  j["trial_index"] = trial_index;
  j["ensemble"] = ensemble_name(inst.matrix.ensemble);
  j["amplitude"] = amplitude_name(inst.signal.amplitude);
  j["sigma"] = inst.noise_std;
  j["A"] = inst.matrix.entries;
  j["s_o"] = inst.signal.values;
  j["y"] = inst.measurements;
  return j.dump();
}

LoadedInstance instance_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("instance parse failure: ") + e.what());
  }
  LoadedInstance out;
  const int N = j.at("N").get<int>();
  const int n = j.at("n").get<int>();
  out.config.N = N;
  out.config.n = n;
  out.config.k = j.at("k").get<int>();
  out.config.seed = j.at("seed").get<std::uint64_t>();
  out.trial_index = j.at("trial_index").get<int>();
  out.config.ensemble = ensemble_from_name(j.at("ensemble").get<std::string>());
  out.config.amplitude =
      amplitude_from_name(j.at("amplitude").get<std::string>());
  out.config.sigma = j.at("sigma").get<double>();

  auto& inst = out.instance;
  inst.matrix.rows = n;
  inst.matrix.cols = N;
  inst.matrix.ensemble = out.config.ensemble;
  inst.matrix.entries = j.at("A").get<std::vector<double>>();
  inst.signal.values = j.at("s_o").get<std::vector<double>>();
  inst.signal.sparsity = out.config.k;
  inst.signal.amplitude = out.config.amplitude;
  inst.measurements = j.at("y").get<std::vector<double>>();
  inst.noise_std = out.config.sigma;

  if (inst.matrix.entries.size() != static_cast<std::size_t>(n) * N ||
      inst.signal.values.size() != static_cast<std::size_t>(N) ||
      inst.measurements.size() != static_cast<std::size_t>(n))
    throw ConfigError("instance dimensions do not match payload sizes");
  return out;
}

}  // namespace ampcs
