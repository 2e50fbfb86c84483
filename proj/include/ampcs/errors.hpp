#pragma once

#include <stdexcept>
#include <string>

namespace ampcs {

// Invalid experiment or problem configuration (bad dimensions, weights, flags).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Threshold recursion collapsed to zero or below the machine floor.
struct DegenerateThresholdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Effective noise variance hit zero with a continuous prior.
struct DegenerateNoiseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed-form moment evaluation outside its documented precision envelope.
struct PrecisionLossError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureError : std::runtime_error {
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_tolerance(achieved) {}
  double achieved_tolerance;
};

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ampcs
