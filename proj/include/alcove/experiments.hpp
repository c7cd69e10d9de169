#pragma once

#include "alcove/cartan.hpp"
#include "alcove/kernels.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

// Named experiments tying the Monte Carlo samplers and the closed-form
// kernels together.  Each experiment is a deterministic function of
// (model, params); reports serialize to JSON with a stable field set.

namespace alcove {

struct ExperimentParams {
  // Values of the simple roots on the drift gamma (one per rank); empty
  // selects the experiment default (0.4 on every simple root, plus the
  // drift-free case where the experiment covers it).
  std::vector<double> gamma_alpha;
  long n = 0;        // replicas per seed; 0 = experiment default
  double ds = 0.0;   // SDE grid step; 0 = experiment default
  std::uint64_t seed = 7;
  int threads = 1;
  bool dump_samples = false;
  std::string out_dir = "reports";  // used only for sample dumps
  KernelConfig kernel{};
};

struct ExperimentReport {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool passed = false;
  long samples_n = 0;
  std::uint64_t seed = 0;
  nlohmann::ordered_json config;
  double wall_time = 0.0;

  nlohmann::ordered_json to_json() const;
};

// The recognized experiment names, in suite order.
const std::vector<std::string>& experiment_names();

// Drift vector from simple-root values: gamma = sum values[i] * omega_i.
Vec gamma_from_alpha(const GroupModel& g, const std::vector<double>& values);

// Whether the experiment is defined for this model (the scalar KS
// experiments are rank-1 only).
bool experiment_supports(const GroupModel& g, const std::string& name);

// Checks name, model support and parameter preconditions without running
// anything; throws std::invalid_argument on the first violation.  The CLI
// validates every requested experiment up front so a bad suite fails before
// any work starts.
void validate_experiment_request(const GroupModel& g, const std::string& name,
                                 const ExperimentParams& params);

// Runs one named experiment.  Statistical experiments use seeds
// {seed, seed+1, seed+2} and pass when at least 2 of 3 do; their reported
// statistic is the decisive (median) normalized value.  Throws
// std::invalid_argument for unknown names or infeasible params.
ExperimentReport run_experiment(const GroupModel& g, const std::string& name,
                                const ExperimentParams& params);

}  // namespace alcove
