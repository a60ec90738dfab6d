#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mmfl/config.hpp"
#include "mmfl/selection.hpp"
#include "mmfl/simengine.hpp"

namespace mmfl {

// Worker count: MMFL_SIM_THREADS when set, otherwise 1.
int experiment_threads();

SimulationConfig apply_arm(SimulationConfig config, const ExperimentArm& arm);

struct ArmRun {
  std::string arm;
  std::uint64_t seed = 0;
  SimulationResult result;
};

struct CompareOutput {
  std::vector<ArmRun> runs;
  // (baseline arm, model_id) -> median over seeds of baseline tta / flammable tta
  std::map<std::pair<std::string, std::string>, double> median_speedup;
  std::string csv;
};

CompareOutput run_compare(const SimulationConfig& base,
                          const std::vector<ExperimentArm>& arms,
                          const std::vector<std::uint64_t>& seeds);

struct AlphaSweepOutput {
  std::vector<double> alphas;
  // alpha -> medians over seeds, averaged over models
  std::map<double, double> median_tta;
  std::map<double, double> median_final_accuracy;
  std::string csv;
};

// Runs the flammable arm at each alpha with a fixed round horizon
// (stop_at_target disabled) so final accuracies stay comparable.
AlphaSweepOutput run_alpha_sweep(const SimulationConfig& base,
                                 const std::vector<double>& alphas,
                                 const std::vector<std::uint64_t>& seeds);

struct OracleValidation {
  int instances = 0;
  int mismatches = 0;
  std::string csv;
};

// Random small instances checked against the brute-force oracle. Scores are
// dyadic rationals so both solvers accumulate bit-identical sums.
OracleValidation validate_selector(int instances, int max_clients,
                                   int max_models, std::uint64_t seed);

SelectionInstance random_instance(std::mt19937_64& rng, int max_clients,
                                  int max_models);

}  // namespace mmfl
