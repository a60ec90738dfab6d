#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mmfl/batch_adapt.hpp"
#include "mmfl/deadline.hpp"
#include "mmfl/domain.hpp"
#include "mmfl/scenario.hpp"
#include "mmfl/selection.hpp"

namespace mmfl {

enum class SelectorKind { flammable, random, round_robin, greedy };

SelectorKind selector_from_string(const std::string& name);
const char* to_string(SelectorKind kind);

struct BiasConfig {
  // Per-round progress discount 1 - beta * CV over participants' progress.
  bool round_cv = true;
  // Accuracy ceiling discount from skew in cumulative per-client
  // contributions; the synthetic stand-in for non-IID degradation under
  // concentrated selection.
  bool coverage = true;
};

struct SimulationConfig {
  std::vector<ModelParams> models;
  RosterParams roster;
  int per_model_clients = 10;   // S = per_model_clients * active models
  int m0 = 10;
  int k0 = 20;
  int m_min = 10;
  int m_max = 100;
  double alpha = 1.0;
  double beta = 0.3;
  BiasConfig bias;
  int rounds_cap = 500;
  std::uint64_t seed = 1;
  std::uint64_t scenario_seed = 42;
  SelectorKind selector = SelectorKind::flammable;
  bool batch_adaptation = true;
  bool multi_model = true;
  bool stop_at_target = true;
  IterationRule iteration_rule = IterationRule::progress_matching;
  double availability_rate = 1.0;
  double loss_dispersion = 0.2;
  DeadlineConfig deadline;
  std::string profiles_file;  // empty: built-in default profiles
  std::string roster_file;    // empty: synthetic roster from scenario_seed

  void validate() const;
  std::vector<std::string> model_ids() const;
};

SimulationConfig default_config();

struct ModelSummary {
  std::string model_id;
  bool reached = false;
  double time_to_accuracy = -1.0;  // seconds; valid when reached
  int rounds_to_accuracy = -1;
  double final_accuracy = 0.0;
};

struct SimulationResult {
  std::vector<RoundRecord> rounds;
  std::vector<ModelSummary> models;
  int total_rounds = 0;
  double total_wall_clock = 0.0;
  // Mean idle fraction of selected clients over rounds with at least two
  // active models.
  double mean_idle_fraction = 0.0;
};

class Simulator {
 public:
  explicit Simulator(SimulationConfig config);

  SimulationResult run();

  // Single-round step, exposed for tests. Returns nullopt when no model is
  // active.
  std::optional<RoundRecord> run_round(int round);

  const std::vector<ModelState>& models() const { return models_; }
  const std::vector<ClientState>& clients() const { return clients_; }

  bool available(int client, std::mt19937_64& rng) const;

 private:
  double throughput_of(const ClientState& client, int model, int batch) const;
  void simulate_training(int round, int client, int model, double exec_time,
                         double deadline,
                         std::vector<std::vector<double>>& progress);
  void advance_model(int model, const std::vector<double>& progress);

  SimulationConfig config_;
  std::vector<DeviceProfile> profiles_;
  std::vector<ClientState> clients_;
  std::vector<ModelState> models_;
  DeadlineController controller_;
  std::mt19937_64 rng_;
  double cumulative_clock_ = 0.0;
  // Idle-fraction accumulation for the multi-model metric.
  double idle_fraction_sum_ = 0.0;
  int idle_fraction_rounds_ = 0;
};

SimulationResult run_simulation(const SimulationConfig& config);

}  // namespace mmfl
