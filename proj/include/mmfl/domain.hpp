#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmfl {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Utility value standing in for "never selected before"; ranks above every
// finite utility during selection so that first-round exploration is
// guaranteed.
inline constexpr double kNeverSelected = std::numeric_limits<double>::infinity();

inline bool is_never_selected(double u) {
  return u == kNeverSelected;
}

enum class DeviceKind { gpu, cpu, mobile };

const char* to_string(DeviceKind kind);
DeviceKind device_kind_from_string(const std::string& name);

struct ThroughputPoint {
  int batch = 0;
  double samples_per_sec = 0.0;
};

// Profiled (batch size -> samples/sec) curves, one per model.
struct DeviceProfile {
  DeviceKind kind = DeviceKind::cpu;
  std::map<std::string, std::vector<ThroughputPoint>> curves;

  // Each curve needs >= 2 points, strictly increasing batch sizes and
  // strictly positive throughputs.
  void validate() const;
};

// Piecewise-linear interpolation between profiled points, clamped to the
// endpoint values outside the profiled range.
double throughput(const DeviceProfile& profile, const std::string& model_id,
                  int batch);
double interpolate_throughput(const std::vector<ThroughputPoint>& curve,
                              int batch);

// Per-(client, model) state.
struct PairState {
  int batch_size = 0;
  int iterations = 0;
  int selected_rounds = 0;       // r_{i,j}
  double reported_data_utility = 0.0;
  double reported_sys_utility = 0.0;
  int last_report_round = -1;
  bool eligible = false;         // x~_{i,j}
  double heterogeneity = 1.0;    // h_{i,j}
  std::int64_t dataset_size = 0; // |D_{i,j}|
  double cumulative_progress = 0.0;
};

struct ClientState {
  std::string client_id;
  DeviceKind device = DeviceKind::cpu;
  int profile_index = -1;          // into the scenario's profile table
  std::vector<PairState> pairs;    // indexed by model
};

struct GnsSchedule {
  double phi0 = 10.0;
  double growth = 1.0;   // total multiplicative growth over the ramp
  int ramp_rounds = 1;

  // Nondecreasing in the round index for growth >= 1.
  double at(int round) const;
};

struct ModelParams {
  std::string model_id;
  double target_accuracy = 0.0;  // a~_j
  double a_max = 1.0;
  double rate = 1e-6;            // c_j
  double loss_scale = 2.0;       // L0
  GnsSchedule gns;
};

struct ModelState {
  ModelParams params;
  double accuracy = 0.0;          // a_j
  double cumulative_progress = 0.0;  // P_j
  bool active = true;
  double time_to_accuracy = -1.0;    // seconds; < 0 while unreached
  int rounds_to_accuracy = -1;

  // L(a) = L0 * (1 - a / a_max)
  double loss() const {
    return params.loss_scale * (1.0 - accuracy / params.a_max);
  }
};

struct AssignmentMatrix {
  std::vector<std::vector<std::uint8_t>> x;   // clients x models
  std::vector<std::vector<double>> time;      // execution seconds per pair
  double deadline = 0.0;
  double objective = 0.0;          // finite score part
  std::int64_t sentinel_count = 0; // never-selected pairs chosen
  int participants = 0;
  bool relaxed = false;

  int assignments() const;
};

struct RoundRecord {
  int round = 0;
  bool skipped = false;
  double wall_clock = 0.0;
  double cumulative_clock = 0.0;
  double deadline = 0.0;
  double percentile = 0.0;
  int participants = 0;
  int active_models = 0;
  double objective = 0.0;
  bool relaxed = false;
  double mean_idle_fraction = 0.0;
  std::vector<double> model_accuracy;       // per model, all models
  std::vector<int> model_participants;      // per model
  std::vector<double> model_mean_batch;     // per model, 0 if no participants
};

}  // namespace mmfl
