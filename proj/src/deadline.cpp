#include "mmfl/deadline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mmfl {

double compute_deadline(std::span<const double> times, double percentile) {
  if (times.empty()) throw DomainError("deadline requires a nonempty time set");
  if (percentile <= 0.0 || percentile > 100.0) {
    throw DomainError("percentile must be in (0, 100]");
  }
  std::vector<double> sorted(times.begin(), times.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(percentile / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

DeadlineDirection deadline_direction_from_string(const std::string& name) {
  if (name == "stable_decrease") return DeadlineDirection::stable_decrease;
  if (name == "stable_increase") return DeadlineDirection::stable_increase;
  throw ConfigError("unknown deadline direction: " + name);
}

const char* to_string(DeadlineDirection direction) {
  return direction == DeadlineDirection::stable_decrease ? "stable_decrease"
                                                         : "stable_increase";
}

DeadlineController::DeadlineController(const DeadlineConfig& config)
    : config_(config), p_(config.p_init) {
  if (config_.window < 1) throw ConfigError("deadline window must be >= 1");
  if (config_.epsilon <= 0.0) throw ConfigError("deadline epsilon must be > 0");
  if (config_.p_min <= 0.0 || config_.p_min > 100.0 ||
      config_.p_init < config_.p_min || config_.p_init > 100.0) {
    throw ConfigError("deadline percentiles must satisfy 0 < p_min <= p_init <= 100");
  }
}

double DeadlineController::record_signal(double test_loss, double deadline) {
  if (deadline <= 0.0) throw DomainError("deadline must be positive");
  if (test_loss < 0.0) throw DomainError("test loss must be nonnegative");
  const double g = test_loss / deadline;
  signals_.push_back(g);
  return g;
}

double DeadlineController::update_percentile(int round) {
  const int w = config_.window;
  if (round < 2 * w || static_cast<int>(signals_.size()) < round) return p_;
  const auto begin = signals_.begin();
  const double earlier =
      std::accumulate(begin + (round - 2 * w), begin + (round - w), 0.0);
  const double recent =
      std::accumulate(begin + (round - w), begin + round, 0.0);
  const bool stable = earlier > recent;
  const bool decrease =
      stable == (config_.direction == DeadlineDirection::stable_decrease);
  p_ += decrease ? -config_.epsilon : config_.epsilon;
  p_ = std::clamp(p_, config_.p_min, 100.0);
  return p_;
}

}  // namespace mmfl
