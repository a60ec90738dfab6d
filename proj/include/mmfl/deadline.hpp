#pragma once

#include <span>
#include <string>
#include <vector>

#include "mmfl/domain.hpp"

namespace mmfl {

// Nearest-rank percentile: sorted ascending, rank = ceil(p/100 * n).
double compute_deadline(std::span<const double> times, double percentile);

enum class DeadlineDirection {
  stable_decrease,  // earlier-window sum larger => training stable => tighten
  stable_increase,  // the opposite reading of the adjustment rule
};

DeadlineDirection deadline_direction_from_string(const std::string& name);
const char* to_string(DeadlineDirection direction);

struct DeadlineConfig {
  double p_init = 100.0;
  double p_min = 10.0;
  double epsilon = 5.0;
  int window = 5;
  DeadlineDirection direction = DeadlineDirection::stable_decrease;
};

class DeadlineController {
 public:
  explicit DeadlineController(const DeadlineConfig& config = {});

  double percentile() const { return p_; }
  const std::vector<double>& history() const { return signals_; }

  // Appends and returns G_D = L_test / D.
  double record_signal(double test_loss, double deadline);

  // Compares sum(G[R-2w : R-w]) against sum(G[R-w : R]) and steps the
  // percentile by epsilon; no-op while R < 2w. R is the 0-based round index
  // and at most the number of recorded signals.
  double update_percentile(int round);

 private:
  DeadlineConfig config_;
  double p_;
  std::vector<double> signals_;
};

}  // namespace mmfl
