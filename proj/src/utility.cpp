#include "mmfl/utility.hpp"

#include <algorithm>
#include <cmath>

namespace mmfl {

double data_utility(std::span<const double> losses) {
  if (losses.empty()) {
    throw DomainError("data_utility requires at least one sample loss");
  }
  double sum_sq = 0.0;
  for (double l : losses) sum_sq += l * l;
  const double n = static_cast<double>(losses.size());
  return n * std::sqrt(sum_sq / n);
}

double system_utility(double deadline, double exec_time) {
  if (deadline <= 0.0) throw DomainError("deadline must be positive");
  if (exec_time <= 0.0) throw DomainError("execution time must be positive");
  return deadline / exec_time;
}

namespace {

double finite_max(const std::vector<double>& values) {
  double m = 0.0;
  for (double v : values) {
    if (!is_never_selected(v)) m = std::max(m, v);
  }
  return m;
}

}  // namespace

std::vector<double> combined_utilities(const std::vector<double>& u_sys,
                                       const std::vector<double>& u_data) {
  if (u_sys.size() != u_data.size()) {
    throw DomainError("utility vectors must have the same length");
  }
  const double sys_max = finite_max(u_sys);
  const double data_max = finite_max(u_data);
  std::vector<double> combined(u_sys.size(), 0.0);
  for (std::size_t i = 0; i < u_sys.size(); ++i) {
    if (is_never_selected(u_sys[i]) || is_never_selected(u_data[i])) {
      combined[i] = kNeverSelected;
      continue;
    }
    const double s = sys_max > 0.0 ? u_sys[i] / sys_max : 0.0;
    const double d = data_max > 0.0 ? u_data[i] / data_max : 0.0;
    combined[i] = s * d;
  }
  return combined;
}

double boosted_score(double utility, double alpha, int round,
                     int times_selected) {
  if (round < 1) throw DomainError("round index must be >= 1");
  if (times_selected <= 0) return kNeverSelected;
  return utility +
         alpha * std::sqrt(static_cast<double>(round) / times_selected);
}

std::vector<double> synthetic_losses(double center_loss, double heterogeneity,
                                     std::int64_t count, double dispersion,
                                     std::mt19937_64& rng) {
  if (count < 1) throw DomainError("loss sample count must be >= 1");
  const double center = center_loss * heterogeneity;
  std::vector<double> losses(static_cast<std::size_t>(count), 0.0);
  if (center <= 0.0) return losses;
  if (dispersion <= 0.0) {
    std::fill(losses.begin(), losses.end(), center);
    return losses;
  }
  std::lognormal_distribution<double> dist(std::log(center), dispersion);
  for (auto& l : losses) l = dist(rng);
  return losses;
}

}  // namespace mmfl
