#include "mmfl/batch_adapt.hpp"

#include <algorithm>
#include <cmath>

namespace mmfl {

namespace {

void check_args(double phi, int m0, int m) {
  if (phi <= 0.0) throw DomainError("phi must be positive");
  if (m0 < 1 || m < 1) throw DomainError("batch sizes must be >= 1");
}

}  // namespace

IterationRule iteration_rule_from_string(const std::string& name) {
  if (name == "progress_matching") return IterationRule::progress_matching;
  if (name == "paper_literal") return IterationRule::paper_literal;
  throw ConfigError("unknown iteration rule: " + name);
}

const char* to_string(IterationRule rule) {
  return rule == IterationRule::progress_matching ? "progress_matching"
                                                  : "paper_literal";
}

double relative_efficiency(double phi, int m0, int m) {
  check_args(phi, m0, m);
  return (phi + m0) / (phi + m);
}

double relative_progress(double phi, int m0, int k0, int m, int k) {
  check_args(phi, m0, m);
  if (k0 < 1 || k < 1) throw DomainError("iteration counts must be >= 1");
  // Single division keeps integral ratios exact.
  return (static_cast<double>(m) * k * (phi + m0)) /
         (static_cast<double>(m0) * k0 * (phi + m));
}

int adapted_iterations(double phi, int m0, int k0, int m, IterationRule rule) {
  check_args(phi, m0, m);
  if (k0 < 1) throw DomainError("iteration counts must be >= 1");
  double q;
  if (rule == IterationRule::progress_matching) {
    q = (static_cast<double>(m0) * k0 * (phi + m)) /
        (static_cast<double>(m) * (phi + m0));
  } else {
    q = (static_cast<double>(m0) * k0 * (phi + m0)) /
        (static_cast<double>(m) * (phi + m));
  }
  // Relative tolerance: huge phi leaves the efficiency ratio a hair above 1,
  // which must not push an integral quotient over the next ceiling step.
  return std::max(1, static_cast<int>(std::ceil(q * (1.0 - 1e-9))));
}

BatchPlan optimize_batch(double phi, int m0, int k0,
                         const std::function<double(int)>& throughput_of_batch,
                         int m_min, int m_max, IterationRule rule) {
  if (m_min < 1 || m_max < m_min) {
    throw ConfigError("empty batch size range");
  }
  check_args(phi, m0, m_min);
  if (k0 < 1) throw DomainError("iteration counts must be >= 1");

  int best_m = m_min;
  double best_objective = -1.0;
  for (int m = m_min; m <= m_max; ++m) {
    const double objective =
        throughput_of_batch(m) * relative_efficiency(phi, m0, m);
    if (objective > best_objective) {
      best_objective = objective;
      best_m = m;
    }
  }

  BatchPlan plan;
  plan.batch_size = best_m;
  plan.iterations = adapted_iterations(phi, m0, k0, best_m, rule);
  plan.predicted_time = static_cast<double>(plan.iterations) * best_m /
                        throughput_of_batch(best_m);
  plan.predicted_progress =
      relative_progress(phi, m0, k0, best_m, plan.iterations);
  return plan;
}

BatchPlan optimize_batch(double phi, int m0, int k0,
                         const DeviceProfile& profile,
                         const std::string& model_id, int m_min, int m_max,
                         IterationRule rule) {
  auto it = profile.curves.find(model_id);
  if (it == profile.curves.end()) {
    throw ConfigError("no throughput curve for model " + model_id);
  }
  const auto& curve = it->second;
  return optimize_batch(
      phi, m0, k0, [&curve](int m) { return interpolate_throughput(curve, m); },
      m_min, m_max, rule);
}

}  // namespace mmfl
