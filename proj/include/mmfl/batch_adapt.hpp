#pragma once

#include <functional>
#include <string>

#include "mmfl/domain.hpp"

namespace mmfl {

enum class IterationRule {
  // k* = ceil((m0/m) * ((phi+m)/(phi+m0)) * k0); keeps relative statistical
  // progress at exactly 1 before the ceiling.
  progress_matching,
  // k* = ceil((m0/m) * ((phi+m0)/(phi+m)) * k0); kept for comparison.
  paper_literal,
};

IterationRule iteration_rule_from_string(const std::string& name);
const char* to_string(IterationRule rule);

struct BatchPlan {
  int batch_size = 0;       // m*
  int iterations = 0;       // k*
  double predicted_time = 0.0;
  double predicted_progress = 0.0;  // relative to the (m0, k0) baseline
};

// phi(m)/phi(m0) = (phi + m0) / (phi + m)
double relative_efficiency(double phi, int m0, int m);

// sigma(m, k)/sigma(m0, k0) = (m*k)/(m0*k0) * (phi + m0)/(phi + m)
double relative_progress(double phi, int m0, int k0, int m, int k);

int adapted_iterations(double phi, int m0, int k0, int m,
                       IterationRule rule = IterationRule::progress_matching);

// Enumerates integer batch sizes in [m_min, m_max] and picks the one
// maximizing throughput(m) * (phi + m0)/(phi + m); ties go to the smaller m.
BatchPlan optimize_batch(double phi, int m0, int k0,
                         const std::function<double(int)>& throughput_of_batch,
                         int m_min, int m_max,
                         IterationRule rule = IterationRule::progress_matching);

BatchPlan optimize_batch(double phi, int m0, int k0,
                         const DeviceProfile& profile,
                         const std::string& model_id, int m_min, int m_max,
                         IterationRule rule = IterationRule::progress_matching);

}  // namespace mmfl
