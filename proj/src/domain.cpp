#include "mmfl/domain.hpp"

#include <algorithm>
#include <cmath>

namespace mmfl {

const char* to_string(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::gpu:
      return "gpu";
    case DeviceKind::cpu:
      return "cpu";
    case DeviceKind::mobile:
      return "mobile";
  }
  return "unknown";
}

DeviceKind device_kind_from_string(const std::string& name) {
  if (name == "gpu") return DeviceKind::gpu;
  if (name == "cpu") return DeviceKind::cpu;
  if (name == "mobile") return DeviceKind::mobile;
  throw ConfigError("unknown device kind: " + name);
}

void DeviceProfile::validate() const {
  for (const auto& [model_id, curve] : curves) {
    if (curve.size() < 2) {
      throw ConfigError("profile curve for " + model_id +
                        " needs at least 2 points");
    }
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (curve[i].samples_per_sec <= 0.0) {
        throw ConfigError("profile curve for " + model_id +
                          " has nonpositive throughput");
      }
      if (i > 0 && curve[i].batch <= curve[i - 1].batch) {
        throw ConfigError("profile curve for " + model_id +
                          " has non-increasing batch sizes");
      }
    }
  }
}

double interpolate_throughput(const std::vector<ThroughputPoint>& curve,
                              int batch) {
  if (curve.empty()) throw ConfigError("empty throughput curve");
  if (batch <= curve.front().batch) return curve.front().samples_per_sec;
  if (batch >= curve.back().batch) return curve.back().samples_per_sec;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (batch <= curve[i].batch) {
      const auto& lo = curve[i - 1];
      const auto& hi = curve[i];
      const double frac =
          static_cast<double>(batch - lo.batch) / (hi.batch - lo.batch);
      return lo.samples_per_sec +
             frac * (hi.samples_per_sec - lo.samples_per_sec);
    }
  }
  return curve.back().samples_per_sec;
}

double throughput(const DeviceProfile& profile, const std::string& model_id,
                  int batch) {
  if (batch < 1) throw DomainError("batch size must be >= 1");
  auto it = profile.curves.find(model_id);
  if (it == profile.curves.end()) {
    throw ConfigError("no throughput curve for model " + model_id);
  }
  return interpolate_throughput(it->second, batch);
}

double GnsSchedule::at(int round) const {
  if (phi0 <= 0.0) throw ConfigError("gns phi0 must be positive");
  if (ramp_rounds < 1 || growth <= 1.0) return phi0;
  const double frac =
      static_cast<double>(std::min(round, ramp_rounds)) / ramp_rounds;
  return phi0 * std::pow(growth, std::max(0.0, frac));
}

int AssignmentMatrix::assignments() const {
  int n = 0;
  for (const auto& row : x) {
    for (auto v : row) n += v != 0;
  }
  return n;
}

}  // namespace mmfl
