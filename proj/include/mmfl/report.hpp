#pragma once

#include <string>
#include <vector>

#include "mmfl/simengine.hpp"

namespace mmfl {

// Fixed 9-significant-digit float rendering used by every CSV/JSON artifact.
std::string format_g9(double value);

// Lower median (lower of the two middle elements for even lengths).
double lower_median(std::vector<double> values);

std::string rounds_csv(const SimulationConfig& config,
                       const SimulationResult& result);
std::string summary_json(const SimulationConfig& config,
                         const SimulationResult& result);

// Writes via a temp file + rename so readers never observe partial output.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace mmfl
