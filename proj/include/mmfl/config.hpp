#pragma once

#include <string>
#include <vector>

#include "mmfl/simengine.hpp"

namespace mmfl {

// Single JSON document; unknown keys are rejected with a field path.
SimulationConfig load_config(const std::string& path);
SimulationConfig parse_config(const std::string& text,
                              const std::string& origin = "<config>");
std::string config_to_json(const SimulationConfig& config);

struct ExperimentArm {
  std::string name;
  SelectorKind selector = SelectorKind::flammable;
  bool batch_adaptation = false;
  bool multi_model = false;
};

// flammable + the three baseline arms from the comparison experiment.
std::vector<ExperimentArm> default_arms();

}  // namespace mmfl
