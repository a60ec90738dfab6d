#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmfl/domain.hpp"

namespace mmfl {

struct RosterParams {
  int clients = 200;
  double missing_data_fraction = 0.1;
  std::int64_t dataset_size_min = 500;
  std::int64_t dataset_size_max = 5000;
  double heterogeneity_sigma = 0.5;
};

// One profile per device kind, covering every listed model. Faster device
// kinds gain throughput with batch size; the mobile curve is nearly flat.
std::vector<DeviceProfile> default_profiles(
    const std::vector<std::string>& model_ids);

// Profiles file: array of {device_kind, model_id, points: [[batch, tput]..]}.
std::vector<DeviceProfile> load_profiles(const std::string& path);
std::string profiles_to_json(const std::vector<DeviceProfile>& profiles);

// Roster file: array of {client_id, device_kind, datasets: {model: size},
// heterogeneity: {model: h}}.
std::vector<ClientState> load_roster(const std::string& path,
                                     const std::vector<std::string>& model_ids,
                                     const std::vector<DeviceProfile>& profiles);

// Deterministic synthetic roster drawn from the scenario seed.
std::vector<ClientState> generate_roster(
    const RosterParams& params, const std::vector<std::string>& model_ids,
    const std::vector<DeviceProfile>& profiles, std::uint64_t scenario_seed);

}  // namespace mmfl
