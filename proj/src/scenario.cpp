#include "mmfl/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "json.hpp"

namespace mmfl {

namespace {

using nlohmann::json;

int profile_index_for(DeviceKind kind,
                      const std::vector<DeviceProfile>& profiles) {
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    if (profiles[i].kind == kind) return static_cast<int>(i);
  }
  throw ConfigError(std::string("no device profile for kind ") +
                    to_string(kind));
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return doc;
}

}  // namespace

std::vector<DeviceProfile> default_profiles(
    const std::vector<std::string>& model_ids) {
  // Per-model complexity factor; heavier models process fewer samples/sec.
  auto factor = [](std::size_t idx) {
    const double factors[] = {1.0, 0.5, 0.25};
    return factors[idx % 3];
  };
  DeviceProfile gpu{DeviceKind::gpu, {}};
  DeviceProfile cpu{DeviceKind::cpu, {}};
  DeviceProfile mobile{DeviceKind::mobile, {}};
  for (std::size_t i = 0; i < model_ids.size(); ++i) {
    const double f = factor(i);
    gpu.curves[model_ids[i]] = {{10, 500 * f}, {40, 2000 * f}, {100, 5000 * f}};
    cpu.curves[model_ids[i]] = {{10, 300 * f}, {40, 560 * f}, {100, 900 * f}};
    mobile.curves[model_ids[i]] = {{10, 50 * f}, {40, 55 * f}, {100, 60 * f}};
  }
  for (auto* p : {&gpu, &cpu, &mobile}) p->validate();
  return {gpu, cpu, mobile};
}

std::vector<DeviceProfile> load_profiles(const std::string& path) {
  const json doc = load_json_file(path);
  if (!doc.is_array()) throw ConfigError(path + ": expected a JSON array");
  std::vector<DeviceProfile> profiles;
  auto profile_for = [&profiles](DeviceKind kind) -> DeviceProfile& {
    for (auto& p : profiles) {
      if (p.kind == kind) return p;
    }
    profiles.push_back(DeviceProfile{kind, {}});
    return profiles.back();
  };
  for (const auto& entry : doc) {
    const DeviceKind kind =
        device_kind_from_string(entry.at("device_kind").get<std::string>());
    const auto model_id = entry.at("model_id").get<std::string>();
    std::vector<ThroughputPoint> curve;
    for (const auto& point : entry.at("points")) {
      curve.push_back({point.at(0).get<int>(), point.at(1).get<double>()});
    }
    profile_for(kind).curves[model_id] = std::move(curve);
  }
  for (const auto& p : profiles) p.validate();
  return profiles;
}

std::string profiles_to_json(const std::vector<DeviceProfile>& profiles) {
  json doc = json::array();
  for (const auto& profile : profiles) {
    for (const auto& [model_id, curve] : profile.curves) {
      json points = json::array();
      for (const auto& point : curve) {
        points.push_back({point.batch, point.samples_per_sec});
      }
      doc.push_back({{"device_kind", to_string(profile.kind)},
                     {"model_id", model_id},
                     {"points", points}});
    }
  }
  return doc.dump(2) + "\n";
}

std::vector<ClientState> load_roster(
    const std::string& path, const std::vector<std::string>& model_ids,
    const std::vector<DeviceProfile>& profiles) {
  const json doc = load_json_file(path);
  if (!doc.is_array()) throw ConfigError(path + ": expected a JSON array");
  std::vector<ClientState> clients;
  for (const auto& entry : doc) {
    ClientState client;
    client.client_id = entry.at("client_id").get<std::string>();
    client.device =
        device_kind_from_string(entry.at("device_kind").get<std::string>());
    client.profile_index = profile_index_for(client.device, profiles);
    client.pairs.resize(model_ids.size());
    const auto& datasets = entry.at("datasets");
    const auto heterogeneity =
        entry.contains("heterogeneity") ? entry.at("heterogeneity") : json::object();
    for (std::size_t j = 0; j < model_ids.size(); ++j) {
      auto& pair = client.pairs[j];
      if (datasets.contains(model_ids[j])) {
        pair.dataset_size = datasets.at(model_ids[j]).get<std::int64_t>();
      }
      pair.eligible = pair.dataset_size > 0;
      if (heterogeneity.contains(model_ids[j])) {
        pair.heterogeneity = heterogeneity.at(model_ids[j]).get<double>();
        if (pair.heterogeneity <= 0.0) {
          throw ConfigError(path + ": heterogeneity must be positive for " +
                            client.client_id);
        }
      }
    }
    clients.push_back(std::move(client));
  }
  return clients;
}

std::vector<ClientState> generate_roster(
    const RosterParams& params, const std::vector<std::string>& model_ids,
    const std::vector<DeviceProfile>& profiles, std::uint64_t scenario_seed) {
  if (params.clients < 1) throw ConfigError("client count must be >= 1");
  if (params.dataset_size_min < 1 ||
      params.dataset_size_max < params.dataset_size_min) {
    throw ConfigError("invalid dataset size range");
  }
  std::mt19937_64 rng(scenario_seed);
  std::uniform_int_distribution<int> kind_dist(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> size_dist(
      params.dataset_size_min, params.dataset_size_max);
  std::lognormal_distribution<double> het_dist(0.0, params.heterogeneity_sigma);

  std::vector<ClientState> clients;
  clients.reserve(params.clients);
  for (int i = 0; i < params.clients; ++i) {
    ClientState client;
    client.client_id = "client_" + std::to_string(i);
    client.device = static_cast<DeviceKind>(kind_dist(rng));
    client.profile_index = profile_index_for(client.device, profiles);
    client.pairs.resize(model_ids.size());
    for (auto& pair : client.pairs) {
      const bool missing = unit(rng) < params.missing_data_fraction;
      pair.dataset_size = missing ? 0 : size_dist(rng);
      pair.eligible = pair.dataset_size > 0;
      pair.heterogeneity = het_dist(rng);
    }
    clients.push_back(std::move(client));
  }
  return clients;
}

}  // namespace mmfl
