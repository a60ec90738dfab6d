#include "mmfl/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mmfl {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) {
      throw ConfigError(path + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("field '" + key + "': " + e.what());
  }
}

ModelParams parse_model(const json& obj, const std::string& path,
                        const ModelParams& defaults) {
  reject_unknown_keys(obj, path,
                      {"model_id", "target_accuracy", "a_max", "rate",
                       "loss_scale", "gns"});
  ModelParams params = defaults;
  if (!obj.contains("model_id")) {
    throw ConfigError(path + ": model_id is required");
  }
  params.model_id = obj.at("model_id").get<std::string>();
  params.target_accuracy =
      get_or(obj, "target_accuracy", params.target_accuracy);
  params.a_max = get_or(obj, "a_max", params.a_max);
  params.rate = get_or(obj, "rate", params.rate);
  params.loss_scale = get_or(obj, "loss_scale", params.loss_scale);
  if (obj.contains("gns")) {
    const auto& gns = obj.at("gns");
    reject_unknown_keys(gns, path + ".gns", {"phi0", "growth", "ramp_rounds"});
    params.gns.phi0 = get_or(gns, "phi0", params.gns.phi0);
    params.gns.growth = get_or(gns, "growth", params.gns.growth);
    params.gns.ramp_rounds = get_or(gns, "ramp_rounds", params.gns.ramp_rounds);
  }
  return params;
}

}  // namespace

SimulationConfig parse_config(const std::string& text,
                              const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(origin + ": expected a JSON object");
  reject_unknown_keys(
      doc, origin,
      {"clients", "models", "per_model_clients", "m0", "k0", "m_min", "m_max",
       "alpha", "beta", "bias", "rounds_cap", "seed", "scenario_seed",
       "selector", "batch_adaptation", "multi_model", "stop_at_target",
       "iteration_rule", "availability_rate", "loss_dispersion", "deadline",
       "profiles_file", "roster_file", "missing_data_fraction",
       "dataset_size_min", "dataset_size_max", "heterogeneity_sigma"});

  SimulationConfig config = default_config();
  config.roster.clients = get_or(doc, "clients", config.roster.clients);
  if (doc.contains("models")) {
    const auto& models = doc.at("models");
    if (!models.is_array() || models.empty()) {
      throw ConfigError(origin + ".models: expected a nonempty array");
    }
    const SimulationConfig defaults = default_config();
    config.models.clear();
    for (std::size_t i = 0; i < models.size(); ++i) {
      // Unspecified per-model fields fall back to the matching default slot.
      const ModelParams& slot =
          defaults.models[std::min(i, defaults.models.size() - 1)];
      config.models.push_back(parse_model(
          models[i], origin + ".models[" + std::to_string(i) + "]", slot));
    }
  }
  config.per_model_clients =
      get_or(doc, "per_model_clients", config.per_model_clients);
  config.m0 = get_or(doc, "m0", config.m0);
  config.k0 = get_or(doc, "k0", config.k0);
  config.m_min = get_or(doc, "m_min", config.m_min);
  config.m_max = get_or(doc, "m_max", config.m_max);
  config.alpha = get_or(doc, "alpha", config.alpha);
  config.beta = get_or(doc, "beta", config.beta);
  if (doc.contains("bias")) {
    const auto& bias = doc.at("bias");
    reject_unknown_keys(bias, origin + ".bias", {"round_cv", "coverage"});
    config.bias.round_cv = get_or(bias, "round_cv", config.bias.round_cv);
    config.bias.coverage = get_or(bias, "coverage", config.bias.coverage);
  }
  config.rounds_cap = get_or(doc, "rounds_cap", config.rounds_cap);
  config.seed = get_or(doc, "seed", config.seed);
  config.scenario_seed = get_or(doc, "scenario_seed", config.scenario_seed);
  config.selector = selector_from_string(
      get_or<std::string>(doc, "selector", to_string(config.selector)));
  config.batch_adaptation =
      get_or(doc, "batch_adaptation", config.batch_adaptation);
  config.multi_model = get_or(doc, "multi_model", config.multi_model);
  config.stop_at_target = get_or(doc, "stop_at_target", config.stop_at_target);
  config.iteration_rule = iteration_rule_from_string(get_or<std::string>(
      doc, "iteration_rule", to_string(config.iteration_rule)));
  config.availability_rate =
      get_or(doc, "availability_rate", config.availability_rate);
  config.loss_dispersion =
      get_or(doc, "loss_dispersion", config.loss_dispersion);
  if (doc.contains("deadline")) {
    const auto& dl = doc.at("deadline");
    reject_unknown_keys(dl, origin + ".deadline",
                        {"p_init", "p_min", "epsilon", "window", "direction"});
    config.deadline.p_init = get_or(dl, "p_init", config.deadline.p_init);
    config.deadline.p_min = get_or(dl, "p_min", config.deadline.p_min);
    config.deadline.epsilon = get_or(dl, "epsilon", config.deadline.epsilon);
    config.deadline.window = get_or(dl, "window", config.deadline.window);
    config.deadline.direction = deadline_direction_from_string(
        get_or<std::string>(dl, "direction",
                            to_string(config.deadline.direction)));
  }
  config.profiles_file = get_or(doc, "profiles_file", config.profiles_file);
  config.roster_file = get_or(doc, "roster_file", config.roster_file);
  config.roster.missing_data_fraction = get_or(
      doc, "missing_data_fraction", config.roster.missing_data_fraction);
  config.roster.dataset_size_min =
      get_or(doc, "dataset_size_min", config.roster.dataset_size_min);
  config.roster.dataset_size_max =
      get_or(doc, "dataset_size_max", config.roster.dataset_size_max);
  config.roster.heterogeneity_sigma =
      get_or(doc, "heterogeneity_sigma", config.roster.heterogeneity_sigma);
  config.validate();
  return config;
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

std::string config_to_json(const SimulationConfig& config) {
  json models = json::array();
  for (const auto& m : config.models) {
    models.push_back({{"model_id", m.model_id},
                      {"target_accuracy", m.target_accuracy},
                      {"a_max", m.a_max},
                      {"rate", m.rate},
                      {"loss_scale", m.loss_scale},
                      {"gns",
                       {{"phi0", m.gns.phi0},
                        {"growth", m.gns.growth},
                        {"ramp_rounds", m.gns.ramp_rounds}}}});
  }
  json doc = {
      {"clients", config.roster.clients},
      {"models", models},
      {"per_model_clients", config.per_model_clients},
      {"m0", config.m0},
      {"k0", config.k0},
      {"m_min", config.m_min},
      {"m_max", config.m_max},
      {"alpha", config.alpha},
      {"beta", config.beta},
      {"bias",
       {{"round_cv", config.bias.round_cv},
        {"coverage", config.bias.coverage}}},
      {"rounds_cap", config.rounds_cap},
      {"seed", config.seed},
      {"scenario_seed", config.scenario_seed},
      {"selector", to_string(config.selector)},
      {"batch_adaptation", config.batch_adaptation},
      {"multi_model", config.multi_model},
      {"stop_at_target", config.stop_at_target},
      {"iteration_rule", to_string(config.iteration_rule)},
      {"availability_rate", config.availability_rate},
      {"loss_dispersion", config.loss_dispersion},
      {"deadline",
       {{"p_init", config.deadline.p_init},
        {"p_min", config.deadline.p_min},
        {"epsilon", config.deadline.epsilon},
        {"window", config.deadline.window},
        {"direction", to_string(config.deadline.direction)}}},
      {"profiles_file", config.profiles_file},
      {"roster_file", config.roster_file},
      {"missing_data_fraction", config.roster.missing_data_fraction},
      {"dataset_size_min", config.roster.dataset_size_min},
      {"dataset_size_max", config.roster.dataset_size_max},
      {"heterogeneity_sigma", config.roster.heterogeneity_sigma},
  };
  return doc.dump(2) + "\n";
}

std::vector<ExperimentArm> default_arms() {
  return {
      {"flammable", SelectorKind::flammable, true, true},
      {"random", SelectorKind::random, false, false},
      {"round_robin", SelectorKind::round_robin, false, false},
      {"greedy", SelectorKind::greedy, false, false},
  };
}

}  // namespace mmfl
