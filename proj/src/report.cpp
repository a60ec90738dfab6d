#include "mmfl/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mmfl/config.hpp"

namespace mmfl {

std::string format_g9(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

double lower_median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of an empty list");
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

std::string rounds_csv(const SimulationConfig& config,
                       const SimulationResult& result) {
  std::ostringstream out;
  out << "round,skipped,wall_clock,cumulative_clock,deadline,percentile,"
         "participants,active_models,objective,relaxed,mean_idle_fraction";
  for (const auto& m : config.models) {
    out << ",acc_" << m.model_id << ",participants_" << m.model_id
        << ",mean_batch_" << m.model_id;
  }
  out << "\n";
  for (const auto& r : result.rounds) {
    out << r.round << ',' << (r.skipped ? 1 : 0) << ','
        << format_g9(r.wall_clock) << ',' << format_g9(r.cumulative_clock)
        << ',' << format_g9(r.deadline) << ',' << format_g9(r.percentile)
        << ',' << r.participants << ',' << r.active_models << ','
        << format_g9(r.objective) << ',' << (r.relaxed ? 1 : 0) << ','
        << format_g9(r.mean_idle_fraction);
    for (std::size_t j = 0; j < config.models.size(); ++j) {
      out << ',' << format_g9(r.model_accuracy[j]) << ','
          << r.model_participants[j] << ','
          << format_g9(r.model_mean_batch[j]);
    }
    out << "\n";
  }
  return out.str();
}

std::string summary_json(const SimulationConfig& config,
                         const SimulationResult& result) {
  nlohmann::json models = nlohmann::json::object();
  for (const auto& m : result.models) {
    nlohmann::json entry = {
        {"reached", m.reached},
        {"final_accuracy", format_g9(m.final_accuracy)},
    };
    if (m.reached) {
      entry["time_to_accuracy"] = format_g9(m.time_to_accuracy);
      entry["rounds_to_accuracy"] = m.rounds_to_accuracy;
    } else {
      entry["time_to_accuracy"] = nullptr;
      entry["rounds_to_accuracy"] = nullptr;
    }
    models[m.model_id] = entry;
  }
  nlohmann::json doc = {
      {"seed", config.seed},
      {"selector", to_string(config.selector)},
      {"total_rounds", result.total_rounds},
      {"total_wall_clock", format_g9(result.total_wall_clock)},
      {"mean_idle_fraction", format_g9(result.mean_idle_fraction)},
      {"time_to_accuracy", models},
      {"config", nlohmann::json::parse(config_to_json(config))},
  };
  return doc.dump(2) + "\n";
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

}  // namespace mmfl
