#include "mmfl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "mmfl/report.hpp"

namespace mmfl {

int experiment_threads() {
  const char* env = std::getenv("MMFL_SIM_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n > 0 ? n : 1;
}

SimulationConfig apply_arm(SimulationConfig config, const ExperimentArm& arm) {
  config.selector = arm.selector;
  config.batch_adaptation = arm.batch_adaptation;
  config.multi_model = arm.multi_model;
  return config;
}

namespace {

// Runs the prepared configs with a shared work queue; results land in their
// original slots so output order never depends on scheduling.
std::vector<SimulationResult> run_all(
    const std::vector<SimulationConfig>& configs) {
  std::vector<SimulationResult> results(configs.size());
  const int threads =
      std::min<int>(experiment_threads(), static_cast<int>(configs.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < configs.size(); ++i) {
      results[i] = run_simulation(configs[i]);
    }
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < configs.size();
           i = next.fetch_add(1)) {
        results[i] = run_simulation(configs[i]);
      }
    });
  }
  for (auto& worker : pool) worker.join();
  return results;
}

const ModelSummary& model_summary(const SimulationResult& result,
                                  const std::string& model_id) {
  for (const auto& m : result.models) {
    if (m.model_id == model_id) return m;
  }
  throw DomainError("missing model summary for " + model_id);
}

}  // namespace

CompareOutput run_compare(const SimulationConfig& base,
                          const std::vector<ExperimentArm>& arms,
                          const std::vector<std::uint64_t>& seeds) {
  if (arms.empty() || seeds.empty()) {
    throw ConfigError("compare needs at least one arm and one seed");
  }
  std::vector<SimulationConfig> configs;
  CompareOutput out;
  for (const auto& arm : arms) {
    for (auto seed : seeds) {
      SimulationConfig config = apply_arm(base, arm);
      config.seed = seed;
      configs.push_back(config);
      out.runs.push_back({arm.name, seed, {}});
    }
  }
  auto results = run_all(configs);
  for (std::size_t i = 0; i < results.size(); ++i) {
    out.runs[i].result = std::move(results[i]);
  }

  auto find_run = [&out](const std::string& arm,
                         std::uint64_t seed) -> const ArmRun& {
    for (const auto& run : out.runs) {
      if (run.arm == arm && run.seed == seed) return run;
    }
    throw DomainError("missing run for arm " + arm);
  };

  std::ostringstream csv;
  csv << "arm,seed,model_id,reached,time_to_accuracy,rounds_to_accuracy,"
         "final_accuracy,mean_idle_fraction,speedup_vs_flammable\n";
  const bool have_flammable =
      std::any_of(arms.begin(), arms.end(),
                  [](const ExperimentArm& a) { return a.name == "flammable"; });
  for (const auto& arm : arms) {
    for (auto seed : seeds) {
      const ArmRun& run = find_run(arm.name, seed);
      for (const auto& m : base.models) {
        const auto& summary = model_summary(run.result, m.model_id);
        csv << arm.name << ',' << seed << ',' << m.model_id << ','
            << (summary.reached ? 1 : 0) << ',';
        if (summary.reached) csv << format_g9(summary.time_to_accuracy);
        csv << ',';
        if (summary.reached) csv << summary.rounds_to_accuracy;
        csv << ',' << format_g9(summary.final_accuracy) << ','
            << format_g9(run.result.mean_idle_fraction) << ',';
        if (have_flammable && arm.name != "flammable") {
          const auto& reference =
              model_summary(find_run("flammable", seed).result, m.model_id);
          if (summary.reached && reference.reached &&
              reference.time_to_accuracy > 0.0) {
            csv << format_g9(summary.time_to_accuracy /
                             reference.time_to_accuracy);
          }
        }
        csv << "\n";
      }
    }
  }
  if (have_flammable) {
    for (const auto& arm : arms) {
      if (arm.name == "flammable") continue;
      for (const auto& m : base.models) {
        std::vector<double> ratios;
        for (auto seed : seeds) {
          const auto& baseline =
              model_summary(find_run(arm.name, seed).result, m.model_id);
          const auto& reference =
              model_summary(find_run("flammable", seed).result, m.model_id);
          if (baseline.reached && reference.reached &&
              reference.time_to_accuracy > 0.0) {
            ratios.push_back(baseline.time_to_accuracy /
                             reference.time_to_accuracy);
          }
        }
        if (ratios.empty()) continue;
        const double median = lower_median(ratios);
        out.median_speedup[{arm.name, m.model_id}] = median;
        csv << arm.name << ",median," << m.model_id << ",,,,,,"
            << format_g9(median) << "\n";
      }
    }
  }
  out.csv = csv.str();
  return out;
}

AlphaSweepOutput run_alpha_sweep(const SimulationConfig& base,
                                 const std::vector<double>& alphas,
                                 const std::vector<std::uint64_t>& seeds) {
  if (alphas.empty() || seeds.empty()) {
    throw ConfigError("alpha sweep needs alphas and seeds");
  }
  std::vector<SimulationConfig> configs;
  for (double alpha : alphas) {
    for (auto seed : seeds) {
      SimulationConfig config = base;
      config.alpha = alpha;
      config.seed = seed;
      config.stop_at_target = false;  // fixed horizon for comparable accuracy
      configs.push_back(config);
    }
  }
  const auto results = run_all(configs);

  AlphaSweepOutput out;
  out.alphas = alphas;
  std::ostringstream csv;
  csv << "alpha,seed,model_id,reached,time_to_accuracy,final_accuracy\n";
  std::size_t idx = 0;
  for (double alpha : alphas) {
    // Per-model medians over seeds, then averaged across models.
    std::vector<std::vector<double>> ttas(base.models.size());
    std::vector<std::vector<double>> accs(base.models.size());
    for (auto seed : seeds) {
      const auto& result = results[idx++];
      for (std::size_t j = 0; j < base.models.size(); ++j) {
        const auto& summary =
            model_summary(result, base.models[j].model_id);
        csv << format_g9(alpha) << ',' << seed << ','
            << base.models[j].model_id << ',' << (summary.reached ? 1 : 0)
            << ',';
        if (summary.reached) {
          csv << format_g9(summary.time_to_accuracy);
          ttas[j].push_back(summary.time_to_accuracy);
        }
        csv << ',' << format_g9(summary.final_accuracy) << "\n";
        accs[j].push_back(summary.final_accuracy);
      }
    }
    double tta_sum = 0.0;
    double acc_sum = 0.0;
    int tta_models = 0;
    for (std::size_t j = 0; j < base.models.size(); ++j) {
      if (!ttas[j].empty()) {
        tta_sum += lower_median(ttas[j]);
        ++tta_models;
      }
      acc_sum += lower_median(accs[j]);
    }
    out.median_tta[alpha] =
        tta_models > 0 ? tta_sum / tta_models
                       : std::numeric_limits<double>::infinity();
    out.median_final_accuracy[alpha] =
        acc_sum / static_cast<double>(base.models.size());
    csv << format_g9(alpha) << ",median,all,,"
        << format_g9(out.median_tta[alpha]) << ','
        << format_g9(out.median_final_accuracy[alpha]) << "\n";
  }
  out.csv = csv.str();
  return out;
}

SelectionInstance random_instance(std::mt19937_64& rng, int max_clients,
                                  int max_models) {
  std::uniform_int_distribution<int> clients_dist(1, max_clients);
  std::uniform_int_distribution<int> models_dist(1, max_models);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> score_dist(0, 1000);
  std::uniform_real_distribution<double> time_dist(0.5, 10.0);

  SelectionInstance inst;
  inst.num_clients = clients_dist(rng);
  inst.num_models = models_dist(rng);
  inst.score.assign(inst.num_clients, std::vector<double>(inst.num_models));
  inst.time.assign(inst.num_clients, std::vector<double>(inst.num_models));
  inst.eligible.assign(inst.num_clients,
                       std::vector<std::uint8_t>(inst.num_models, 0));
  for (int i = 0; i < inst.num_clients; ++i) {
    for (int j = 0; j < inst.num_models; ++j) {
      inst.eligible[i][j] = unit(rng) < 0.85;
      inst.time[i][j] = time_dist(rng);
      // Dyadic scores (1/64 grid) keep objective sums exact.
      inst.score[i][j] = unit(rng) < 0.15 ? kNeverSelected
                                          : score_dist(rng) / 64.0;
    }
  }
  inst.deadline = time_dist(rng) * (1.0 + unit(rng) * inst.num_models);
  std::uniform_int_distribution<int> s_dist(
      1, std::max(1, inst.num_clients + 1));  // occasionally infeasible
  inst.required_clients = s_dist(rng);
  inst.allow_multi_model = unit(rng) < 0.8;
  return inst;
}

OracleValidation validate_selector(int instances, int max_clients,
                                   int max_models, std::uint64_t seed) {
  if (instances < 1 || max_clients < 1 || max_models < 1) {
    throw ConfigError("validate-selector needs positive counts");
  }
  if (max_clients * max_models > 20) {
    throw ConfigError("oracle limited to max_clients * max_models <= 20");
  }
  std::mt19937_64 rng(seed);
  OracleValidation out;
  out.instances = instances;
  std::ostringstream csv;
  csv << "instance_id,n,m,objective_exact,objective_oracle,equal\n";
  for (int id = 0; id < instances; ++id) {
    const auto inst = random_instance(rng, max_clients, max_models);
    const auto exact = solve_exact(inst);
    const auto oracle = solve_brute_force(inst);
    const bool equal = exact.objective == oracle.objective &&
                       exact.sentinel_count == oracle.sentinel_count &&
                       exact.participants == oracle.participants &&
                       exact.relaxed == oracle.relaxed && exact.x == oracle.x;
    if (!equal) ++out.mismatches;
    csv << id << ',' << inst.num_clients << ',' << inst.num_models << ','
        << format_g9(exact.objective) << ',' << format_g9(oracle.objective)
        << ',' << (equal ? 1 : 0) << "\n";
  }
  out.csv = csv.str();
  return out;
}

}  // namespace mmfl
