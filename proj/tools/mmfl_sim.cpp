#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmfl/config.hpp"
#include "mmfl/experiment.hpp"
#include "mmfl/report.hpp"
#include "mmfl/scenario.hpp"

namespace {

using namespace mmfl;

SimulationConfig load_or_default(const std::string& path) {
  return path.empty() ? default_config() : load_config(path);
}

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
  std::vector<std::uint64_t> seeds;
  std::size_t begin = 0;
  while (begin <= list.size()) {
    const auto end = list.find(',', begin);
    const auto token = list.substr(
        begin, end == std::string::npos ? std::string::npos : end - begin);
    if (!token.empty()) seeds.push_back(std::stoull(token));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  if (seeds.empty()) throw ConfigError("empty seed list");
  return seeds;
}

int cmd_run(const std::string& config_path, std::int64_t seed,
            const std::string& out_dir) {
  SimulationConfig config = load_or_default(config_path);
  if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
  const auto result = run_simulation(config);
  atomic_write(out_dir + "/rounds.csv", rounds_csv(config, result));
  atomic_write(out_dir + "/summary.json", summary_json(config, result));
  std::printf("run: %d rounds, %.9g s simulated, outputs in %s\n",
              result.total_rounds, result.total_wall_clock, out_dir.c_str());
  return 0;
}

int cmd_compare(const std::string& config_path, const std::string& seed_list,
                const std::string& arm_list, const std::string& out_dir) {
  const SimulationConfig base = load_or_default(config_path);
  const auto seeds = parse_seeds(seed_list);
  std::vector<ExperimentArm> arms;
  if (arm_list.empty()) {
    arms = default_arms();
  } else {
    for (const auto& candidate : default_arms()) {
      if (arm_list.find(candidate.name) != std::string::npos) {
        arms.push_back(candidate);
      }
    }
    if (arms.empty()) throw ConfigError("no known arms in: " + arm_list);
  }
  const auto output = run_compare(base, arms, seeds);
  atomic_write(out_dir + "/comparison.csv", output.csv);
  for (const auto& [key, median] : output.median_speedup) {
    std::printf("median speedup vs %s on %s: %.9g\n", key.first.c_str(),
                key.second.c_str(), median);
  }
  std::printf("compare: outputs in %s\n", out_dir.c_str());
  return 0;
}

int cmd_validate_selector(int instances, int max_clients, int max_models,
                          std::int64_t seed, const std::string& out_dir) {
  const auto validation = validate_selector(
      instances, max_clients, max_models,
      seed >= 0 ? static_cast<std::uint64_t>(seed) : 1234);
  atomic_write(out_dir + "/oracle.csv", validation.csv);
  std::printf("validate-selector: %d instances, %d mismatches\n",
              validation.instances, validation.mismatches);
  return validation.mismatches == 0 ? 0 : 1;
}

int cmd_sweep_alpha(const std::string& config_path,
                    const std::string& seed_list, const std::string& out_dir) {
  const SimulationConfig base = load_or_default(config_path);
  const auto seeds = parse_seeds(seed_list);
  const auto output = run_alpha_sweep(base, {0.1, 1.0, 10.0}, seeds);
  atomic_write(out_dir + "/alpha_sweep.csv", output.csv);
  for (double alpha : output.alphas) {
    std::printf("alpha=%.9g: median tta %.9g, median final accuracy %.9g\n",
                alpha, output.median_tta.at(alpha),
                output.median_final_accuracy.at(alpha));
  }
  return 0;
}

int cmd_gen_profiles(const std::string& config_path, const std::string& out) {
  const SimulationConfig config = load_or_default(config_path);
  atomic_write(out, profiles_to_json(default_profiles(config.model_ids())));
  std::printf("gen-profiles: wrote %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-model federated learning scheduling simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string seed_list = "1,2,3,4,5";
  std::string arm_list;
  std::int64_t seed = -1;
  int instances = 1000;
  int max_clients = 5;
  int max_models = 3;

  auto* run = app.add_subcommand("run", "Run one simulation");
  run->add_option("--config", config_path, "Config JSON path");
  run->add_option("--seed", seed, "RNG seed override");
  run->add_option("--out", out_dir, "Output directory");

  auto* compare = app.add_subcommand("compare", "Run all arms across seeds");
  compare->add_option("--config", config_path, "Config JSON path");
  compare->add_option("--seeds", seed_list, "Comma-separated seeds");
  compare->add_option("--arms", arm_list, "Arm names (subset of defaults)");
  compare->add_option("--out", out_dir, "Output directory");

  auto* validate =
      app.add_subcommand("validate-selector", "Check solver against oracle");
  validate->add_option("--instances", instances, "Instance count");
  validate->add_option("--max-clients", max_clients, "Max clients");
  validate->add_option("--max-models", max_models, "Max models");
  validate->add_option("--seed", seed, "RNG seed");
  validate->add_option("--out", out_dir, "Output directory");

  auto* sweep = app.add_subcommand("sweep-alpha", "Uncertainty factor sweep");
  sweep->add_option("--config", config_path, "Config JSON path");
  sweep->add_option("--seeds", seed_list, "Comma-separated seeds");
  sweep->add_option("--out", out_dir, "Output directory");

  std::string profile_out = "profiles.json";
  auto* gen = app.add_subcommand("gen-profiles", "Write default device profiles");
  gen->add_option("--config", config_path, "Config JSON path");
  gen->add_option("--out", profile_out, "Output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, out_dir);
    if (compare->parsed())
      return cmd_compare(config_path, seed_list, arm_list, out_dir);
    if (validate->parsed())
      return cmd_validate_selector(instances, max_clients, max_models, seed,
                                   out_dir);
    if (sweep->parsed()) return cmd_sweep_alpha(config_path, seed_list, out_dir);
    if (gen->parsed()) return cmd_gen_profiles(config_path, profile_out);
  } catch (const mmfl::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
