#include <cmath>

#include "doctest.h"
#include "mmfl/config.hpp"
#include "mmfl/report.hpp"
#include "mmfl/simengine.hpp"

using namespace mmfl;

namespace {

SimulationConfig small_config() {
  auto config = default_config();
  config.roster.clients = 24;
  config.per_model_clients = 3;
  config.rounds_cap = 40;
  config.stop_at_target = false;
  return config;
}

}  // namespace

TEST_CASE("zero targets end the simulation immediately") {
  auto config = small_config();
  config.stop_at_target = true;
  for (auto& model : config.models) model.target_accuracy = 0.0;
  const auto result = run_simulation(config);
  CHECK(result.total_rounds == 0);
  CHECK(result.total_wall_clock == 0.0);
  for (const auto& summary : result.models) {
    CHECK(summary.reached);
    CHECK(summary.rounds_to_accuracy == 0);
  }
}

TEST_CASE("identical config and seed give identical results") {
  const auto config = small_config();
  const auto first = run_simulation(config);
  const auto second = run_simulation(config);
  REQUIRE(first.rounds.size() == second.rounds.size());
  CHECK(rounds_csv(config, first) == rounds_csv(config, second));
  CHECK(summary_json(config, first) == summary_json(config, second));
}

TEST_CASE("different seeds give different trajectories") {
  auto config = small_config();
  const auto first = run_simulation(config);
  config.seed = config.seed + 1;
  const auto second = run_simulation(config);
  CHECK(rounds_csv(config, first) != rounds_csv(config, second));
}

TEST_CASE("zero availability skips every round") {
  auto config = small_config();
  config.availability_rate = 0.0;
  config.rounds_cap = 10;
  const auto result = run_simulation(config);
  for (const auto& record : result.rounds) {
    CHECK(record.skipped);
    CHECK(record.participants == 0);
  }
  CHECK(result.total_wall_clock == 0.0);
}

TEST_CASE("accuracy is nondecreasing and clock strictly increases") {
  const auto config = small_config();
  const auto result = run_simulation(config);
  REQUIRE(!result.rounds.empty());
  std::vector<double> prev_acc(config.models.size(), 0.0);
  double prev_clock = 0.0;
  for (const auto& record : result.rounds) {
    if (record.skipped) continue;
    CHECK(record.cumulative_clock > prev_clock);
    prev_clock = record.cumulative_clock;
    CHECK(record.mean_idle_fraction >= 0.0);
    CHECK(record.mean_idle_fraction <= 1.0);
    REQUIRE(record.model_accuracy.size() == config.models.size());
    for (std::size_t j = 0; j < prev_acc.size(); ++j) {
      CHECK(record.model_accuracy[j] >= prev_acc[j]);
      CHECK(record.model_accuracy[j] <= config.models[j].a_max);
      prev_acc[j] = record.model_accuracy[j];
    }
  }
}

TEST_CASE("disabled batch adaptation freezes every pair") {
  auto config = small_config();
  config.batch_adaptation = false;
  config.rounds_cap = 15;
  Simulator simulator(config);
  for (int round = 1; round <= config.rounds_cap; ++round) {
    simulator.run_round(round);
  }
  for (const auto& client : simulator.clients()) {
    for (const auto& pair : client.pairs) {
      CHECK(pair.batch_size == config.m0);
      CHECK(pair.iterations == config.k0);
    }
  }
}

TEST_CASE("batch adaptation moves batches off the baseline") {
  auto config = small_config();
  config.rounds_cap = 15;
  Simulator simulator(config);
  for (int round = 1; round <= config.rounds_cap; ++round) {
    simulator.run_round(round);
  }
  bool moved = false;
  for (const auto& client : simulator.clients()) {
    for (const auto& pair : client.pairs) {
      CHECK(pair.batch_size >= config.m_min);
      CHECK(pair.batch_size <= config.m_max);
      CHECK(pair.iterations >= 1);
      if (pair.batch_size != config.m0) moved = true;
    }
  }
  CHECK(moved);
}

TEST_CASE("reached models stop being scheduled") {
  auto config = small_config();
  config.stop_at_target = true;
  config.models[0].target_accuracy = 0.05;  // reached almost immediately
  config.rounds_cap = 60;
  const auto result = run_simulation(config);
  REQUIRE(result.models[0].reached);
  const int done_round = result.models[0].rounds_to_accuracy;
  for (const auto& record : result.rounds) {
    if (record.skipped || record.round <= done_round) continue;
    CHECK(record.model_participants[0] == 0);
  }
}

TEST_CASE("participant counts respect the per-model budget") {
  const auto config = small_config();
  const auto result = run_simulation(config);
  const int budget =
      config.per_model_clients * static_cast<int>(config.models.size());
  for (const auto& record : result.rounds) {
    if (record.skipped) continue;
    CHECK(record.participants <= budget);
    CHECK(record.participants >= 1);
  }
}

TEST_CASE("eligibility masking holds through the roster") {
  const auto config = small_config();
  Simulator simulator(config);
  for (int round = 1; round <= 10; ++round) simulator.run_round(round);
  for (const auto& client : simulator.clients()) {
    for (const auto& pair : client.pairs) {
      if (pair.dataset_size == 0) {
        CHECK_FALSE(pair.eligible);
        CHECK(pair.selected_rounds == 0);
      }
    }
  }
}

TEST_CASE("selector kind string round-trip") {
  CHECK(selector_from_string("flammable") == SelectorKind::flammable);
  CHECK(selector_from_string("random") == SelectorKind::random);
  CHECK(selector_from_string("round_robin") == SelectorKind::round_robin);
  CHECK(selector_from_string("greedy") == SelectorKind::greedy);
  CHECK_THROWS_AS(selector_from_string("other"), ConfigError);
}

TEST_CASE("baseline selectors run end to end deterministically") {
  for (auto kind : {SelectorKind::random, SelectorKind::round_robin,
                    SelectorKind::greedy}) {
    auto config = small_config();
    config.selector = kind;
    config.rounds_cap = 12;
    const auto first = run_simulation(config);
    const auto second = run_simulation(config);
    CHECK(rounds_csv(config, first) == rounds_csv(config, second));
    for (const auto& record : first.rounds) {
      if (record.skipped) continue;
      CHECK(record.participants >= 1);
    }
  }
}

TEST_CASE("config validation rejects nonsense") {
  auto config = small_config();
  config.per_model_clients = 0;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = small_config();
  config.m_min = 50;
  config.m_max = 40;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = small_config();
  config.models.clear();
  CHECK_THROWS_AS(config.validate(), ConfigError);
  config = small_config();
  config.availability_rate = 1.5;
  CHECK_THROWS_AS(config.validate(), ConfigError);
}
