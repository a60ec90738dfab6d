#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "mmfl/config.hpp"
#include "mmfl/report.hpp"
#include "mmfl/scenario.hpp"

using namespace mmfl;

TEST_CASE("config JSON round-trips through the parser") {
  const auto base = default_config();
  const auto text = config_to_json(base);
  const auto parsed = parse_config(text);
  CHECK(config_to_json(parsed) == text);
}

namespace {

bool throws_mentioning(const std::string& text, const std::string& needle) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("unknown keys are rejected with a path") {
  CHECK(throws_mentioning(R"({"cleints": 10})", "cleints"));
  CHECK(throws_mentioning(R"({"deadline": {"pinit": 90}})", "deadline"));
  CHECK(throws_mentioning(R"({"models": [{"model_id": "m", "targit": 0.5}]})",
                          "models[0]"));
}

TEST_CASE("malformed JSON raises a configuration error") {
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"clients": "many"})"), ConfigError);
}

TEST_CASE("partial configs inherit defaults") {
  const auto config = parse_config(R"({"clients": 50, "alpha": 2.5})");
  CHECK(config.roster.clients == 50);
  CHECK(config.alpha == doctest::Approx(2.5));
  CHECK(config.per_model_clients == 10);
  CHECK(config.models.size() == 3);
  CHECK(config.selector == SelectorKind::flammable);
}

TEST_CASE("invalid values fail validation") {
  CHECK_THROWS_AS(parse_config(R"({"models": []})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"beta": 1.5})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"selector": "magic"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"availability_rate": -0.1})"), ConfigError);
}

TEST_CASE("load_config reads a file and reports missing paths") {
  const std::string path = "test_config_tmp.json";
  atomic_write(path, config_to_json(default_config()));
  const auto config = load_config(path);
  CHECK(config.models.size() == 3);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config("definitely_missing.json"), ConfigError);
}

TEST_CASE("profiles round-trip through JSON") {
  const auto ids = default_config().model_ids();
  const auto profiles = default_profiles(ids);
  const std::string path = "test_profiles_tmp.json";
  atomic_write(path, profiles_to_json(profiles));
  const auto loaded = load_profiles(path);
  std::remove(path.c_str());
  REQUIRE(loaded.size() == profiles.size());
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    CHECK(loaded[p].kind == profiles[p].kind);
    REQUIRE(loaded[p].curves.size() == profiles[p].curves.size());
    for (const auto& [model, curve] : profiles[p].curves) {
      const auto& other = loaded[p].curves.at(model);
      REQUIRE(other.size() == curve.size());
      for (std::size_t k = 0; k < curve.size(); ++k) {
        CHECK(other[k].batch == curve[k].batch);
        CHECK(other[k].samples_per_sec ==
              doctest::Approx(curve[k].samples_per_sec));
      }
    }
  }
}

TEST_CASE("generated rosters are deterministic per scenario seed") {
  const auto config = default_config();
  const auto ids = config.model_ids();
  const auto profiles = default_profiles(ids);
  RosterParams params;
  params.clients = 30;
  const auto first = generate_roster(params, ids, profiles, 42);
  const auto second = generate_roster(params, ids, profiles, 42);
  const auto other = generate_roster(params, ids, profiles, 43);
  REQUIRE(first.size() == 30);
  REQUIRE(second.size() == 30);
  bool differs = false;
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].device == second[i].device);
    REQUIRE(first[i].pairs.size() == ids.size());
    for (std::size_t j = 0; j < ids.size(); ++j) {
      CHECK(first[i].pairs[j].dataset_size == second[i].pairs[j].dataset_size);
      CHECK(first[i].pairs[j].heterogeneity ==
            second[i].pairs[j].heterogeneity);
      CHECK(first[i].pairs[j].eligible ==
            (first[i].pairs[j].dataset_size > 0));
      if (first[i].pairs[j].dataset_size != other[i].pairs[j].dataset_size) {
        differs = true;
      }
    }
  }
  CHECK(differs);
}

TEST_CASE("float formatting is stable at nine significant digits") {
  CHECK(format_g9(0.5) == "0.5");
  CHECK(format_g9(1.0 / 3.0) == "0.333333333");
  CHECK(format_g9(123456789.0) == "123456789");
  CHECK(format_g9(0.0) == "0");
}

TEST_CASE("lower median follows the fixed rule") {
  CHECK(lower_median({3.0, 1.0, 2.0}) == doctest::Approx(2.0));
  CHECK(lower_median({4.0, 1.0, 3.0, 2.0}) == doctest::Approx(2.0));
  CHECK(lower_median({7.0}) == doctest::Approx(7.0));
}

TEST_CASE("default arms cover the comparison experiment") {
  const auto arms = default_arms();
  REQUIRE(arms.size() == 4);
  CHECK(arms[0].name == "flammable");
  CHECK(arms[0].batch_adaptation);
  CHECK(arms[0].multi_model);
  for (std::size_t i = 1; i < arms.size(); ++i) {
    CHECK_FALSE(arms[i].batch_adaptation);
    CHECK_FALSE(arms[i].multi_model);
  }
}
