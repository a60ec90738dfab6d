#include "mmfl/simengine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mmfl/utility.hpp"

namespace mmfl {

SelectorKind selector_from_string(const std::string& name) {
  if (name == "flammable") return SelectorKind::flammable;
  if (name == "random") return SelectorKind::random;
  if (name == "round_robin") return SelectorKind::round_robin;
  if (name == "greedy") return SelectorKind::greedy;
  throw ConfigError("unknown selector: " + name);
}

const char* to_string(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::flammable:
      return "flammable";
    case SelectorKind::random:
      return "random";
    case SelectorKind::round_robin:
      return "round_robin";
    case SelectorKind::greedy:
      return "greedy";
  }
  return "unknown";
}

void SimulationConfig::validate() const {
  if (models.empty()) throw ConfigError("at least one model is required");
  for (const auto& m : models) {
    if (m.model_id.empty()) throw ConfigError("model_id must be nonempty");
    if (m.a_max <= 0.0 || m.a_max > 1.0) {
      throw ConfigError("a_max must be in (0, 1]");
    }
    if (m.target_accuracy < 0.0 || m.target_accuracy > m.a_max) {
      throw ConfigError("target accuracy must be in [0, a_max]");
    }
    if (m.rate <= 0.0) throw ConfigError("learning rate constant must be > 0");
    if (m.loss_scale <= 0.0) throw ConfigError("loss scale must be > 0");
    if (m.gns.phi0 <= 0.0) throw ConfigError("gns phi0 must be > 0");
  }
  if (per_model_clients < 1) throw ConfigError("per_model_clients must be >= 1");
  if (m0 < 1 || k0 < 1) throw ConfigError("m0 and k0 must be >= 1");
  if (m_min < 1 || m_max < m_min) throw ConfigError("invalid batch range");
  if (beta < 0.0 || beta >= 1.0) throw ConfigError("beta must be in [0, 1)");
  if (rounds_cap < 0) throw ConfigError("rounds cap must be >= 0");
  if (availability_rate < 0.0 || availability_rate > 1.0) {
    throw ConfigError("availability rate must be in [0, 1]");
  }
  if (loss_dispersion < 0.0) throw ConfigError("loss dispersion must be >= 0");
}

std::vector<std::string> SimulationConfig::model_ids() const {
  std::vector<std::string> ids;
  ids.reserve(models.size());
  for (const auto& m : models) ids.push_back(m.model_id);
  return ids;
}

SimulationConfig default_config() {
  SimulationConfig config;
  auto model = [](std::string id, double target, double a_max, double rate,
                  double loss_scale) {
    ModelParams p;
    p.model_id = std::move(id);
    p.target_accuracy = target;
    p.a_max = a_max;
    p.rate = rate;
    p.loss_scale = loss_scale;
    p.gns = {10.0, 100.0, 300};
    return p;
  };
  config.models = {
      model("model_a", 0.60, 0.90, 3e-6, 2.0),
      model("model_b", 0.55, 0.85, 1.5e-6, 2.5),
      model("model_c", 0.50, 0.80, 2e-6, 2.2),
  };
  return config;
}

Simulator::Simulator(SimulationConfig config)
    : config_(std::move(config)),
      controller_(config_.deadline),
      rng_(config_.seed) {
  config_.validate();
  const auto ids = config_.model_ids();
  profiles_ = config_.profiles_file.empty() ? default_profiles(ids)
                                            : load_profiles(config_.profiles_file);
  clients_ = config_.roster_file.empty()
                 ? generate_roster(config_.roster, ids, profiles_,
                                   config_.scenario_seed)
                 : load_roster(config_.roster_file, ids, profiles_);
  for (auto& client : clients_) {
    for (auto& pair : client.pairs) {
      pair.batch_size = config_.m0;
      pair.iterations = config_.k0;
    }
  }
  models_.reserve(config_.models.size());
  for (const auto& params : config_.models) {
    ModelState state;
    state.params = params;
    state.active = state.accuracy < params.target_accuracy;
    if (!state.active) {
      state.rounds_to_accuracy = 0;
      state.time_to_accuracy = 0.0;
    }
    models_.push_back(state);
  }
}

bool Simulator::available(int client, std::mt19937_64& rng) const {
  (void)client;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return unit(rng) < config_.availability_rate;
}

double Simulator::throughput_of(const ClientState& client, int model,
                                int batch) const {
  return throughput(profiles_[client.profile_index],
                    config_.models[model].model_id, batch);
}

void Simulator::simulate_training(int round, int client, int model,
                                  double exec_time, double deadline,
                                  std::vector<std::vector<double>>& progress) {
  auto& pair = clients_[client].pairs[model];
  auto& state = models_[model];
  const double phi = state.params.gns.at(round);

  const double sigma =
      static_cast<double>(pair.batch_size) * pair.iterations *
      relative_efficiency(phi, config_.m0, pair.batch_size);
  progress[model].push_back(sigma);
  pair.cumulative_progress += sigma;

  const std::int64_t samples = std::min<std::int64_t>(
      static_cast<std::int64_t>(pair.batch_size) * pair.iterations,
      pair.dataset_size);
  const auto losses = synthetic_losses(state.loss(), pair.heterogeneity,
                                       samples, config_.loss_dispersion, rng_);
  pair.reported_data_utility = data_utility(losses);
  pair.reported_sys_utility = system_utility(deadline, exec_time);
  pair.last_report_round = round;
  ++pair.selected_rounds;
}

namespace {

double coefficient_of_variation(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  if (mean <= 0.0) return 0.0;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= values.size();
  return std::sqrt(var) / mean;
}

}  // namespace

void Simulator::advance_model(int model, const std::vector<double>& progress) {
  if (progress.empty()) return;
  auto& state = models_[model];
  const double total =
      std::accumulate(progress.begin(), progress.end(), 0.0);
  double effective = total;
  if (config_.bias.round_cv) {
    const double cv = coefficient_of_variation(progress);
    effective = total * std::max(0.0, 1.0 - config_.beta * cv);
  }
  state.cumulative_progress += effective;

  double attainable = state.params.a_max;
  if (config_.bias.coverage) {
    std::vector<double> contributions;
    for (const auto& client : clients_) {
      const auto& pair = client.pairs[model];
      if (pair.eligible) contributions.push_back(pair.cumulative_progress);
    }
    const double cv = coefficient_of_variation(contributions);
    attainable *= 1.0 - config_.beta * cv / (1.0 + cv);
  }
  const double raw = attainable * (1.0 - std::exp(-state.params.rate *
                                                  state.cumulative_progress));
  state.accuracy = std::max(state.accuracy, raw);
}

std::optional<RoundRecord> Simulator::run_round(int round) {
  const int num_models = static_cast<int>(models_.size());
  std::vector<int> active;
  for (int j = 0; j < num_models; ++j) {
    if (models_[j].active) active.push_back(j);
  }
  if (active.empty()) return std::nullopt;
  const int num_active = static_cast<int>(active.size());
  const int num_clients = static_cast<int>(clients_.size());

  RoundRecord record;
  record.round = round;
  record.active_models = num_active;
  record.model_accuracy.resize(num_models);
  record.model_participants.assign(num_models, 0);
  record.model_mean_batch.assign(num_models, 0.0);

  std::vector<std::uint8_t> avail(num_clients, 0);
  for (int i = 0; i < num_clients; ++i) avail[i] = available(i, rng_);

  SelectionInstance instance;
  instance.num_clients = num_clients;
  instance.num_models = num_active;
  instance.allow_multi_model = config_.multi_model;
  instance.required_clients = config_.per_model_clients * num_active;
  instance.score.assign(num_clients, std::vector<double>(num_active, 0.0));
  instance.time.assign(num_clients, std::vector<double>(num_active, 0.0));
  instance.eligible.assign(num_clients,
                           std::vector<std::uint8_t>(num_active, 0));

  std::vector<double> all_times;
  for (int i = 0; i < num_clients; ++i) {
    for (int a = 0; a < num_active; ++a) {
      const int j = active[a];
      const auto& pair = clients_[i].pairs[j];
      if (!avail[i] || !pair.eligible) continue;
      const double t =
          static_cast<double>(pair.iterations) * pair.batch_size /
          throughput_of(clients_[i], j, pair.batch_size);
      instance.eligible[i][a] = 1;
      instance.time[i][a] = t;
      all_times.push_back(t);
    }
  }
  if (all_times.empty()) {
    record.skipped = true;
    record.percentile = controller_.percentile();
    record.cumulative_clock = cumulative_clock_;
    for (int j = 0; j < num_models; ++j) {
      record.model_accuracy[j] = models_[j].accuracy;
    }
    return record;
  }

  const double p = controller_.update_percentile(round - 1);
  const double deadline = compute_deadline(all_times, p);
  instance.deadline = deadline;
  record.percentile = p;
  record.deadline = deadline;

  // Boosted scores from the utilities reported in each client's last
  // participated round.
  for (int a = 0; a < num_active; ++a) {
    const int j = active[a];
    std::vector<double> u_sys(num_clients, 0.0), u_data(num_clients, 0.0);
    for (int i = 0; i < num_clients; ++i) {
      if (!instance.eligible[i][a]) continue;
      const auto& pair = clients_[i].pairs[j];
      if (pair.selected_rounds == 0) {
        u_sys[i] = kNeverSelected;
        u_data[i] = kNeverSelected;
      } else {
        u_sys[i] = pair.reported_sys_utility;
        u_data[i] = pair.reported_data_utility;
      }
    }
    const auto combined = combined_utilities(u_sys, u_data);
    for (int i = 0; i < num_clients; ++i) {
      if (!instance.eligible[i][a]) continue;
      const auto& pair = clients_[i].pairs[j];
      instance.score[i][a] = boosted_score(
          is_never_selected(combined[i]) ? 0.0 : combined[i], config_.alpha,
          round, pair.selected_rounds);
    }
  }

  AssignmentMatrix assignment;
  switch (config_.selector) {
    case SelectorKind::flammable:
      assignment = solve_exact(instance);
      break;
    case SelectorKind::random:
      assignment = select_random(instance, rng_);
      break;
    case SelectorKind::round_robin:
      assignment = select_round_robin(instance, rng_);
      break;
    case SelectorKind::greedy:
      assignment = select_greedy_per_model(instance);
      break;
  }
  record.objective = assignment.objective;
  record.relaxed = assignment.relaxed;
  record.participants = assignment.participants;

  std::vector<std::vector<double>> progress(num_models);
  std::vector<double> busy(num_clients, 0.0);
  std::vector<int> batch_sum(num_models, 0);
  for (int i = 0; i < num_clients; ++i) {
    for (int a = 0; a < num_active; ++a) {
      if (!assignment.x[i][a]) continue;
      const int j = active[a];
      const double t = instance.time[i][a];
      busy[i] += t;
      ++record.model_participants[j];
      batch_sum[j] += clients_[i].pairs[j].batch_size;
      simulate_training(round, i, j, t, deadline, progress);
      if (config_.batch_adaptation) {
        auto& pair = clients_[i].pairs[j];
        const auto plan = optimize_batch(
            models_[j].params.gns.at(round), config_.m0, config_.k0,
            profiles_[clients_[i].profile_index], config_.models[j].model_id,
            config_.m_min, config_.m_max, config_.iteration_rule);
        pair.batch_size = plan.batch_size;
        pair.iterations = plan.iterations;
      }
    }
  }
  for (int j = 0; j < num_models; ++j) {
    if (record.model_participants[j] > 0) {
      record.model_mean_batch[j] =
          static_cast<double>(batch_sum[j]) / record.model_participants[j];
    }
  }

  for (int j : active) advance_model(j, progress[j]);

  double wall = 0.0;
  for (int i = 0; i < num_clients; ++i) {
    if (busy[i] > 0.0) wall = std::max(wall, busy[i]);
  }
  record.wall_clock = wall;
  cumulative_clock_ += wall;
  record.cumulative_clock = cumulative_clock_;

  if (wall > 0.0 && record.participants > 0) {
    double idle_sum = 0.0;
    for (int i = 0; i < num_clients; ++i) {
      bool selected = false;
      for (int a = 0; a < num_active; ++a) selected |= assignment.x[i][a] != 0;
      if (selected) idle_sum += (wall - busy[i]) / wall;
    }
    record.mean_idle_fraction = idle_sum / record.participants;
    if (num_active >= 2) {
      idle_fraction_sum_ += record.mean_idle_fraction;
      ++idle_fraction_rounds_;
    }
  }

  double test_loss = 0.0;
  for (int j : active) test_loss += models_[j].loss();
  test_loss /= num_active;
  controller_.record_signal(std::max(0.0, test_loss), deadline);

  for (int j : active) {
    auto& state = models_[j];
    if (state.rounds_to_accuracy < 0 &&
        state.accuracy >= state.params.target_accuracy) {
      state.rounds_to_accuracy = round;
      state.time_to_accuracy = cumulative_clock_;
    }
    if (config_.stop_at_target &&
        state.accuracy >= state.params.target_accuracy) {
      state.active = false;
    }
  }
  for (int j = 0; j < num_models; ++j) {
    record.model_accuracy[j] = models_[j].accuracy;
  }
  return record;
}

SimulationResult Simulator::run() {
  SimulationResult result;
  for (int round = 1; round <= config_.rounds_cap; ++round) {
    auto record = run_round(round);
    if (!record) break;
    result.rounds.push_back(std::move(*record));
  }
  result.total_rounds = static_cast<int>(result.rounds.size());
  result.total_wall_clock = cumulative_clock_;
  result.mean_idle_fraction =
      idle_fraction_rounds_ > 0 ? idle_fraction_sum_ / idle_fraction_rounds_
                                : 0.0;
  for (const auto& state : models_) {
    ModelSummary summary;
    summary.model_id = state.params.model_id;
    summary.reached = state.rounds_to_accuracy >= 0;
    summary.time_to_accuracy = state.time_to_accuracy;
    summary.rounds_to_accuracy = state.rounds_to_accuracy;
    summary.final_accuracy = state.accuracy;
    result.models.push_back(summary);
  }
  return result;
}

SimulationResult run_simulation(const SimulationConfig& config) {
  Simulator sim(config);
  return sim.run();
}

}  // namespace mmfl
