#include "mmfl/selection.hpp"

#include <algorithm>
#include <numeric>

namespace mmfl {

namespace {

// Lexicographic (never-selected count, finite score) objective value.
struct Value {
  std::int64_t sentinels = 0;
  double finite = 0.0;

  Value operator+(const Value& o) const {
    return {sentinels + o.sentinels, finite + o.finite};
  }
  bool operator==(const Value& o) const {
    return sentinels == o.sentinels && finite == o.finite;
  }
  bool operator>(const Value& o) const {
    if (sentinels != o.sentinels) return sentinels > o.sentinels;
    return finite > o.finite;
  }
};

struct Bundle {
  std::uint32_t mask = 0;  // bit j => model j assigned
  Value value;
};

// Orders bundles so the client's row ascends lexicographically
// (model 0 is the most significant position).
std::uint32_t row_order_key(std::uint32_t mask, int num_models) {
  std::uint32_t key = 0;
  for (int j = 0; j < num_models; ++j) {
    if (mask & (1u << j)) key |= 1u << (num_models - 1 - j);
  }
  return key;
}

Value pair_value(double score) {
  if (is_never_selected(score)) return {1, 0.0};
  return {0, score};
}

// All nonempty model subsets a client can finish within the deadline,
// sorted in row order.
std::vector<Bundle> feasible_bundles(const SelectionInstance& inst,
                                     int client) {
  std::vector<int> models;
  for (int j = 0; j < inst.num_models; ++j) {
    if (inst.pair_feasible(client, j)) models.push_back(j);
  }
  std::vector<Bundle> bundles;
  const std::uint32_t limit = 1u << models.size();
  for (std::uint32_t pick = 1; pick < limit; ++pick) {
    if (!inst.allow_multi_model && (pick & (pick - 1)) != 0) continue;
    Bundle b;
    double total_time = 0.0;
    for (std::size_t idx = 0; idx < models.size(); ++idx) {
      if (!(pick & (1u << idx))) continue;
      const int j = models[idx];
      b.mask |= 1u << j;
      total_time += inst.time[client][j];
      b.value = b.value + pair_value(inst.score[client][j]);
    }
    if (total_time <= inst.deadline) bundles.push_back(b);
  }
  std::sort(bundles.begin(), bundles.end(),
            [&inst](const Bundle& a, const Bundle& b) {
              return row_order_key(a.mask, inst.num_models) <
                     row_order_key(b.mask, inst.num_models);
            });
  return bundles;
}

AssignmentMatrix empty_assignment(const SelectionInstance& inst) {
  AssignmentMatrix out;
  out.x.assign(inst.num_clients,
               std::vector<std::uint8_t>(inst.num_models, 0));
  out.time = inst.time;
  out.deadline = inst.deadline;
  return out;
}

void finalize(const SelectionInstance& inst, AssignmentMatrix& out) {
  out.objective = 0.0;
  out.sentinel_count = 0;
  out.participants = 0;
  for (int i = 0; i < inst.num_clients; ++i) {
    bool any = false;
    for (int j = 0; j < inst.num_models; ++j) {
      if (!out.x[i][j]) continue;
      any = true;
      const Value v = pair_value(inst.score[i][j]);
      out.sentinel_count += v.sentinels;
      out.objective += v.finite;
    }
    if (any) ++out.participants;
  }
}

}  // namespace

void SelectionInstance::validate() const {
  if (num_clients < 1 || num_models < 1) {
    throw ConfigError("selection instance needs clients and models");
  }
  auto conformable = [&](const auto& m) {
    return static_cast<int>(m.size()) == num_clients &&
           std::all_of(m.begin(), m.end(), [&](const auto& row) {
             return static_cast<int>(row.size()) == num_models;
           });
  };
  if (!conformable(score) || !conformable(time) || !conformable(eligible)) {
    throw ConfigError("selection matrices are not conformable");
  }
  if (deadline <= 0.0) throw ConfigError("deadline must be positive");
  if (required_clients < 1) throw ConfigError("required client count must be >= 1");
}

bool SelectionInstance::pair_feasible(int client, int model) const {
  return eligible[client][model] != 0 && time[client][model] <= deadline;
}

int SelectionInstance::feasible_client_count() const {
  int count = 0;
  for (int i = 0; i < num_clients; ++i) {
    for (int j = 0; j < num_models; ++j) {
      if (pair_feasible(i, j)) {
        ++count;
        break;
      }
    }
  }
  return count;
}

AssignmentMatrix solve_exact(const SelectionInstance& instance) {
  instance.validate();
  const int n = instance.num_clients;
  const int feasible = instance.feasible_client_count();
  const int target = std::min(instance.required_clients, feasible);
  const bool relaxed = feasible < instance.required_clients;

  std::vector<std::vector<Bundle>> bundles(n);
  for (int i = 0; i < n; ++i) bundles[i] = feasible_bundles(instance, i);

  // dp[i][p]: best value over clients i.. with exactly p participants.
  struct Cell {
    bool feasible = false;
    Value value;
  };
  std::vector<std::vector<Cell>> dp(n + 1,
                                    std::vector<Cell>(target + 1));
  dp[n][0].feasible = true;
  for (int i = n - 1; i >= 0; --i) {
    for (int p = 0; p <= target; ++p) {
      Cell best = dp[i + 1][p];  // client i idle
      if (p >= 1) {
        for (const Bundle& b : bundles[i]) {
          const Cell& tail = dp[i + 1][p - 1];
          if (!tail.feasible) continue;
          const Value v = b.value + tail.value;
          if (!best.feasible || v > best.value) {
            best.feasible = true;
            best.value = v;
          }
        }
      }
      dp[i][p] = best;
    }
  }

  AssignmentMatrix out = empty_assignment(instance);
  out.relaxed = relaxed;
  if (!dp[0][target].feasible) return out;  // only possible when target == 0

  // Walk forward taking the row-lexicographically smallest choice that still
  // achieves the optimal value; bit-identical sums make the equality exact.
  int p = target;
  for (int i = 0; i < n; ++i) {
    const Value need = dp[i][p].value;
    if (dp[i + 1][p].feasible && dp[i + 1][p].value == need) {
      continue;  // idle row is the smallest choice
    }
    bool taken = false;
    for (const Bundle& b : bundles[i]) {
      const Cell& tail = dp[i + 1][p - 1];
      if (!tail.feasible) continue;
      if (b.value + tail.value == need) {
        for (int j = 0; j < instance.num_models; ++j) {
          if (b.mask & (1u << j)) out.x[i][j] = 1;
        }
        --p;
        taken = true;
        break;
      }
    }
    if (!taken) throw DomainError("assignment reconstruction failed");
  }
  finalize(instance, out);
  return out;
}

AssignmentMatrix solve_brute_force(const SelectionInstance& instance) {
  instance.validate();
  const int n = instance.num_clients;
  const int m = instance.num_models;
  const int bits = n * m;
  if (bits > 20) {
    throw DomainError("brute-force oracle limited to 20 binary variables");
  }
  const int feasible = instance.feasible_client_count();
  const bool relaxed = feasible < instance.required_clients;

  AssignmentMatrix best = empty_assignment(instance);
  best.relaxed = relaxed;
  bool have_best = false;
  int best_participants = 0;
  Value best_value;

  const std::uint32_t limit = 1u << bits;
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    // Highest bit is x[0][0] so ascending masks scan matrices in
    // lexicographic order; the first optimum found wins ties.
    bool ok = true;
    int participants = 0;
    Value value;
    for (int i = 0; i < n && ok; ++i) {
      double total_time = 0.0;
      bool any = false;
      for (int j = 0; j < m; ++j) {
        const int bit = bits - 1 - (i * m + j);
        if (!(mask & (1u << bit))) continue;
        if (!instance.pair_feasible(i, j)) {
          ok = false;
          break;
        }
        if (!instance.allow_multi_model && any) {
          ok = false;
          break;
        }
        any = true;
        total_time += instance.time[i][j];
        value = value + pair_value(instance.score[i][j]);
      }
      if (total_time > instance.deadline) ok = false;
      if (any) ++participants;
    }
    if (!ok) continue;
    if (relaxed ? participants > instance.required_clients
                : participants != instance.required_clients) {
      continue;
    }
    const bool better =
        !have_best ||
        (relaxed && participants > best_participants) ||
        ((!relaxed || participants == best_participants) &&
         value > best_value);
    if (!better) continue;
    have_best = true;
    best_participants = participants;
    best_value = value;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        const int bit = bits - 1 - (i * m + j);
        best.x[i][j] = (mask & (1u << bit)) ? 1 : 0;
      }
    }
  }
  finalize(instance, best);
  return best;
}

namespace {

std::vector<int> feasible_clients(const SelectionInstance& inst) {
  std::vector<int> clients;
  for (int i = 0; i < inst.num_clients; ++i) {
    for (int j = 0; j < inst.num_models; ++j) {
      if (inst.pair_feasible(i, j)) {
        clients.push_back(i);
        break;
      }
    }
  }
  return clients;
}

int first_feasible_model(const SelectionInstance& inst, int client) {
  for (int j = 0; j < inst.num_models; ++j) {
    if (inst.pair_feasible(client, j)) return j;
  }
  return -1;
}

// Partial Fisher-Yates: picks `count` entries uniformly without replacement.
void draw_prefix(std::vector<int>& pool, std::size_t count,
                 std::mt19937_64& rng) {
  for (std::size_t i = 0; i < count && i + 1 < pool.size(); ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
}

}  // namespace

AssignmentMatrix select_random(const SelectionInstance& instance,
                               std::mt19937_64& rng) {
  instance.validate();
  AssignmentMatrix out = empty_assignment(instance);
  std::vector<int> pool = feasible_clients(instance);
  const auto want = static_cast<std::size_t>(instance.required_clients);
  out.relaxed = pool.size() < want;
  const std::size_t take = std::min(want, pool.size());
  draw_prefix(pool, take, rng);
  std::vector<int> chosen(pool.begin(), pool.begin() + take);
  std::sort(chosen.begin(), chosen.end());
  for (int i : chosen) {
    std::vector<int> models;
    for (int j = 0; j < instance.num_models; ++j) {
      if (instance.pair_feasible(i, j)) models.push_back(j);
    }
    std::uniform_int_distribution<std::size_t> pick(0, models.size() - 1);
    out.x[i][models[pick(rng)]] = 1;
  }
  finalize(instance, out);
  return out;
}

AssignmentMatrix select_round_robin(const SelectionInstance& instance,
                                    std::mt19937_64& rng) {
  instance.validate();
  AssignmentMatrix out = empty_assignment(instance);
  std::vector<int> pool = feasible_clients(instance);
  const auto want = static_cast<std::size_t>(instance.required_clients);
  out.relaxed = pool.size() < want;
  const std::size_t take = std::min(want, pool.size());
  draw_prefix(pool, pool.size(), rng);  // full shuffle
  pool.resize(take);

  // Contiguous groups whose sizes differ by at most one.
  const int m = instance.num_models;
  const std::size_t base = take / m;
  const std::size_t extra = take % m;
  std::size_t offset = 0;
  for (int g = 0; g < m; ++g) {
    const std::size_t size = base + (static_cast<std::size_t>(g) < extra);
    for (std::size_t k = 0; k < size; ++k) {
      const int client = pool[offset + k];
      const int model = instance.pair_feasible(client, g)
                            ? g
                            : first_feasible_model(instance, client);
      out.x[client][model] = 1;
    }
    offset += size;
  }
  finalize(instance, out);
  return out;
}

AssignmentMatrix select_greedy_per_model(const SelectionInstance& instance) {
  instance.validate();
  AssignmentMatrix out = empty_assignment(instance);
  std::vector<bool> used(instance.num_clients, false);
  int assigned = 0;
  bool progress = true;
  while (assigned < instance.required_clients && progress) {
    progress = false;
    for (int j = 0; j < instance.num_models &&
                    assigned < instance.required_clients;
         ++j) {
      int best_client = -1;
      for (int i = 0; i < instance.num_clients; ++i) {
        if (used[i] || !instance.pair_feasible(i, j)) continue;
        if (best_client < 0 ||
            pair_value(instance.score[i][j]) >
                pair_value(instance.score[best_client][j])) {
          best_client = i;
        }
      }
      if (best_client < 0) continue;
      used[best_client] = true;
      out.x[best_client][j] = 1;
      ++assigned;
      progress = true;
    }
  }
  out.relaxed = assigned < instance.required_clients;
  finalize(instance, out);
  return out;
}

}  // namespace mmfl
