#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mmfl/domain.hpp"

namespace mmfl {

struct SelectionInstance {
  int num_clients = 0;
  int num_models = 0;
  std::vector<std::vector<double>> score;          // boosted; may be kNeverSelected
  std::vector<std::vector<double>> time;           // seconds per pair
  std::vector<std::vector<std::uint8_t>> eligible; // x~_{i,j}
  double deadline = 0.0;
  int required_clients = 0;                        // S
  bool allow_multi_model = true;

  void validate() const;
  bool pair_feasible(int client, int model) const;
  // Clients with at least one feasible pair.
  int feasible_client_count() const;
};

// Exact maximizer of the summed scores subject to the per-client time budget,
// the exactly-S-participants constraint, and eligibility. Never-selected
// (infinite) scores are handled lexicographically: the count of such pairs is
// maximized before the finite score. When fewer than S clients are feasible
// the participant constraint is relaxed to "as many as possible" and the
// result is flagged. Ties resolve to the lexicographically smallest matrix.
AssignmentMatrix solve_exact(const SelectionInstance& instance);

// Exhaustive enumeration over all binary matrices; same objective and
// tie-break as solve_exact. Refuses instances above 20 binary variables.
AssignmentMatrix solve_brute_force(const SelectionInstance& instance);

// FedAvg-style baseline: S uniformly chosen feasible clients, each given one
// uniformly chosen feasible model.
AssignmentMatrix select_random(const SelectionInstance& instance,
                               std::mt19937_64& rng);

// Shuffles clients, takes S, splits them into num_models contiguous groups
// and maps group g to model g; infeasible pairs fall back to the client's
// first feasible model.
AssignmentMatrix select_round_robin(const SelectionInstance& instance,
                                    std::mt19937_64& rng);

// Single-model-engagement baseline: models take turns claiming the
// highest-score unassigned feasible client until S clients are used.
AssignmentMatrix select_greedy_per_model(const SelectionInstance& instance);

}  // namespace mmfl
