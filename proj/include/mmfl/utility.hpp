#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mmfl/domain.hpp"

namespace mmfl {

// |B| * sqrt((1/|B|) * sum L(b)^2)
double data_utility(std::span<const double> losses);

// D / t
double system_utility(double deadline, double exec_time);

// Max-normalizes each vector over its finite entries, then multiplies
// componentwise. kNeverSelected entries propagate unchanged.
std::vector<double> combined_utilities(const std::vector<double>& u_sys,
                                       const std::vector<double>& u_data);

// U + alpha * sqrt(R / r); r == 0 yields kNeverSelected.
double boosted_score(double utility, double alpha, int round, int times_selected);

// Log-normal per-sample losses with median center_loss * heterogeneity and
// the given dispersion; a zero center collapses to all-zero losses.
std::vector<double> synthetic_losses(double center_loss, double heterogeneity,
                                     std::int64_t count, double dispersion,
                                     std::mt19937_64& rng);

}  // namespace mmfl
