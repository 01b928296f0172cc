#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "ltc/core_math.hpp"

namespace ltc {

/// One round of a run: decision x_t, loss f_t(x_t), constraint values g_i(x_t)
/// and the norm of the dual iterate.
struct RunRecord {
  std::size_t t;
  Vec x;
  double loss;
  Vec g_values;
  double lambda_norm;
};

struct Violations {
  Vec raw;         ///< Σ_t g_i(x_t)
  Vec clipped;     ///< Σ_t [g_i(x_t)]_+
  double max_agg;  ///< Σ_t max_i g_i(x_t)
};

struct RunSummary {
  double regret;
  Vec raw_violation;
  Vec clipped_violation;
  double max_violation;
};

/// Σ_t loss − comparator_total, summed in round order. Throws on records
/// whose round index does not run 1, 2, ..., T.
double regret(std::span<const RunRecord> records, double comparator_total);

/// Raw, clipped and max-aggregated cumulative violations in round order.
/// Throws on an empty trace or inconsistent g_values lengths.
Violations violations(std::span<const RunRecord> records);

RunSummary summarize(std::span<const RunRecord> records, double comparator_total);

/// Least-squares slope of log(max(value, floor)) against log T.
/// Throws std::invalid_argument with fewer than 3 points, non-increasing T,
/// or a nonpositive floor.
double fit_loglog_slope(std::span<const std::pair<double, double>> points, double floor = 1.0);

}  // namespace ltc
