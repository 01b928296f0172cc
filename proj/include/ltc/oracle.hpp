#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "ltc/core_math.hpp"
#include "ltc/problems.hpp"

namespace ltc {

/// Iteration controls for the reference solvers. The step of iteration k is
/// initial_step / √k; a nonpositive initial_step means "derive R/G".
struct OracleConfig {
  std::size_t max_iters = 10'000;
  double tol = 1e-9;
  double initial_step = 0.0;
};

/// Euclidean projection onto K = R·B ∩ {g_i <= 0} for linear g_i, by Dykstra's
/// algorithm with the halfspaces visited in order and the ball last.
///
/// Stops once a full cycle moves neither the point nor any correction term
/// by more than cfg.tol and every constraint holds within cfg.tol. The ball
/// projection closes each cycle, so ‖result‖ <= R exactly. cfg.max_iters
/// counts cycles; exhausting it throws NumericalError with the last residual.
Vec dykstra_project(const Vec& x, std::span<const ConstraintFn> constraints, double radius,
                    const OracleConfig& cfg);

/// Projection settings used by the learners and the offline solver.
OracleConfig default_projection_config();

struct FixedDecision {
  Vec x_star;
  double total_loss;
};

/// argmin over K of Σ_t f_t by projected gradient descent on the average loss
/// with step η_k = η_0/√k (η_0 = R/G unless cfg.initial_step is set). Converges
/// when ‖x − Π_K(x − ∇f̄(x))‖ <= cfg.tol. total_loss is Σ_t f_t(x*) summed in
/// round order. Throws NumericalError when the iteration cap is hit.
FixedDecision best_fixed_decision(const ProblemInstance& problem, std::span<const LossFn> losses,
                                  const OracleConfig& cfg = {});

/// Same solver started from `start` (projected onto K first).
FixedDecision best_fixed_decision_from(const ProblemInstance& problem,
                                       std::span<const LossFn> losses, const Vec& start,
                                       const OracleConfig& cfg = {});

using ScalarFn = std::function<double(const Vec&)>;

/// Central differences (fn(x + h·e_i) − fn(x − h·e_i)) / 2h.
Vec finite_diff_gradient(const ScalarFn& fn, const Vec& x, double h);

struct McScalar {
  double mean;
  double stderr_;
};

struct McVector {
  Vec mean;
  Vec stderr_;
};

/// Mean of g(x + ζv) over n points v uniform in the unit ball, with its
/// standard error. ζ = 0 returns g(x) exactly.
McScalar smoothed_value_mc(const ScalarFn& g, const Vec& x, double zeta, std::size_t n, Rng& rng);

/// Mean of (d/2ζ)(g(x + ζu) − g(x − ζu))·u over n directions u uniform on the
/// sphere, with per-coordinate standard errors.
McVector smoothed_gradient_mc(const ScalarFn& g, const Vec& x, double zeta, std::size_t n,
                              Rng& rng);

}  // namespace ltc
