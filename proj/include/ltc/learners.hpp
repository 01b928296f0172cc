#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>

#include "ltc/core_math.hpp"
#include "ltc/problems.hpp"

namespace ltc {

/// Hyperparameters derived from a horizon and problem constants. Fields a
/// learner does not use stay zero.
struct ScheduleParams {
  double eta = 0.0;    ///< step size
  double delta = 0.0;  ///< weight of the −(δη/2)λ² dual regularizer
  double gamma = 0.0;  ///< constraint tightening g + γ <= 0
  double zeta = 0.0;   ///< exploration radius of the two-point queries
  double xi = 0.0;     ///< shrinkage of the decision ball to (1 − ξ)R
  double a = 0.0;
  double b = 0.0;
};

struct PrimalDualState {
  Vec x;
  Multipliers lambdas;
};

/// Mirror-prox state: auxiliary pair (z, mu) plus the last emitted (x, lambdas).
struct ProxState {
  Vec z;
  Multipliers mu;
  Vec x;
  Multipliers lambdas;
};

struct BanditState {
  Vec x;
  double lambda = 0.0;
};

PrimalDualState initial_primal_dual(int dim, std::size_t num_multipliers);
ProxState initial_prox(int dim, std::size_t num_constraints);
BanditState initial_bandit(int dim);

// ---------------------------------------------------------------------------
// Schedules

/// a = R√((m+1)G² + 2mD²), η = R²/(a√T), δ = 2(m+1)G².
/// Throws ScheduleError (carrying the smallest admissible T) unless
/// 2√2·η(m+1) <= 1 and δ >= (m+1)G² + 2mδ²η².
ScheduleParams alg1_schedule(std::size_t horizon, std::size_t num_constraints, double G,
                             double D, double R);

/// δ = 4G², η = R²/(a√T), γ = b·T^{-1/4}, with (a, b) the fixed point of
///   a = 2R/√(2G² + 3(D² + b²)),  b = 2√(F(δR²/a + a/R²)).
/// Requires F·T >= a√T and δ >= 2G² + 3δ²η².
ScheduleParams alg1_zero_violation_schedule(std::size_t horizon, double G, double D, double R,
                                            double F);

enum class ProxVariant { kViolating, kZeroViolation };

/// Violating: η = T^{-1/3}, δ = T^{-2/3}. Zero-violation: η = δ = T^{-1/3},
/// b = 2√F, γ = b·T^{-1/3}. Requires T >= 164(m+1)³.
ScheduleParams prox_schedule(std::size_t horizon, std::size_t num_constraints, ProxVariant variant,
                             double F);

/// η = R/√(2(D² + G²)T), δ = 4d²G², ζ = min(1/T, r/2), ξ = ζ/r.
ScheduleParams bandit_schedule(std::size_t horizon, int dim, double G, double D, double R,
                               double r);

/// 164(m+1)³, the smallest horizon prox_schedule accepts.
std::size_t prox_min_horizon(std::size_t num_constraints);

// ---------------------------------------------------------------------------
// Saddle functions

/// L_t(x, λ) = f_t(x) + Σ_i [λ_i (g_i(x) + γ) − (δη/2)λ_i²].
double lagrangian_value(const LossFn& loss, std::span<const ConstraintFn> constraints,
                        const Vec& x, const Multipliers& lambdas, double eta, double delta,
                        double gamma = 0.0);

/// Gradient of the constraint part F(x, λ) = Σ_i [λ_i g_i(x) − (δη/2)λ_i²]:
/// (Σ_i λ_i ∇g_i(x), (g_i(x) − δηλ_i)_i).
std::pair<Vec, Vec> aux_gradient(std::span<const ConstraintFn> constraints, const Vec& x,
                                 const Multipliers& lambdas, double eta, double delta);

struct MaxConstraint {
  double value;
  Vec subgradient;
  std::size_t index;
};

/// g(x) = max_i g_i(x) with the gradient of the smallest achieving index.
MaxConstraint max_constraint(const Vec& x, std::span<const ConstraintFn> constraints);

// ---------------------------------------------------------------------------
// Steps

/// One primal-dual gradient step on L_t (projected onto R·B and the orthant).
PrimalDualState alg1_step(const PrimalDualState& state, const Vec& loss_grad,
                          std::span<const ConstraintFn> constraints, const ScheduleParams& params,
                          double radius);

/// alg1_step on the single constraint max_i g_i with dual gradient
/// g(x) + γ − ηδλ. The state carries one multiplier.
PrimalDualState alg1_zero_violation_step(const PrimalDualState& state, const Vec& loss_grad,
                                         std::span<const ConstraintFn> constraints,
                                         const ScheduleParams& params, double radius);

using GradientOracle = std::function<Vec(const Vec&)>;

/// One mirror-prox round. Extrapolates (x_t, λ_t) from (z_t, μ_t) with the
/// gradient of F, asks `loss_grad_at` for ∇f_t(x_t), then updates (z, μ) with
/// the gradient of L_t at (x_t, λ_t). Constraints must be linear; params.gamma
/// tightens every constraint to g_i + γ <= 0. Returns the new state and x_t.
std::pair<ProxState, Vec> prox_step(const ProxState& state, const GradientOracle& loss_grad_at,
                                    std::span<const ConstraintFn> constraints,
                                    const ScheduleParams& params, double radius);

using ValueOracle = std::function<double(const Vec&)>;

/// One two-point bandit round: queries `constraint_value` at x ± ζu and steps
/// on the estimated gradients, projecting x onto the (1 − ξ)R ball.
BanditState bandit_step(const BanditState& state, const Vec& loss_grad,
                        const ValueOracle& constraint_value, const ScheduleParams& params,
                        double radius, Rng& rng);

/// Two-point estimate (d/2ζ)(g(x + ζu) − g(x − ζu))·u and the mean of the two values.
struct TwoPointEstimate {
  Vec gradient;
  double value;
};
TwoPointEstimate two_point_estimate(const ValueOracle& g, const Vec& x, const Vec& direction,
                                    double zeta);

using Projection = std::function<Vec(const Vec&)>;

/// x' = Π_K(x − η∇f), with Π_K supplied by the caller.
Vec projected_ogd_step(const Vec& x, const Vec& loss_grad, const Projection& project_domain,
                       double eta);

enum class PenaltyMode {
  kLinear,   ///< δ Σ [g_i]_+, subgradient δ Σ_{g_i > 0} ∇g_i
  kSquared,  ///< (δ/2) Σ [g_i]_+², gradient δ Σ [g_i]_+ ∇g_i
};

/// Ball-projected gradient step on the penalized loss f_t + penalty.
Vec penalty_ogd_step(const Vec& x, const Vec& loss_grad, std::span<const ConstraintFn> constraints,
                     double delta, double eta, PenaltyMode mode, double radius);

}  // namespace ltc
