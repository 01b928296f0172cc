#include "ltc/learners.hpp"

#include <cmath>
#include <stdexcept>

#include "ltc/errors.hpp"

namespace ltc {

PrimalDualState initial_primal_dual(int dim, std::size_t num_multipliers) {
  return {Vec::Zero(dim), Multipliers::Zero(static_cast<Eigen::Index>(num_multipliers))};
}

ProxState initial_prox(int dim, std::size_t num_constraints) {
  const auto m = static_cast<Eigen::Index>(num_constraints);
  return {Vec::Zero(dim), Multipliers::Zero(m), Vec::Zero(dim), Multipliers::Zero(m)};
}

BanditState initial_bandit(int dim) { return {Vec::Zero(dim), 0.0}; }

double lagrangian_value(const LossFn& loss, std::span<const ConstraintFn> constraints,
                        const Vec& x, const Multipliers& lambdas, double eta, double delta,
                        double gamma) {
  double value = loss.value(x);
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const double l = lambdas[static_cast<Eigen::Index>(i)];
    value += l * (constraints[i].value(x) + gamma) - 0.5 * delta * eta * l * l;
  }
  return value;
}

std::pair<Vec, Vec> aux_gradient(std::span<const ConstraintFn> constraints, const Vec& x,
                                 const Multipliers& lambdas, double eta, double delta) {
  Vec gx = Vec::Zero(x.size());
  Vec gl(static_cast<Eigen::Index>(constraints.size()));
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    gx += lambdas[k] * constraints[i].gradient(x);
    gl[k] = constraints[i].value(x) - delta * eta * lambdas[k];
  }
  return {gx, gl};
}

MaxConstraint max_constraint(const Vec& x, std::span<const ConstraintFn> constraints) {
  if (constraints.empty()) throw std::invalid_argument("max_constraint: no constraints");
  std::size_t best = 0;
  double best_value = constraints[0].value(x);
  for (std::size_t i = 1; i < constraints.size(); ++i) {
    const double v = constraints[i].value(x);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return {best_value, constraints[best].gradient(x), best};
}

PrimalDualState alg1_step(const PrimalDualState& state, const Vec& loss_grad,
                          std::span<const ConstraintFn> constraints, const ScheduleParams& params,
                          double radius) {
  if (static_cast<std::size_t>(state.lambdas.size()) != constraints.size()) {
    throw std::invalid_argument("alg1_step: one multiplier per constraint required");
  }
  require_finite(loss_grad, "loss gradient");
  const double eta = params.eta;
  Vec grad_x = loss_grad;
  Multipliers grad_l(state.lambdas.size());
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const double l = state.lambdas[k];
    if (l != 0.0) grad_x += l * constraints[i].gradient(state.x);
    grad_l[k] = constraints[i].value(state.x) - eta * params.delta * l;
  }
  require_finite(grad_x, "primal gradient");
  return {project_ball(state.x - eta * grad_x, radius),
          clamp_nonneg(state.lambdas + eta * grad_l)};
}

PrimalDualState alg1_zero_violation_step(const PrimalDualState& state, const Vec& loss_grad,
                                         std::span<const ConstraintFn> constraints,
                                         const ScheduleParams& params, double radius) {
  if (state.lambdas.size() != 1) {
    throw std::invalid_argument("alg1_zero_violation_step: state must carry a single multiplier");
  }
  require_finite(loss_grad, "loss gradient");
  const double eta = params.eta;
  const double lambda = state.lambdas[0];
  const MaxConstraint g = max_constraint(state.x, constraints);
  Vec grad_x = loss_grad;
  if (lambda != 0.0) grad_x += lambda * g.subgradient;
  require_finite(grad_x, "primal gradient");
  const double grad_l = g.value + params.gamma - eta * params.delta * lambda;
  Multipliers next(1);
  next[0] = std::max(0.0, lambda + eta * grad_l);
  return {project_ball(state.x - eta * grad_x, radius), next};
}

namespace {

const LinearForm& require_linear(const ConstraintFn& g) {
  if (!g.linear_form()) throw std::invalid_argument("prox_step: constraints must be linear");
  return *g.linear_form();
}

}  // namespace

std::pair<ProxState, Vec> prox_step(const ProxState& state, const GradientOracle& loss_grad_at,
                                    std::span<const ConstraintFn> constraints,
                                    const ScheduleParams& params, double radius) {
  const std::size_t m = constraints.size();
  if (static_cast<std::size_t>(state.mu.size()) != m) {
    throw std::invalid_argument("prox_step: one multiplier per constraint required");
  }
  const double eta = params.eta;
  const double shrink = eta * params.delta;

  // Extrapolation with the gradient of F at (z_t, μ_t).
  Vec grad_x = Vec::Zero(state.z.size());
  Multipliers grad_l(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const LinearForm& g = require_linear(constraints[i]);
    grad_x += state.mu[k] * g.normal;
    grad_l[k] = g.normal.dot(state.z) - g.offset + params.gamma - shrink * state.mu[k];
  }
  Vec x = project_ball(state.z - eta * grad_x, radius);
  Multipliers lambdas = clamp_nonneg(state.mu + eta * grad_l);

  // Update with the gradient of L_t at (x_t, λ_t).
  const Vec loss_grad = loss_grad_at(x);
  require_finite(loss_grad, "loss gradient");
  grad_x = loss_grad;
  for (std::size_t i = 0; i < m; ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const LinearForm& g = *constraints[i].linear_form();
    grad_x += lambdas[k] * g.normal;
    grad_l[k] = g.normal.dot(x) - g.offset + params.gamma - shrink * lambdas[k];
  }
  ProxState next{project_ball(state.z - eta * grad_x, radius),
                 clamp_nonneg(state.mu + eta * grad_l), x, lambdas};
  return {std::move(next), std::move(x)};
}

TwoPointEstimate two_point_estimate(const ValueOracle& g, const Vec& x, const Vec& direction,
                                    double zeta) {
  if (!(zeta > 0.0)) throw std::invalid_argument("two_point_estimate: zeta must be positive");
  const double plus = g(x + zeta * direction);
  const double minus = g(x - zeta * direction);
  const double d = static_cast<double>(x.size());
  return {(d / (2.0 * zeta)) * (plus - minus) * direction, 0.5 * (plus + minus)};
}

BanditState bandit_step(const BanditState& state, const Vec& loss_grad,
                        const ValueOracle& constraint_value, const ScheduleParams& params,
                        double radius, Rng& rng) {
  require_finite(loss_grad, "loss gradient");
  const double zeta = params.zeta;
  const Vec u = sample_unit_sphere(rng, static_cast<int>(state.x.size()));
  // (1 − ξ)R + ζ <= R holds exactly in reals; allow rounding only.
  const double limit = radius * (1.0 + 1e-12);
  if ((state.x + zeta * u).norm() > limit || (state.x - zeta * u).norm() > limit) {
    throw NumericalError("bandit_step: query point outside the decision ball");
  }
  const TwoPointEstimate est = two_point_estimate(constraint_value, state.x, u, zeta);
  Vec grad_x = loss_grad;
  if (state.lambda != 0.0) grad_x += state.lambda * est.gradient;
  require_finite(grad_x, "primal gradient estimate");
  const double grad_l = est.value - params.eta * params.delta * state.lambda;
  return {project_ball(state.x - params.eta * grad_x, (1.0 - params.xi) * radius),
          std::max(0.0, state.lambda + params.eta * grad_l)};
}

Vec projected_ogd_step(const Vec& x, const Vec& loss_grad, const Projection& project_domain,
                       double eta) {
  require_finite(loss_grad, "loss gradient");
  return project_domain(x - eta * loss_grad);
}

Vec penalty_ogd_step(const Vec& x, const Vec& loss_grad, std::span<const ConstraintFn> constraints,
                     double delta, double eta, PenaltyMode mode, double radius) {
  if (!(delta > 0.0)) throw std::invalid_argument("penalty_ogd_step: delta must be positive");
  require_finite(loss_grad, "loss gradient");
  Vec grad = loss_grad;
  for (const auto& g : constraints) {
    const double v = g.value(x);
    if (v <= 0.0) continue;
    grad += (mode == PenaltyMode::kLinear ? delta : delta * v) * g.gradient(x);
  }
  return project_ball(x - eta * grad, radius);
}

}  // namespace ltc
