#include "ltc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ltc/errors.hpp"

namespace ltc {

OracleConfig default_projection_config() {
  OracleConfig cfg;
  cfg.max_iters = 200'000;
  cfg.tol = 1e-12;
  return cfg;
}

Vec dykstra_project(const Vec& x, std::span<const ConstraintFn> constraints, double radius,
                    const OracleConfig& cfg) {
  if (cfg.max_iters < 1 || !(cfg.tol > 0.0)) {
    throw std::invalid_argument("dykstra_project: need max_iters >= 1 and tol > 0");
  }
  require_finite(x, "dykstra_project input");
  if (constraints.empty()) return project_ball(x, radius);
  for (const auto& g : constraints) {
    if (!g.is_linear()) throw std::invalid_argument("dykstra_project: constraints must be linear");
  }

  const std::size_t m = constraints.size();
  std::vector<Vec> corrections(m + 1, Vec::Zero(x.size()));
  Vec y = x;
  double residual = 0.0;
  for (std::size_t it = 0; it < cfg.max_iters; ++it) {
    double change = 0.0;
    for (std::size_t i = 0; i <= m; ++i) {
      const Vec shifted = y + corrections[i];
      Vec next;
      if (i < m) {
        const LinearForm& h = *constraints[i].linear_form();
        next = project_halfspace(shifted, h.normal, h.offset);
      } else {
        next = project_ball(shifted, radius);
      }
      Vec correction = shifted - next;
      change = std::max(change, (next - y).norm());
      change = std::max(change, (correction - corrections[i]).norm());
      corrections[i] = std::move(correction);
      y = std::move(next);
    }
    double violation = 0.0;
    for (const auto& g : constraints) violation = std::max(violation, g.value(y));
    residual = std::max(change, violation);
    if (residual <= cfg.tol) return y;
  }
  std::ostringstream msg;
  msg << "dykstra_project: no convergence after " << cfg.max_iters << " cycles, residual "
      << residual;
  throw NumericalError(msg.str(), residual);
}

namespace {

struct AverageLoss {
  LossFn sum;
  double scale;

  double value(const Vec& x) const { return scale * sum.value(x); }
  Vec gradient(const Vec& x) const { return scale * sum.gradient(x); }
  double lipschitz() const { return scale * sum.lipschitz(); }
};

double total_loss_at(std::span<const LossFn> losses, const Vec& x) {
  double total = 0.0;
  for (const auto& f : losses) total += f.value(x);
  return total;
}

}  // namespace

FixedDecision best_fixed_decision_from(const ProblemInstance& problem,
                                       std::span<const LossFn> losses, const Vec& start,
                                       const OracleConfig& cfg) {
  if (losses.empty()) throw std::invalid_argument("best_fixed_decision: empty loss sequence");
  if (cfg.max_iters < 1 || !(cfg.tol > 0.0)) {
    throw std::invalid_argument("best_fixed_decision: need max_iters >= 1 and tol > 0");
  }
  const double radius = problem.radius();
  const std::span<const ConstraintFn> constraints(problem.constraints);
  const OracleConfig proj = default_projection_config();
  auto project = [&](const Vec& v) { return dykstra_project(v, constraints, radius, proj); };

  const AverageLoss avg{LossFn::sum(losses, radius), 1.0 / static_cast<double>(losses.size())};
  const double lip = avg.lipschitz();
  Vec x = project(start);
  if (!(lip > 0.0)) return {x, total_loss_at(losses, x)};
  const double eta0 = cfg.initial_step > 0.0 ? cfg.initial_step : radius / lip;

  double residual = 0.0;
  for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
    const Vec grad = avg.gradient(x);
    residual = (x - project(x - grad)).norm();
    if (residual <= cfg.tol) return {x, total_loss_at(losses, x)};
    x = project(x - (eta0 / std::sqrt(static_cast<double>(k))) * grad);
  }
  std::ostringstream msg;
  msg << "best_fixed_decision: projected-gradient norm " << residual << " above tol after "
      << cfg.max_iters << " iterations";
  throw NumericalError(msg.str(), residual);
}

FixedDecision best_fixed_decision(const ProblemInstance& problem, std::span<const LossFn> losses,
                                  const OracleConfig& cfg) {
  if (losses.empty()) throw std::invalid_argument("best_fixed_decision: empty loss sequence");
  return best_fixed_decision_from(problem, losses, Vec::Zero(losses.front().linear_term().size()),
                                  cfg);
}

Vec finite_diff_gradient(const ScalarFn& fn, const Vec& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_diff_gradient: h must be positive");
  Vec grad(x.size());
  Vec probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = fn(probe);
    probe[i] = x[i] - h;
    const double down = fn(probe);
    probe[i] = x[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

McScalar smoothed_value_mc(const ScalarFn& g, const Vec& x, double zeta, std::size_t n,
                           Rng& rng) {
  if (zeta < 0.0) throw std::invalid_argument("smoothed_value_mc: zeta must be nonnegative");
  if (n < 2) throw std::invalid_argument("smoothed_value_mc: need at least two samples");
  if (zeta == 0.0) return {g(x), 0.0};
  const int d = static_cast<int>(x.size());
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double v = g(x + zeta * sample_in_ball(rng, d, 1.0));
    const double diff = v - mean;
    mean += diff / static_cast<double>(k);
    m2 += diff * (v - mean);
  }
  const double nn = static_cast<double>(n);
  return {mean, std::sqrt(m2 / (nn - 1.0) / nn)};
}

McVector smoothed_gradient_mc(const ScalarFn& g, const Vec& x, double zeta, std::size_t n,
                              Rng& rng) {
  if (!(zeta > 0.0)) throw std::invalid_argument("smoothed_gradient_mc: zeta must be positive");
  if (n < 2) throw std::invalid_argument("smoothed_gradient_mc: need at least two samples");
  const int d = static_cast<int>(x.size());
  const double scale = static_cast<double>(d) / (2.0 * zeta);
  Vec mean = Vec::Zero(d);
  Vec m2 = Vec::Zero(d);
  for (std::size_t k = 1; k <= n; ++k) {
    const Vec u = sample_unit_sphere(rng, d);
    const Vec v = (scale * (g(x + zeta * u) - g(x - zeta * u))) * u;
    const Vec diff = v - mean;
    mean += diff / static_cast<double>(k);
    m2 += diff.cwiseProduct(v - mean);
  }
  const double nn = static_cast<double>(n);
  return {mean, (m2 / ((nn - 1.0) * nn)).cwiseSqrt()};
}

}  // namespace ltc
