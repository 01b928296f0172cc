#include "ltc/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ltc/errors.hpp"

namespace ltc {

LossFn::LossFn(double curvature, Vec linear, double offset, double lipschitz)
    : curvature_(curvature), linear_(std::move(linear)), offset_(offset), lipschitz_(lipschitz) {}

LossFn LossFn::linear(Vec weights) {
  require_finite(weights, "linear loss weights");
  const double l = weights.norm();
  return LossFn(0.0, std::move(weights), 0.0, l);
}

LossFn LossFn::quadratic(double curvature, const Vec& center, double radius) {
  if (!(curvature > 0.0)) throw std::invalid_argument("quadratic loss: curvature must be positive");
  require_finite(center, "quadratic loss center");
  return LossFn(curvature, -curvature * center, 0.5 * curvature * center.squaredNorm(),
                curvature * (radius + center.norm()));
}

double LossFn::value(const Vec& x) const {
  return 0.5 * curvature_ * x.squaredNorm() + linear_.dot(x) + offset_;
}

Vec LossFn::gradient(const Vec& x) const { return curvature_ * x + linear_; }

LossFn LossFn::sum(std::span<const LossFn> losses, double radius) {
  if (losses.empty()) throw std::invalid_argument("LossFn::sum: empty sequence");
  double c = 0.0;
  double k = 0.0;
  Vec w = Vec::Zero(losses.front().linear_term().size());
  for (const auto& f : losses) {
    c += f.curvature();
    w += f.linear_term();
    k += f.offset();
  }
  const double l = c * radius + w.norm();
  return LossFn(c, std::move(w), k, l);
}

ConstraintFn ConstraintFn::linear(Vec normal, double offset) {
  require_finite(normal, "constraint normal");
  if (std::abs(normal.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("linear constraint normal must have unit norm");
  }
  ConstraintFn g;
  g.linear_ = LinearForm{std::move(normal), offset};
  g.lipschitz_ = 1.0;
  return g;
}

ConstraintFn ConstraintFn::general(ValueFn value, GradientFn gradient, double lipschitz) {
  if (!value || !gradient) throw std::invalid_argument("constraint callbacks must be set");
  ConstraintFn g;
  g.value_ = std::move(value);
  g.gradient_ = std::move(gradient);
  g.lipschitz_ = lipschitz;
  return g;
}

double ConstraintFn::value(const Vec& x) const {
  if (linear_) return linear_->normal.dot(x) - linear_->offset;
  return value_(x);
}

Vec ConstraintFn::gradient(const Vec& x) const {
  if (linear_) return linear_->normal;
  return gradient_(x);
}

int ProblemInstance::dim() const {
  if (!constraints.empty() && constraints.front().is_linear()) {
    return static_cast<int>(constraints.front().linear_form()->normal.size());
  }
  if (!losses.empty()) return static_cast<int>(losses.front().linear_term().size());
  throw std::logic_error("ProblemInstance::dim: dimension unknown");
}

std::vector<LossFn> make_linear_losses(Rng& rng, int dim, std::size_t horizon,
                                       double grad_bound) {
  if (dim < 1 || horizon < 1 || !(grad_bound > 0.0)) {
    throw std::invalid_argument("make_linear_losses: need d >= 1, T >= 1, grad_bound > 0");
  }
  const Vec drift = sample_unit_sphere(rng, dim);
  std::vector<LossFn> out;
  out.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    Vec noise = sample_in_ball(rng, dim, 1.0);
    out.push_back(LossFn::linear(grad_bound * 0.5 * (drift + noise)));
  }
  return out;
}

std::vector<LossFn> make_quadratic_losses(Rng& rng, int dim, std::size_t horizon,
                                          double curvature_bound, double center_spread,
                                          double radius) {
  if (dim < 1 || horizon < 1 || !(curvature_bound > 0.0) || center_spread < 0.0) {
    throw std::invalid_argument("make_quadratic_losses: invalid shape parameters");
  }
  std::vector<LossFn> out;
  out.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    // 1 − U lies in (0, 1], keeping the curvature strictly positive.
    const double c = curvature_bound * (1.0 - rng.uniform());
    Vec center = sample_in_ball(rng, dim, center_spread);
    out.push_back(LossFn::quadratic(c, center, radius));
  }
  return out;
}

ProblemInstance make_polyhedral_problem(Rng& rng, int dim, std::size_t num_constraints,
                                        double radius, double inner_radius) {
  if (dim < 1) throw std::invalid_argument("make_polyhedral_problem: d must be >= 1");
  if (num_constraints < 1) throw std::invalid_argument("make_polyhedral_problem: m must be >= 1");
  BallDomain domain(radius, inner_radius);
  const double lo = std::max(inner_radius, 0.2 * radius);
  const double hi = 0.8 * radius;
  if (lo > hi) {
    throw std::invalid_argument(
        "make_polyhedral_problem: inner radius exceeds 0.8R, no offsets keep the inner ball feasible");
  }
  ProblemInstance p{domain, {}, {}, 0.0, 0.0, 0.0, 0.0};
  p.constraints.reserve(num_constraints);
  double d_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < num_constraints; ++i) {
    Vec a = sample_unit_sphere(rng, dim);
    const double b = rng.uniform(lo, hi);
    d_max = std::max(d_max, radius - b);
    p.constraints.push_back(ConstraintFn::linear(std::move(a), b));
  }
  p.G = 1.0;
  p.D = d_max;
  p.sigma = compute_sigma_linear(p.constraints);
  return p;
}

ProblemInstance with_losses(ProblemInstance problem, std::vector<LossFn> losses) {
  double lf = 0.0;
  for (const auto& f : losses) lf = std::max(lf, f.lipschitz());
  double lg = 0.0;
  for (const auto& g : problem.constraints) lg = std::max(lg, g.lipschitz());
  problem.losses = std::move(losses);
  problem.G = std::max(lf, lg);
  problem.F = 2.0 * lf * problem.radius();
  return problem;
}

Vec project_simplex(const Vec& v) {
  const Eigen::Index n = v.size();
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    cumsum += sorted[k];
    const double candidate = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

double compute_sigma_linear(std::span<const ConstraintFn> constraints) {
  if (constraints.empty()) throw std::invalid_argument("compute_sigma_linear: no constraints");
  const auto m = static_cast<Eigen::Index>(constraints.size());
  const auto d = constraints.front().linear_form() ? constraints.front().linear_form()->normal.size() : 0;
  Eigen::MatrixXd normals(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& form = constraints[i].linear_form();
    if (!form) throw std::invalid_argument("compute_sigma_linear: nonlinear constraint present");
    normals.row(i) = form->normal.transpose();
  }
  const Eigen::MatrixXd gram = normals * normals.transpose();
  const double lip = std::max(gram.diagonal().sum(), std::numeric_limits<double>::min());
  const double step = 1.0 / lip;
  const double gap_tol = 1e-18 * lip;
  Vec alpha = Vec::Constant(m, 1.0 / static_cast<double>(m));
  Vec prev = alpha;
  double momentum = 1.0;
  for (int k = 0; k < 200000; ++k) {
    const Vec grad = gram * alpha;
    // Frank-Wolfe gap bounds the excess of ½‖Σα_i a_i‖² over its minimum.
    if (alpha.dot(grad) - grad.minCoeff() <= gap_tol) break;
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const Vec y = alpha + ((momentum - 1.0) / next_momentum) * (alpha - prev);
    prev = alpha;
    alpha = project_simplex(y - step * (gram * y));
    momentum = next_momentum;
  }
  return (normals.transpose() * alpha).norm();
}

ProblemInstance theorem1_instance(int dim, std::size_t horizon, double radius) {
  if (dim < 1) throw std::invalid_argument("theorem1_instance: d must be >= 1");
  if (!(radius > 1.0)) throw std::invalid_argument("theorem1_instance: radius must exceed 1");
  const Vec w = Vec::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim))).normalized();
  ProblemInstance p{BallDomain(radius, 0.5 * radius), {}, {}, 0.0, 0.0, 0.0, 0.0};
  p.constraints.push_back(ConstraintFn::linear(-w, -1.0));
  p.D = 1.0 + radius;
  p.sigma = 1.0;
  std::vector<LossFn> losses(horizon, LossFn::linear(w));
  return with_losses(std::move(p), std::move(losses));
}

bool inner_ball_feasible(const ProblemInstance& problem, Rng& rng, std::size_t samples) {
  const int d = problem.dim();
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec x = sample_in_ball(rng, d, problem.domain.inner_radius());
    for (const auto& g : problem.constraints) {
      if (g.value(x) > 0.0) return false;
    }
  }
  return true;
}

}  // namespace ltc
