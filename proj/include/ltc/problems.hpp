#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ltc/core_math.hpp"

namespace ltc {

/// Loss of the form ½·c·‖x‖² + w·x + k with c >= 0.
///
/// Linear losses have c = 0; the quadratic family ½c‖x − p‖² expands to
/// c' = c, w = −c·p, k = ½c‖p‖². Keeping the expanded form lets a whole
/// sequence be summed into a single loss of the same shape.
class LossFn {
 public:
  static LossFn linear(Vec weights);
  /// ½c‖x − center‖² with its Lipschitz constant taken on the `radius` ball.
  static LossFn quadratic(double curvature, const Vec& center, double radius);

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  double lipschitz() const noexcept { return lipschitz_; }

  double curvature() const noexcept { return curvature_; }
  const Vec& linear_term() const noexcept { return linear_; }
  double offset() const noexcept { return offset_; }

  /// Sum of `losses`, Lipschitz constant on the `radius` ball.
  static LossFn sum(std::span<const LossFn> losses, double radius);

 private:
  LossFn(double curvature, Vec linear, double offset, double lipschitz);

  double curvature_;
  Vec linear_;
  double offset_;
  double lipschitz_;
};

/// g(x) = a·x − b with ‖a‖ = 1.
struct LinearForm {
  Vec normal;
  double offset;
};

/// A convex constraint function g with g(x) <= 0 describing the feasible side.
class ConstraintFn {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradientFn = std::function<Vec(const Vec&)>;

  /// a·x − b; throws std::invalid_argument unless ‖a‖ = 1 within 1e-12.
  static ConstraintFn linear(Vec normal, double offset);
  static ConstraintFn general(ValueFn value, GradientFn gradient, double lipschitz);

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  double lipschitz() const noexcept { return lipschitz_; }
  const std::optional<LinearForm>& linear_form() const noexcept { return linear_; }
  bool is_linear() const noexcept { return linear_.has_value(); }

 private:
  ConstraintFn() = default;

  std::optional<LinearForm> linear_;
  ValueFn value_;
  GradientFn gradient_;
  double lipschitz_ = 0.0;
};

using Constraints = std::vector<ConstraintFn>;

/// A complete constrained online problem.
///
/// G is the largest Lipschitz constant over losses and constraints, D the
/// largest constraint value over the ball, F the loss-range bound (set to
/// 2·L_f·R) and sigma the gradient lower bound at the tightened boundary.
struct ProblemInstance {
  BallDomain domain;
  Constraints constraints;
  std::vector<LossFn> losses;
  double G = 0.0;
  double D = 0.0;
  double F = 0.0;
  double sigma = 0.0;

  int dim() const;
  std::size_t num_constraints() const noexcept { return constraints.size(); }
  std::size_t horizon() const noexcept { return losses.size(); }
  double radius() const noexcept { return domain.radius(); }
};

/// f_t(x) = w_t·x. Each w_t = grad_bound·(½v + ½u_t) with a drift direction v
/// shared by the sequence and u_t uniform in the unit ball, so ‖w_t‖ <= grad_bound
/// and the comparator sits on the boundary of the feasible set.
std::vector<LossFn> make_linear_losses(Rng& rng, int dim, std::size_t horizon,
                                       double grad_bound);

/// f_t(x) = ½c_t‖x − p_t‖², c_t uniform on (0, curvature_bound], p_t uniform in
/// the ball of radius center_spread.
std::vector<LossFn> make_quadratic_losses(Rng& rng, int dim, std::size_t horizon,
                                          double curvature_bound, double center_spread,
                                          double radius);

/// m random halfspaces a_i·x <= b_i with unit a_i and b_i uniform on
/// [max(r, 0.2R), 0.8R]. Losses are left empty; see with_losses().
ProblemInstance make_polyhedral_problem(Rng& rng, int dim, std::size_t num_constraints,
                                        double radius, double inner_radius);

/// Attaches a loss sequence and recomputes G and F.
ProblemInstance with_losses(ProblemInstance problem, std::vector<LossFn> losses);

/// min over the simplex of ‖Σ α_i a_i‖ for linear constraints, by projected
/// gradient descent on ½‖Σ α_i a_i‖² (500 iterations, step 1/m).
double compute_sigma_linear(std::span<const ConstraintFn> constraints);

/// Euclidean projection onto the probability simplex (sort-based).
Vec project_simplex(const Vec& v);

/// Counterexample for the fixed-penalty baseline: f_t(x) = w·x and
/// g(x) = 1 − w·x with w = (1, ..., 1)/√d, ball radius `radius`.
///
/// The feasible set {w·x >= 1} ∩ R·B does not contain the origin, so the
/// instance deliberately breaks the interior-ball assumption; the stored inner
/// radius is nominal. Requires radius > 1 so the feasible cap has interior.
ProblemInstance theorem1_instance(int dim, std::size_t horizon = 1, double radius = 2.0);

/// Checks g_i(x) <= 0 at `samples` random points of the inner ball.
bool inner_ball_feasible(const ProblemInstance& problem, Rng& rng, std::size_t samples);

}  // namespace ltc
