#include <cmath>

#include <gtest/gtest.h>

#include "grid_oracle.hpp"
#include "ltc/errors.hpp"
#include "ltc/learners.hpp"
#include "ltc/oracle.hpp"

namespace ltc {
namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

OracleConfig tight(double tol) {
  OracleConfig cfg;
  cfg.max_iters = 1'000'000;
  cfg.tol = tol;
  return cfg;
}

ProblemInstance unconstrained_instance(std::vector<LossFn> losses, double R) {
  ProblemInstance p{BallDomain(R, R), {}, std::move(losses)};
  return p;
}

// ---------------------------------------------------------------------------
// Dykstra

TEST(Dykstra, FeasiblePointIsFixed) {
  Rng rng(1);
  const ProblemInstance p = make_polyhedral_problem(rng, 3, 4, 1.0, 0.2);
  for (int k = 0; k < 100; ++k) {
    const Vec x = sample_in_ball(rng, 3, 0.2);
    EXPECT_LE((dykstra_project(x, p.constraints, 1.0, tight(1e-12)) - x).norm(), 1e-12);
  }
}

TEST(Dykstra, BallOnlyMatchesBallProjection) {
  Rng rng(2);
  for (int k = 0; k < 100; ++k) {
    const Vec x = 3.0 * sample_in_ball(rng, 4, 1.0);
    EXPECT_EQ(dykstra_project(x, Constraints{}, 1.0, tight(1e-12)), project_ball(x, 1.0));
  }
}

TEST(Dykstra, QuarterExampleMatchesSampledSearch) {
  const Constraints cons{ConstraintFn::linear(v2(1, 0), 0.0)};
  const Vec y = dykstra_project(v2(1, 1), cons, 1.0, tight(1e-12));
  EXPECT_NEAR(y[0], 0.0, 1e-12);
  EXPECT_NEAR(y[1], 1.0, 1e-12);

  // 10^4-point sampled nearest feasible search, resolution ~1e-2
  const int n = 100;
  Vec best = Vec::Zero(2);
  double bd = 1e300;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const Vec c = v2(-1.0 + 2.0 * i / n, -1.0 + 2.0 * j / n);
      if (c.norm() > 1.0 || c[0] > 0.0) continue;
      const double dist = (c - v2(1, 1)).norm();
      if (dist < bd) {
        bd = dist;
        best = c;
      }
    }
  }
  EXPECT_LT((best - y).norm(), 2.0 / n * 1.5);
}

TEST(Dykstra, MatchesBoundarySearchInTwoDimensions) {
  Rng rng(3);
  // the angular search compares squared distances, so it resolves ~1e-8
  const double tol = 1e-7;
  for (int trial = 0; trial < 200; ++trial) {
    const ProblemInstance p = make_polyhedral_problem(rng, 2, 1 + trial % 4, 1.0, 0.1);
    const Vec x = 2.0 * sample_in_ball(rng, 2, 1.0);
    const Vec y = dykstra_project(x, p.constraints, 1.0, tight(tol));
    const Vec ref = check::nearest_feasible_grid(x, p.constraints, 1.0);
    EXPECT_LE((y - ref).norm(), 10 * tol) << "trial " << trial;
  }
}

TEST(Dykstra, MatchesFaceEnumerationInTwoDimensions) {
  Rng rng(5);
  const double tol = 1e-10;
  for (int trial = 0; trial < 500; ++trial) {
    const ProblemInstance p = make_polyhedral_problem(rng, 2, 1 + trial % 5, 1.0, 0.1);
    const Vec x = 2.0 * sample_in_ball(rng, 2, 1.0);
    const Vec y = dykstra_project(x, p.constraints, 1.0, tight(tol));
    const Vec ref = check::nearest_feasible_exact(x, p.constraints, 1.0);
    EXPECT_LE((y - ref).norm(), 10 * tol) << "trial " << trial;
  }
}

TEST(Dykstra, OutputFeasibleAndStableUnderAnotherCycle) {
  Rng rng(4);
  const double tol = 1e-10;
  for (int trial = 0; trial < 100; ++trial) {
    const ProblemInstance p = make_polyhedral_problem(rng, 4, 5, 1.0, 0.1);
    const Vec x = 3.0 * sample_in_ball(rng, 4, 1.0);
    const Vec y = dykstra_project(x, p.constraints, 1.0, tight(tol));
    EXPECT_LE(y.norm(), 1.0);
    for (const auto& g : p.constraints) EXPECT_LE(g.value(y), tol);
    EXPECT_LE((dykstra_project(y, p.constraints, 1.0, tight(tol)) - y).norm(), tol);
    // variational characterization: (x − y)·(z − y) <= 0 for z in K
    for (int k = 0; k < 50; ++k) {
      const Vec z = sample_in_ball(rng, 4, 0.1);
      EXPECT_LE((x - y).dot(z - y), 1e-8);
    }
  }
}

TEST(Dykstra, IterationCapCarriesResidual) {
  Rng rng(5);
  const ProblemInstance p = make_polyhedral_problem(rng, 3, 6, 1.0, 0.1);
  OracleConfig cfg;
  cfg.max_iters = 1;
  cfg.tol = 1e-300;
  Vec x = Vec::Constant(3, 5.0);
  try {
    dykstra_project(x, p.constraints, 1.0, cfg);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_GT(e.residual(), 0.0);
  }
  cfg.tol = 0.0;
  EXPECT_THROW(dykstra_project(x, p.constraints, 1.0, cfg), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Offline comparator

TEST(BestFixedDecision, LinearOverBall) {
  std::vector<LossFn> fs(10, LossFn::linear(Vec::Unit(3, 0)));
  const ProblemInstance p = unconstrained_instance(fs, 1.0);
  const FixedDecision d = best_fixed_decision(p, p.losses);
  EXPECT_LT((d.x_star - (-Vec::Unit(3, 0))).norm(), 1e-8);
  EXPECT_NEAR(d.total_loss, -10.0, 1e-8);
}

TEST(BestFixedDecision, QuadraticWithFeasibleMinimum) {
  std::vector<LossFn> fs(5, LossFn::quadratic(1.0, Vec::Zero(3), 1.0));
  Rng rng(6);
  ProblemInstance p = make_polyhedral_problem(rng, 3, 3, 1.0, 0.1);
  p = with_losses(std::move(p), fs);
  const FixedDecision d = best_fixed_decision(p, p.losses);
  EXPECT_LT(d.x_star.norm(), 1e-9);
}

TEST(BestFixedDecision, HalfspaceCutsLinearOptimum) {
  const std::size_t T = 7;
  std::vector<LossFn> fs(T, LossFn::linear(Vec::Unit(3, 0)));
  ProblemInstance p{BallDomain(1.0, 0.5), {ConstraintFn::linear(-Vec::Unit(3, 0), 0.5)}, fs};
  const FixedDecision d = best_fixed_decision(p, p.losses);
  EXPECT_NEAR(d.x_star[0], -0.5, 1e-9);
  EXPECT_NEAR(d.x_star.tail(2).norm(), 0.0, 1e-9);
  EXPECT_NEAR(d.total_loss, -0.5 * T, 1e-8);
}

TEST(BestFixedDecision, RestartsAgreeAndBeatRandomFeasiblePoints) {
  Rng rng(7);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t T = 400;
    ProblemInstance p = make_polyhedral_problem(rng, 4, 3, 1.0, 0.1);
    p = with_losses(std::move(p), trial % 2 ? make_linear_losses(rng, 4, T, 1.0)
                                            : make_quadratic_losses(rng, 4, T, 1.0, 1.0, 1.0));
    const FixedDecision d = best_fixed_decision(p, p.losses);
    for (int k = 0; k < 5; ++k) {
      const Vec start = dykstra_project(sample_in_ball(rng, 4, 1.0), p.constraints, 1.0,
                                        default_projection_config());
      const FixedDecision r = best_fixed_decision_from(p, p.losses, start);
      EXPECT_LE(std::abs(r.total_loss - d.total_loss), 1e-6 * T);
    }
    const OracleConfig proj = default_projection_config();
    for (int k = 0; k < 1000; ++k) {
      Vec z = sample_in_ball(rng, 4, 0.1);
      if (k % 2) z = dykstra_project(z + 0.5 * sample_unit_sphere(rng, 4), p.constraints, 1.0, proj);
      double total = 0.0;
      for (const auto& f : p.losses) total += f.value(z);
      EXPECT_LE(d.total_loss, total + 1e-9 * T);
    }
  }
}

TEST(BestFixedDecision, NonConvergenceThrows) {
  std::vector<LossFn> fs(3, LossFn::quadratic(1.0, v2(0.3, 0.2), 1.0));
  const ProblemInstance p = unconstrained_instance(fs, 1.0);
  OracleConfig cfg;
  cfg.max_iters = 1;
  cfg.tol = 1e-15;
  EXPECT_THROW(best_fixed_decision(p, p.losses, cfg), NumericalError);
}

// ---------------------------------------------------------------------------
// Finite differences

TEST(FiniteDiff, Examples) {
  const Vec g = finite_diff_gradient([](const Vec& x) { return 0.5 * x.squaredNorm(); }, v2(1, 2),
                                     1e-5);
  EXPECT_NEAR(g[0], 1.0, 1e-8);
  EXPECT_NEAR(g[1], 2.0, 1e-8);
  const Vec a = v2(0.3, -1.7);
  const Vec ga = finite_diff_gradient([&](const Vec& x) { return a.dot(x); }, v2(5, -2), 1e-5);
  EXPECT_NEAR(ga[0], a[0], 1e-10);
  EXPECT_NEAR(ga[1], a[1], 1e-10);
  EXPECT_THROW(finite_diff_gradient([](const Vec&) { return 0.0; }, a, 0.0), std::invalid_argument);
}

TEST(FiniteDiff, QuadraticFamilyExact) {
  Rng rng(8);
  const auto fs = make_quadratic_losses(rng, 4, 100, 2.0, 1.0, 1.0);
  for (const auto& f : fs) {
    const Vec x = sample_in_ball(rng, 4, 1.0);
    const Vec fd = finite_diff_gradient([&](const Vec& v) { return f.value(v); }, x, 1e-5);
    EXPECT_LE((fd - f.gradient(x)).norm(), 1e-8);
  }
}

TEST(FiniteDiff, LossAndConstraintFamilies) {
  Rng rng(9);
  const auto lin = make_linear_losses(rng, 5, 100, 1.0);
  const auto quad = make_quadratic_losses(rng, 5, 100, 1.0, 1.0, 1.0);
  const ProblemInstance p = make_polyhedral_problem(rng, 5, 4, 1.0, 0.1);
  auto check = [](const ScalarFn& fn, const Vec& grad, const Vec& x) {
    const Vec fd = finite_diff_gradient(fn, x, 1e-5);
    EXPECT_LE((fd - grad).norm(), std::max(1e-6, 1e-4 * grad.norm()));
  };
  for (int k = 0; k < 100; ++k) {
    const Vec x = sample_in_ball(rng, 5, 0.99);
    check([&](const Vec& v) { return lin[k].value(v); }, lin[k].gradient(x), x);
    check([&](const Vec& v) { return quad[k].value(v); }, quad[k].gradient(x), x);
    for (const auto& g : p.constraints) check([&](const Vec& v) { return g.value(v); }, g.gradient(x), x);
  }
}

TEST(FiniteDiff, MaxConstraintAwayFromTies) {
  Rng rng(10);
  const ProblemInstance p = make_polyhedral_problem(rng, 3, 4, 1.0, 0.1);
  const double h = 1e-5;
  int checked = 0;
  for (int k = 0; k < 2000 && checked < 100; ++k) {
    const Vec x = sample_in_ball(rng, 3, 0.99);
    std::vector<double> vals;
    for (const auto& g : p.constraints) vals.push_back(g.value(x));
    std::sort(vals.begin(), vals.end());
    if (vals[vals.size() - 1] - vals[vals.size() - 2] <= 2 * h * p.G) continue;
    const MaxConstraint mc = max_constraint(x, p.constraints);
    const Vec fd = finite_diff_gradient(
        [&](const Vec& v) { return max_constraint(v, p.constraints).value; }, x, h);
    EXPECT_LE((fd - mc.subgradient).norm(), 1e-6);
    ++checked;
  }
  EXPECT_EQ(checked, 100);
}

// ---------------------------------------------------------------------------
// Smoothing oracles

TEST(SmoothedValue, LinearUnbiasedAndZeroRadiusExact) {
  const Vec a = v2(0.6, 0.8);
  const ScalarFn g = [&](const Vec& x) { return a.dot(x) - 0.2; };
  Rng rng(11);
  const Vec x = v2(0.1, -0.3);
  const McScalar s = smoothed_value_mc(g, x, 0.1, 100000, rng);
  EXPECT_LE(std::abs(s.mean - g(x)), 3 * s.stderr_);
  const McScalar z = smoothed_value_mc(g, x, 0.0, 10, rng);
  EXPECT_EQ(z.mean, g(x));
  EXPECT_EQ(z.stderr_, 0.0);
}

TEST(SmoothedValue, SmoothingBiasBoundedByLipschitzRadius) {
  Rng rng(12);
  const ProblemInstance p = make_polyhedral_problem(rng, 3, 3, 1.0, 0.1);
  const ScalarFn g = [&](const Vec& x) { return max_constraint(x, p.constraints).value; };
  for (int k = 0; k < 20; ++k) {
    const double zeta = 0.05 + 0.1 * rng.uniform();
    const Vec x = sample_in_ball(rng, 3, 1.0 - zeta);
    const McScalar s = smoothed_value_mc(g, x, zeta, 20000, rng);
    // convexity gives ĝ >= g; Lipschitz gives ĝ <= g + Gζ
    EXPECT_GE(s.mean, g(x) - 3 * s.stderr_);
    EXPECT_LE(s.mean, g(x) + p.G * zeta + 3 * s.stderr_);
  }
}

TEST(SmoothedGradient, LinearConvergesToNormal) {
  Vec a(3);
  a << 0.48, 0.6, 0.64;
  const ScalarFn g = [&](const Vec& x) { return a.dot(x) - 0.3; };
  Rng rng(13);
  const McVector s = smoothed_gradient_mc(g, Vec::Zero(3), 0.05, 100000, rng);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LT(std::abs(s.mean[i] - a[i]), 0.02);
    EXPECT_LE(std::abs(s.mean[i] - a[i]), 3 * s.stderr_[i]);
  }
}

TEST(SmoothedGradient, ConstantGivesZeroVector) {
  Rng rng(14);
  const McVector s = smoothed_gradient_mc([](const Vec&) { return 4.2; }, Vec::Ones(4), 0.1, 1000,
                                          rng);
  EXPECT_EQ(s.mean, Vec::Zero(4));
}

TEST(SmoothedGradient, SingleSampleNormBoundedByGd) {
  Rng rng(15);
  const ProblemInstance p = make_polyhedral_problem(rng, 5, 3, 1.0, 0.1);
  const ValueOracle g = [&](const Vec& x) { return max_constraint(x, p.constraints).value; };
  for (int k = 0; k < 10000; ++k) {
    const Vec x = sample_in_ball(rng, 5, 0.9);
    const TwoPointEstimate e = two_point_estimate(g, x, sample_unit_sphere(rng, 5), 0.05);
    EXPECT_LE(e.gradient.norm(), p.G * 5 * (1 + 1e-12));
  }
}

}  // namespace
}  // namespace ltc
