#include <cmath>
#include <functional>
#include <sstream>

#include "ltc/errors.hpp"
#include "ltc/learners.hpp"

namespace ltc {
namespace {

// Smallest T >= 1 with admissible(T), refined from an analytic guess.
// Assumes admissibility is monotone in T.
std::size_t first_admissible(const std::function<bool(std::size_t)>& admissible, double guess) {
  std::size_t t = guess < 1.0 ? 1 : static_cast<std::size_t>(std::ceil(guess));
  while (t > 1 && admissible(t - 1)) --t;
  for (int i = 0; i < 1'000'000 && !admissible(t); ++i) ++t;
  return t;
}

[[noreturn]] void throw_horizon(const char* schedule, std::size_t horizon, std::size_t min_t,
                                const char* condition) {
  std::ostringstream msg;
  msg << schedule << ": T=" << horizon << " violates " << condition
      << "; minimal admissible T is " << min_t;
  throw ScheduleError(msg.str(), min_t);
}

double sqrt_t(std::size_t horizon) { return std::sqrt(static_cast<double>(horizon)); }

}  // namespace

ScheduleParams alg1_schedule(std::size_t horizon, std::size_t num_constraints, double G, double D,
                             double R) {
  if (num_constraints == 0) throw ScheduleError("alg1_schedule: at least one constraint required");
  if (horizon == 0) throw ScheduleError("alg1_schedule: T must be positive", 1);
  const double m = static_cast<double>(num_constraints);
  const double a = R * std::sqrt((m + 1.0) * G * G + 2.0 * m * D * D);
  if (!(a > 0.0)) throw ScheduleError("alg1_schedule: degenerate constants (G = D = 0)");
  const double delta = 2.0 * (m + 1.0) * G * G;

  auto eta_of = [&](std::size_t t) { return R * R / (a * sqrt_t(t)); };
  auto admissible = [&](std::size_t t) {
    const double eta = eta_of(t);
    return 2.0 * std::sqrt(2.0) * eta * (m + 1.0) <= 1.0 &&
           delta >= (m + 1.0) * G * G + 2.0 * m * delta * delta * eta * eta;
  };
  if (!admissible(horizon)) {
    const double eta_max =
        std::min(1.0 / (2.0 * std::sqrt(2.0) * (m + 1.0)),
                 std::sqrt((delta - (m + 1.0) * G * G) / (2.0 * m * delta * delta)));
    const double guess = std::pow(R * R / (a * eta_max), 2.0);
    throw_horizon("alg1_schedule", horizon, first_admissible(admissible, guess),
                  "2√2·η(m+1) <= 1 or δ >= (m+1)G² + 2mδ²η²");
  }
  ScheduleParams p;
  p.a = a;
  p.eta = eta_of(horizon);
  p.delta = delta;
  return p;
}

ScheduleParams alg1_zero_violation_schedule(std::size_t horizon, double G, double D, double R,
                                            double F) {
  if (horizon == 0) throw ScheduleError("alg1_zero_violation_schedule: T must be positive", 1);
  const double delta = 4.0 * G * G;
  auto a_of = [&](double b) { return 2.0 * R / std::sqrt(2.0 * G * G + 3.0 * (D * D + b * b)); };
  auto b_of = [&](double a) { return 2.0 * std::sqrt(F * (delta * R * R / a + a / (R * R))); };

  double b = 0.0;
  double a = a_of(b);
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    a = a_of(b);
    const double next = b_of(a);
    const bool done = std::abs(next - b) < 1e-12;
    b = next;
    if (done) {
      converged = true;
      break;
    }
  }
  if (!converged || !std::isfinite(a) || !std::isfinite(b)) {
    throw NumericalError("alg1_zero_violation_schedule: (a, b) fixed point did not converge");
  }
  a = a_of(b);
  const double scale = std::max(1.0, b);
  if (std::abs(b - b_of(a)) > 1e-10 * scale || std::abs(a - a_of(b)) > 1e-10 * std::max(1.0, a)) {
    throw NumericalError("alg1_zero_violation_schedule: fixed-point residual above 1e-10");
  }

  auto eta_of = [&](std::size_t t) { return R * R / (a * sqrt_t(t)); };
  auto admissible = [&](std::size_t t) {
    const double eta = eta_of(t);
    return F * static_cast<double>(t) >= a * sqrt_t(t) &&
           delta >= 2.0 * G * G + 3.0 * delta * delta * eta * eta;
  };
  if (!admissible(horizon)) {
    if (!(F > 0.0)) {
      throw ScheduleError("alg1_zero_violation_schedule: F must be positive");
    }
    // F·T >= a√T  <=>  T >= (a/F)²;  δ >= 2G² + 3δ²η²  <=>  η² <= (δ − 2G²)/(3δ²).
    const double eta_max = std::sqrt((delta - 2.0 * G * G) / (3.0 * delta * delta));
    const double guess = std::max(std::pow(a / F, 2.0), std::pow(R * R / (a * eta_max), 2.0));
    throw_horizon("alg1_zero_violation_schedule", horizon, first_admissible(admissible, guess),
                  "F·T >= a√T or δ >= 2G² + 3δ²η²");
  }
  ScheduleParams p;
  p.a = a;
  p.b = b;
  p.delta = delta;
  p.eta = eta_of(horizon);
  p.gamma = b * std::pow(static_cast<double>(horizon), -0.25);
  return p;
}

std::size_t prox_min_horizon(std::size_t num_constraints) {
  const std::size_t k = num_constraints + 1;
  return 164 * k * k * k;
}

ScheduleParams prox_schedule(std::size_t horizon, std::size_t num_constraints, ProxVariant variant,
                             double F) {
  if (num_constraints == 0) throw ScheduleError("prox_schedule: at least one constraint required");
  const std::size_t min_t = prox_min_horizon(num_constraints);
  if (horizon < min_t) throw_horizon("prox_schedule", horizon, min_t, "T >= 164(m+1)³");
  const double t = static_cast<double>(horizon);
  const double m = static_cast<double>(num_constraints);
  ScheduleParams p;
  p.eta = std::pow(t, -1.0 / 3.0);
  if (variant == ProxVariant::kViolating) {
    p.delta = std::pow(t, -2.0 / 3.0);
  } else {
    if (F < 0.0) throw ScheduleError("prox_schedule: F must be nonnegative");
    p.delta = p.eta;
    p.b = 2.0 * std::sqrt(F);
    p.gamma = p.b * p.eta;
  }
  if (p.eta * (m + p.delta * p.delta * p.eta * p.eta) > 0.25) {
    throw ScheduleError("prox_schedule: η(m + δ²η²) <= 1/4 fails", min_t);
  }
  return p;
}

ScheduleParams bandit_schedule(std::size_t horizon, int dim, double G, double D, double R,
                               double r) {
  if (horizon == 0) throw ScheduleError("bandit_schedule: T must be positive", 1);
  if (dim < 1) throw ScheduleError("bandit_schedule: d must be >= 1");
  if (!(r > 0.0) || r > R) throw ScheduleError("bandit_schedule: need 0 < r <= R");
  const double d = static_cast<double>(dim);
  const double delta = 4.0 * d * d * G * G;
  auto eta_of = [&](std::size_t t) { return R / std::sqrt(2.0 * (D * D + G * G) * static_cast<double>(t)); };
  auto admissible = [&](std::size_t t) {
    const double eta = eta_of(t);
    const double zeta = std::min(1.0 / static_cast<double>(t), 0.5 * r);
    return zeta / r < 1.0 && delta >= 2.0 * (d * d * G * G + eta * eta * delta * delta);
  };
  if (!(G > 0.0)) throw ScheduleError("bandit_schedule: G must be positive");
  if (!admissible(horizon)) {
    // δ >= 2(d²G² + η²δ²)  <=>  η² <= (δ − 2d²G²)/(2δ²).
    const double eta_max = std::sqrt((delta - 2.0 * d * d * G * G) / (2.0 * delta * delta));
    const double guess = R * R / (2.0 * (D * D + G * G) * eta_max * eta_max);
    throw_horizon("bandit_schedule", horizon, first_admissible(admissible, guess),
                  "ξ < 1 or δ >= 2(d²G² + η²δ²)");
  }
  ScheduleParams p;
  p.eta = eta_of(horizon);
  p.delta = delta;
  p.zeta = std::min(1.0 / static_cast<double>(horizon), 0.5 * r);
  p.xi = p.zeta / r;
  return p;
}

}  // namespace ltc
