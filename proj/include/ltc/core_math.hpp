#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace ltc {

using Vec = Eigen::VectorXd;

/// Nonnegative dual variables, one per constraint.
using Multipliers = Eigen::VectorXd;

/// The ball R·B that every decision lives in, together with the radius r of
/// a ball known to sit inside the feasible set.
class BallDomain {
 public:
  /// Throws std::invalid_argument unless 0 < inner_radius <= radius.
  BallDomain(double radius, double inner_radius);

  double radius() const noexcept { return radius_; }
  double inner_radius() const noexcept { return inner_radius_; }

 private:
  double radius_;
  double inner_radius_;
};

/// Seedable, splittable random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Child streams are seeded with SplitMix64(seed ^ SplitMix64(id)),
/// so a (seed, id) pair always names the same stream. Uniform and normal
/// variates are derived from raw 64-bit words here rather than through
/// <random> distributions, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream identified by `stream_id`; does not advance *this.
  Rng split(std::uint64_t stream_id) const;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal variate (Marsaglia polar method).
  double normal();

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Throws NumericalError naming `what` if any entry is NaN or infinite.
void require_finite(const Vec& v, const char* what);

/// Euclidean projection onto the ball of radius R. The result always has
/// norm <= R in floating point, so the projection is exactly idempotent.
Vec project_ball(const Vec& x, double radius);

/// Componentwise max(0, .).
Multipliers clamp_nonneg(const Multipliers& lambdas);

/// Euclidean projection onto {y : a·y <= b}. Exactly idempotent; the
/// result satisfies a·y <= b in floating point.
Vec project_halfspace(const Vec& x, const Vec& normal, double offset);

/// Uniform direction on the unit sphere in R^d (normalized Gaussian).
Vec sample_unit_sphere(Rng& rng, int dim);

/// Uniform point in the ball of the given radius.
Vec sample_in_ball(Rng& rng, int dim, double radius);

/// Bregman divergence of phi = ½‖·‖², i.e. ½‖x − y‖².
double bregman_euclidean(const Vec& x, const Vec& y);

}  // namespace ltc
