#include "ltc/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ltc/errors.hpp"

namespace ltc {

BallDomain::BallDomain(double radius, double inner_radius)
    : radius_(radius), inner_radius_(inner_radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ball radius must be positive and finite");
  }
  if (!(inner_radius > 0.0) || inner_radius > radius) {
    throw std::invalid_argument("inner radius must satisfy 0 < r <= R");
  }
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::split(std::uint64_t stream_id) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stream_id)));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

void require_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) {
    throw NumericalError(std::string("non-finite entries in ") + what);
  }
}

Vec project_ball(const Vec& x, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("project_ball: radius must be positive");
  require_finite(x, "project_ball input");
  const double norm = x.norm();
  if (norm <= radius) return x;
  Vec y = x * (radius / norm);
  // Rounding can leave the scaled point an ulp outside.
  while (y.norm() > radius) y *= 1.0 - std::numeric_limits<double>::epsilon();
  return y;
}

Multipliers clamp_nonneg(const Multipliers& lambdas) { return lambdas.cwiseMax(0.0); }

Vec project_halfspace(const Vec& x, const Vec& normal, double offset) {
  if (normal.size() != x.size()) throw std::invalid_argument("project_halfspace: dimension mismatch");
  const double nn = normal.squaredNorm();
  if (!(nn > 0.0)) throw std::invalid_argument("project_halfspace: zero normal vector");
  require_finite(x, "project_halfspace input");
  const double excess = normal.dot(x) - offset;
  if (excess <= 0.0) return x;
  double shift = excess / nn;
  Vec y = x - shift * normal;
  double bump = std::numeric_limits<double>::epsilon() *
                std::max(shift, x.cwiseAbs().maxCoeff() / std::sqrt(nn));
  if (!(bump > 0.0)) bump = std::numeric_limits<double>::denorm_min();
  while (normal.dot(y) > offset) {
    shift += bump;
    bump *= 2.0;
    y = x - shift * normal;
  }
  return y;
}

Vec sample_unit_sphere(Rng& rng, int dim) {
  if (dim < 1) throw std::invalid_argument("sample_unit_sphere: dimension must be >= 1");
  Vec u(dim);
  double norm = 0.0;
  do {
    for (int i = 0; i < dim; ++i) u[i] = rng.normal();
    norm = u.norm();
  } while (norm < 1e-12);
  return u / norm;
}

Vec sample_in_ball(Rng& rng, int dim, double radius) {
  Vec u = sample_unit_sphere(rng, dim);
  return u * (radius * std::pow(rng.uniform(), 1.0 / dim));
}

double bregman_euclidean(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("bregman_euclidean: dimension mismatch");
  return 0.5 * (x - y).squaredNorm();
}

}  // namespace ltc
