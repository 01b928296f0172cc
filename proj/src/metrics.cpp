#include "ltc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ltc {
namespace {

void check_rounds(std::span<const RunRecord> records) {
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (records[k].t != k + 1) throw std::invalid_argument("run records must cover rounds 1..T");
  }
}

}  // namespace

double regret(std::span<const RunRecord> records, double comparator_total) {
  check_rounds(records);
  double total = 0.0;
  for (const auto& r : records) total += r.loss;
  return total - comparator_total;
}

Violations violations(std::span<const RunRecord> records) {
  if (records.empty()) throw std::invalid_argument("violations: empty trace");
  check_rounds(records);
  const Eigen::Index m = records.front().g_values.size();
  Violations v{Vec::Zero(m), Vec::Zero(m), 0.0};
  for (const auto& r : records) {
    if (r.g_values.size() != m) throw std::invalid_argument("violations: g_values length varies");
    v.raw += r.g_values;
    v.clipped += r.g_values.cwiseMax(0.0);
    if (m > 0) v.max_agg += r.g_values.maxCoeff();
  }
  return v;
}

RunSummary summarize(std::span<const RunRecord> records, double comparator_total) {
  Violations v = violations(records);
  return {regret(records, comparator_total), std::move(v.raw), std::move(v.clipped), v.max_agg};
}

double fit_loglog_slope(std::span<const std::pair<double, double>> points, double floor) {
  if (points.size() < 3) throw std::invalid_argument("fit_loglog_slope: need at least 3 points");
  if (!(floor > 0.0)) throw std::invalid_argument("fit_loglog_slope: floor must be positive");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].first > 0.0)) throw std::invalid_argument("fit_loglog_slope: T must be positive");
    if (i > 0 && !(points[i].first > points[i - 1].first)) {
      throw std::invalid_argument("fit_loglog_slope: T must be strictly increasing");
    }
  }
  const double n = static_cast<double>(points.size());
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& [t, v] : points) {
    sx += std::log(t);
    sy += std::log(std::max(v, floor));
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& [t, v] : points) {
    const double dx = std::log(t) - mx;
    sxy += dx * (std::log(std::max(v, floor)) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace ltc
