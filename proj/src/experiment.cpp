#include "ltc/experiment.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "ltc/errors.hpp"

namespace ltc {
namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 8> kAlgorithmNames{{
    {Algorithm::kAlg1, "alg1"},
    {Algorithm::kAlg1Zero, "alg1-zero"},
    {Algorithm::kProx, "prox"},
    {Algorithm::kProxZero, "prox-zero"},
    {Algorithm::kBandit, "bandit"},
    {Algorithm::kOgdProj, "ogd-proj"},
    {Algorithm::kPenaltyLinear, "penalty-linear"},
    {Algorithm::kPenaltySquared, "penalty-squared"},
}};

double max_or_zero(const Vec& v) { return v.size() == 0 ? 0.0 : v.maxCoeff(); }

RunRecord make_record(std::size_t t, const Vec& x, const LossFn& loss,
                      std::span<const ConstraintFn> constraints, double lambda_norm) {
  Vec g(static_cast<Eigen::Index>(constraints.size()));
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    g[static_cast<Eigen::Index>(i)] = constraints[i].value(x);
  }
  return {t, x, loss.value(x), std::move(g), lambda_norm};
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::string_view algorithm_name(Algorithm alg) {
  for (const auto& [a, name] : kAlgorithmNames) {
    if (a == alg) return name;
  }
  throw std::logic_error("algorithm_name: unknown algorithm");
}

Algorithm parse_algorithm(std::string_view name) {
  for (const auto& [a, n] : kAlgorithmNames) {
    if (n == name) return a;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

LossFamily parse_loss_family(std::string_view name) {
  if (name == "linear") return LossFamily::kLinear;
  if (name == "quadratic") return LossFamily::kQuadratic;
  throw ConfigError("unknown loss family '" + std::string(name) + "'");
}

InstanceKind parse_instance_kind(std::string_view name) {
  if (name == "polyhedral") return InstanceKind::kPolyhedral;
  if (name == "theorem1") return InstanceKind::kTheorem1;
  throw ConfigError("unknown instance '" + std::string(name) + "'");
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.d < 1) throw ConfigError("d must be >= 1");
  if (cfg.T_grid.empty()) throw ConfigError("T grid must be nonempty");
  for (std::size_t i = 0; i < cfg.T_grid.size(); ++i) {
    if (cfg.T_grid[i] == 0) throw ConfigError("T values must be positive");
    if (i > 0 && cfg.T_grid[i] <= cfg.T_grid[i - 1]) {
      throw ConfigError("T grid must be strictly increasing");
    }
  }
  if (cfg.seeds.empty()) throw ConfigError("seed list must be nonempty");
  std::vector<std::uint64_t> sorted = cfg.seeds;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError("seeds must be distinct");
  }
  if (!(cfg.R > 0.0) || !std::isfinite(cfg.R)) throw ConfigError("R must be positive");
  if (!(cfg.r > 0.0) || cfg.r > cfg.R) throw ConfigError("r must satisfy 0 < r <= R");
  if (!(cfg.grad_bound > 0.0) || !std::isfinite(cfg.grad_bound)) {
    throw ConfigError("grad-bound must be positive");
  }
  if (!(cfg.penalty_delta > 0.0)) throw ConfigError("penalty delta must be positive");
  if (cfg.out_dir.empty()) throw ConfigError("output directory must be set");
  if (cfg.instance == InstanceKind::kPolyhedral) {
    if (cfg.m < 1) throw ConfigError("m must be >= 1");
    if (std::max(cfg.r, 0.2 * cfg.R) > 0.8 * cfg.R) {
      throw ConfigError("polyhedral instances need r <= 0.8R");
    }
  } else if (!(cfg.R > 1.0)) {
    throw ConfigError("theorem1 instance needs R > 1");
  }
  // Every generated instance has linear constraints, so the mirror-prox
  // learners' linearity requirement always holds here.
}

ProblemInstance make_instance(const ExperimentConfig& cfg, std::size_t horizon,
                              std::uint64_t seed) {
  if (cfg.instance == InstanceKind::kTheorem1) return theorem1_instance(cfg.d, horizon, cfg.R);
  const Rng base(seed);
  Rng constraint_rng = base.split(1);
  Rng loss_rng = base.split(2);
  ProblemInstance problem = make_polyhedral_problem(constraint_rng, cfg.d, cfg.m, cfg.R, cfg.r);
  std::vector<LossFn> losses =
      cfg.loss_family == LossFamily::kLinear
          ? make_linear_losses(loss_rng, cfg.d, horizon, cfg.grad_bound)
          : make_quadratic_losses(loss_rng, cfg.d, horizon, cfg.grad_bound / (2.0 * cfg.R), cfg.R,
                                  cfg.R);
  return with_losses(std::move(problem), std::move(losses));
}

ScheduleParams schedule_for(Algorithm alg, const ProblemInstance& p, double penalty_delta) {
  const std::size_t T = p.horizon();
  switch (alg) {
    case Algorithm::kAlg1:
      return alg1_schedule(T, p.num_constraints(), p.G, p.D, p.radius());
    case Algorithm::kAlg1Zero:
      return alg1_zero_violation_schedule(T, p.G, p.D, p.radius(), p.F);
    case Algorithm::kProx:
      return prox_schedule(T, p.num_constraints(), ProxVariant::kViolating, p.F);
    case Algorithm::kProxZero:
      return prox_schedule(T, p.num_constraints(), ProxVariant::kZeroViolation, p.F);
    case Algorithm::kBandit:
      return bandit_schedule(T, p.dim(), p.G, p.D, p.radius(), p.domain.inner_radius());
    case Algorithm::kOgdProj:
    case Algorithm::kPenaltyLinear:
    case Algorithm::kPenaltySquared: {
      if (T == 0) throw ScheduleError("baseline schedule: T must be positive", 1);
      ScheduleParams params;
      params.eta = p.radius() / (p.G * std::sqrt(static_cast<double>(T)));
      params.delta = penalty_delta;
      return params;
    }
  }
  throw std::logic_error("schedule_for: unknown algorithm");
}

std::vector<RunRecord> run_learner(Algorithm alg, const ProblemInstance& problem,
                                   const ScheduleParams& params, Rng& learner_rng) {
  const std::span<const ConstraintFn> constraints(problem.constraints);
  const double R = problem.radius();
  const int d = problem.dim();
  std::vector<RunRecord> records;
  records.reserve(problem.horizon());
  std::size_t t = 0;

  switch (alg) {
    case Algorithm::kAlg1:
    case Algorithm::kAlg1Zero: {
      const bool zero = alg == Algorithm::kAlg1Zero;
      PrimalDualState state = initial_primal_dual(d, zero ? 1 : constraints.size());
      for (const LossFn& f : problem.losses) {
        records.push_back(make_record(++t, state.x, f, constraints, state.lambdas.norm()));
        const Vec grad = f.gradient(state.x);
        state = zero ? alg1_zero_violation_step(state, grad, constraints, params, R)
                     : alg1_step(state, grad, constraints, params, R);
      }
      break;
    }
    case Algorithm::kProx:
    case Algorithm::kProxZero: {
      ProxState state = initial_prox(d, constraints.size());
      for (const LossFn& f : problem.losses) {
        auto [next, x] = prox_step(
            state, [&f](const Vec& v) { return f.gradient(v); }, constraints, params, R);
        state = std::move(next);
        records.push_back(make_record(++t, x, f, constraints, state.lambdas.norm()));
      }
      break;
    }
    case Algorithm::kBandit: {
      const ValueOracle g = [&](const Vec& v) { return max_constraint(v, constraints).value; };
      const double lambda_cap = problem.D / (params.delta * params.eta);
      BanditState state = initial_bandit(d);
      for (const LossFn& f : problem.losses) {
        records.push_back(make_record(++t, state.x, f, constraints, state.lambda));
        state = bandit_step(state, f.gradient(state.x), g, params, R, learner_rng);
        if (state.lambda > lambda_cap * (1.0 + 1e-12)) {
          throw NumericalError("bandit dual iterate exceeds D/(δη)");
        }
      }
      break;
    }
    case Algorithm::kOgdProj: {
      const OracleConfig proj = default_projection_config();
      const Projection project = [&](const Vec& v) {
        return dykstra_project(v, constraints, R, proj);
      };
      Vec x = project(Vec::Zero(d));
      for (const LossFn& f : problem.losses) {
        records.push_back(make_record(++t, x, f, constraints, 0.0));
        x = projected_ogd_step(x, f.gradient(x), project, params.eta);
      }
      break;
    }
    case Algorithm::kPenaltyLinear:
    case Algorithm::kPenaltySquared: {
      const PenaltyMode mode =
          alg == Algorithm::kPenaltyLinear ? PenaltyMode::kLinear : PenaltyMode::kSquared;
      Vec x = Vec::Zero(d);
      for (const LossFn& f : problem.losses) {
        records.push_back(make_record(++t, x, f, constraints, 0.0));
        x = penalty_ogd_step(x, f.gradient(x), constraints, params.delta, params.eta, mode, R);
      }
      break;
    }
  }
  return records;
}

GridPointResult run_grid_point(const ExperimentConfig& cfg, std::size_t horizon,
                               std::uint64_t seed) {
  ProblemInstance problem = make_instance(cfg, horizon, seed);
  ScheduleParams params = schedule_for(cfg.algorithm, problem, cfg.penalty_delta);
  Rng learner_rng(seed ^ kLearnerSeedMask);
  std::vector<RunRecord> records = run_learner(cfg.algorithm, problem, params, learner_rng);
  FixedDecision comparator = best_fixed_decision(problem, problem.losses);
  RunSummary summary = summarize(records, comparator.total_loss);
  return {std::move(problem), params, std::move(records), std::move(comparator),
          std::move(summary)};
}

FittedExponents fit_exponents(const std::vector<SummaryRow>& rows) {
  struct Acc {
    double n = 0, regret = 0, raw = 0, clipped = 0, agg = 0;
  };
  std::map<std::size_t, Acc> by_t;
  for (const auto& row : rows) {
    Acc& a = by_t[row.T];
    a.n += 1;
    a.regret += row.regret;
    a.raw += row.raw_violation_max;
    a.clipped += row.clipped_violation_max;
    a.agg += row.agg_violation;
  }
  FittedExponents out;
  out.points = by_t.size();
  if (by_t.size() < 3) return out;
  std::vector<std::pair<double, double>> regret, raw, clipped, agg;
  for (const auto& [T, a] : by_t) {
    const double t = static_cast<double>(T);
    regret.emplace_back(t, a.regret / a.n);
    raw.emplace_back(t, a.raw / a.n);
    clipped.emplace_back(t, a.clipped / a.n);
    agg.emplace_back(t, a.agg / a.n);
  }
  out.regret = fit_loglog_slope(regret);
  out.raw_violation_max = fit_loglog_slope(raw);
  out.clipped_violation_max = fit_loglog_slope(clipped);
  out.agg_violation = fit_loglog_slope(agg);
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  validate(cfg);
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + cfg.out_dir.string() + ": " +
                             ec.message());
  }
  const std::string alg(algorithm_name(cfg.algorithm));
  const std::size_t m = cfg.instance == InstanceKind::kTheorem1 ? 1 : cfg.m;

  ExperimentResult result;
  for (const std::size_t T : cfg.T_grid) {
    for (const std::uint64_t seed : cfg.seeds) {
      const auto start = std::chrono::steady_clock::now();
      std::optional<GridPointResult> point;
      try {
        point.emplace(run_grid_point(cfg, T, seed));
      } catch (const ScheduleError& e) {
        log << "skip " << alg << " T=" << T << " seed=" << seed << ": " << e.what() << '\n';
        result.warnings.push_back({alg, T, seed, cfg.d, m, sanitize(e.what())});
        continue;
      }
      const double ms =
          cfg.timing ? std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                                 start)
                           .count()
                     : 0.0;
      const RunSummary& s = point->summary;
      result.rows.push_back({alg, T, seed, cfg.d, point->problem.num_constraints(), s.regret,
                             max_or_zero(s.raw_violation), max_or_zero(s.clipped_violation),
                             s.max_violation, ms});
      if (cfg.trace) {
        write_csv(trace_table(point->records),
                  cfg.out_dir / ("trace_" + alg + "_T" + std::to_string(T) + "_seed" +
                                 std::to_string(seed) + ".csv"));
      }
      log << alg << " T=" << T << " seed=" << seed << " regret=" << format_double(s.regret)
          << " agg_violation=" << format_double(s.max_violation) << '\n';
    }
  }
  write_csv(summary_table(result.rows), cfg.out_dir / "summary.csv");
  write_csv(warning_table(result.warnings), cfg.out_dir / "warnings.csv");

  result.exponents = fit_exponents(result.rows);
  const FittedExponents& e = result.exponents;
  log << "fitted exponents for " << alg << " over " << e.points << " T values (mean over seeds, floor 1)\n";
  auto line = [&log](const char* name, const std::optional<double>& v) {
    log << "  " << name << ": " << (v ? format_double(*v) : std::string("n/a (need >= 3 T values)"))
        << '\n';
  };
  line("regret", e.regret);
  line("raw_violation_max", e.raw_violation_max);
  line("clipped_violation_max", e.clipped_violation_max);
  line("agg_violation", e.agg_violation);
  return result;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), end);
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  auto write_line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out << ',';
      out << fields[i];
    }
    out << '\n';
  };
  write_line(table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) {
      throw std::invalid_argument("write_csv: row width differs from header in " + path.string());
    }
    write_line(row);
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  auto split = [](const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
  };
  CsvTable table;
  std::string line;
  if (std::getline(in, line)) table.header = split(line);
  while (std::getline(in, line)) table.rows.push_back(split(line));
  return table;
}

CsvTable summary_table(const std::vector<SummaryRow>& rows) {
  CsvTable t{{"algorithm", "T", "seed", "d", "m", "regret", "raw_violation_max",
              "clipped_violation_max", "agg_violation", "runtime_ms"},
             {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.algorithm, std::to_string(r.T), std::to_string(r.seed),
                      std::to_string(r.d), std::to_string(r.m), format_double(r.regret),
                      format_double(r.raw_violation_max), format_double(r.clipped_violation_max),
                      format_double(r.agg_violation), format_double(r.runtime_ms)});
  }
  return t;
}

CsvTable warning_table(const std::vector<WarningRow>& rows) {
  CsvTable t{{"algorithm", "T", "seed", "d", "m", "reason"}, {}};
  for (const auto& r : rows) {
    t.rows.push_back({r.algorithm, std::to_string(r.T), std::to_string(r.seed),
                      std::to_string(r.d), std::to_string(r.m), sanitize(r.reason)});
  }
  return t;
}

CsvTable trace_table(const std::vector<RunRecord>& records) {
  CsvTable t{{"t", "loss", "g_max", "lambda_norm"}, {}};
  t.rows.reserve(records.size());
  for (const auto& r : records) {
    t.rows.push_back({std::to_string(r.t), format_double(r.loss),
                      format_double(max_or_zero(r.g_values)), format_double(r.lambda_norm)});
  }
  return t;
}

}  // namespace ltc
