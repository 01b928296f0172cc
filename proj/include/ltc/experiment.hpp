#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ltc/learners.hpp"
#include "ltc/metrics.hpp"
#include "ltc/oracle.hpp"
#include "ltc/problems.hpp"

namespace ltc {

enum class Algorithm {
  kAlg1,
  kAlg1Zero,
  kProx,
  kProxZero,
  kBandit,
  kOgdProj,
  kPenaltyLinear,
  kPenaltySquared,
};

enum class LossFamily { kLinear, kQuadratic };
enum class InstanceKind { kPolyhedral, kTheorem1 };

std::string_view algorithm_name(Algorithm alg);
/// Throws ConfigError for unknown names.
Algorithm parse_algorithm(std::string_view name);
LossFamily parse_loss_family(std::string_view name);
InstanceKind parse_instance_kind(std::string_view name);

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::kAlg1;
  int d = 5;
  std::size_t m = 3;
  std::vector<std::size_t> T_grid{1000, 3162, 10000, 31623, 100000};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  LossFamily loss_family = LossFamily::kLinear;
  double R = 1.0;
  double r = 0.1;
  std::filesystem::path out_dir = "out";
  bool trace = false;

  InstanceKind instance = InstanceKind::kPolyhedral;
  /// Bound on ‖∇f_t‖ for generated losses.
  double grad_bound = 1.0;
  /// δ of the penalty baselines.
  double penalty_delta = 0.5;
  /// When false, runtime_ms is written as 0 so summaries are byte-stable.
  bool timing = true;
};

/// Throws ConfigError describing the first violated requirement.
void validate(const ExperimentConfig& cfg);

/// XOR mask separating the learner's random stream from the instance's.
inline constexpr std::uint64_t kLearnerSeedMask = 0x9E3779B97F4A7C15ULL;

/// Instance for one grid point. Constraints come from Rng(seed).split(1),
/// losses from Rng(seed).split(2); a longer horizon extends the same sequence.
ProblemInstance make_instance(const ExperimentConfig& cfg, std::size_t horizon,
                              std::uint64_t seed);

/// Parameters for `alg` on `problem`; throws ScheduleError when the horizon is
/// inadmissible.
ScheduleParams schedule_for(Algorithm alg, const ProblemInstance& problem, double penalty_delta);

/// Plays every round of problem.losses and records (x_t, f_t(x_t), g(x_t), ‖λ_t‖).
std::vector<RunRecord> run_learner(Algorithm alg, const ProblemInstance& problem,
                                   const ScheduleParams& params, Rng& learner_rng);

struct GridPointResult {
  ProblemInstance problem;
  ScheduleParams params;
  std::vector<RunRecord> records;
  FixedDecision comparator;
  RunSummary summary;
};

GridPointResult run_grid_point(const ExperimentConfig& cfg, std::size_t horizon,
                               std::uint64_t seed);

struct SummaryRow {
  std::string algorithm;
  std::size_t T;
  std::uint64_t seed;
  int d;
  std::size_t m;
  double regret;
  double raw_violation_max;
  double clipped_violation_max;
  double agg_violation;
  double runtime_ms;
};

struct WarningRow {
  std::string algorithm;
  std::size_t T;
  std::uint64_t seed;
  int d;
  std::size_t m;
  std::string reason;
};

struct FittedExponents {
  std::size_t points = 0;
  std::optional<double> regret;
  std::optional<double> raw_violation_max;
  std::optional<double> clipped_violation_max;
  std::optional<double> agg_violation;
};

struct ExperimentResult {
  std::vector<SummaryRow> rows;
  std::vector<WarningRow> warnings;
  FittedExponents exponents;
};

/// Runs every (T, seed) pair, writing summary.csv, warnings.csv and, with
/// cfg.trace, one trace_<alg>_T<T>_seed<seed>.csv per run into cfg.out_dir.
/// Inadmissible grid points become warning rows. Progress and the fitted
/// exponents go to `log`.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream& log);

/// Log-log slopes of the per-T means over seeds (floor 1); empty with < 3 T values.
FittedExponents fit_exponents(const std::vector<SummaryRow>& rows);

// ---------------------------------------------------------------------------
// CSV

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Header line, then rows; comma separated, LF line ends, no quoting.
/// Throws std::runtime_error naming the path on I/O failure.
void write_csv(const CsvTable& table, const std::filesystem::path& path);
CsvTable read_csv(const std::filesystem::path& path);

CsvTable summary_table(const std::vector<SummaryRow>& rows);
CsvTable warning_table(const std::vector<WarningRow>& rows);
CsvTable trace_table(const std::vector<RunRecord>& records);

}  // namespace ltc
