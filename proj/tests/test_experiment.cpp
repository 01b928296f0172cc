#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "ltc/errors.hpp"
#include "ltc/experiment.hpp"

namespace ltc {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ltc_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig small_config(Algorithm alg, const std::string& dir) {
  ExperimentConfig cfg;
  cfg.algorithm = alg;
  cfg.d = 3;
  cfg.m = 2;
  cfg.T_grid = {200, 400, 800};
  cfg.seeds = {1, 2};
  cfg.out_dir = scratch(dir);
  cfg.timing = false;
  return cfg;
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(-3.0), "-3");
  Rng rng(1);
  for (int k = 0; k < 10000; ++k) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-20, 20));
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

TEST(Csv, HeaderOnlyAndRoundTrip) {
  const fs::path dir = scratch("csv");
  fs::create_directories(dir);
  write_csv(CsvTable{{"a", "b"}, {}}, dir / "empty.csv");
  EXPECT_EQ(slurp(dir / "empty.csv"), "a,b\n");

  std::vector<RunRecord> recs;
  Rng rng(2);
  for (std::size_t t = 1; t <= 100; ++t) {
    Vec g(2);
    g << rng.normal(), rng.normal();
    recs.push_back({t, Vec::Zero(1), rng.normal() / 3.0, g, rng.uniform()});
  }
  write_csv(trace_table(recs), dir / "trace.csv");
  const CsvTable back = read_csv(dir / "trace.csv");
  ASSERT_EQ(back.header, (std::vector<std::string>{"t", "loss", "g_max", "lambda_norm"}));
  ASSERT_EQ(back.rows.size(), recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(std::stod(back.rows[i][1]), recs[i].loss);
    EXPECT_EQ(std::stod(back.rows[i][2]), recs[i].g_values.maxCoeff());
    EXPECT_EQ(std::stod(back.rows[i][3]), recs[i].lambda_norm);
  }
  EXPECT_EQ(slurp(dir / "trace.csv").find('\r'), std::string::npos);
}

TEST(Csv, WriteFailureNamesPath) {
  try {
    write_csv(CsvTable{{"a"}, {}}, "/nonexistent_dir_ltc/x.csv");
    FAIL() << "expected failure";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent_dir_ltc/x.csv"), std::string::npos);
  }
}

TEST(Config, Validation) {
  ExperimentConfig cfg = small_config(Algorithm::kAlg1, "cfg");
  EXPECT_NO_THROW(validate(cfg));
  auto bad = cfg;
  bad.T_grid = {100, 100};
  EXPECT_THROW(validate(bad), ConfigError);
  bad = cfg;
  bad.seeds.clear();
  EXPECT_THROW(validate(bad), ConfigError);
  bad = cfg;
  bad.r = 2 * bad.R;
  EXPECT_THROW(validate(bad), ConfigError);
  bad = cfg;
  bad.r = 0.9;
  EXPECT_THROW(validate(bad), ConfigError);
  bad = cfg;
  bad.instance = InstanceKind::kTheorem1;
  EXPECT_THROW(validate(bad), ConfigError);
  EXPECT_THROW(parse_algorithm("sgd"), ConfigError);
  EXPECT_EQ(parse_algorithm("penalty-squared"), Algorithm::kPenaltySquared);
  EXPECT_EQ(algorithm_name(Algorithm::kAlg1Zero), "alg1-zero");
  EXPECT_THROW(parse_loss_family("cubic"), ConfigError);
}

TEST(Experiment, SummaryColumnsAndRows) {
  const ExperimentConfig cfg = small_config(Algorithm::kAlg1, "summary");
  std::ostringstream log;
  const ExperimentResult r = run_experiment(cfg, log);
  EXPECT_EQ(r.rows.size(), 6u);
  const CsvTable t = read_csv(cfg.out_dir / "summary.csv");
  EXPECT_EQ(t.header, (std::vector<std::string>{"algorithm", "T", "seed", "d", "m", "regret",
                                                "raw_violation_max", "clipped_violation_max",
                                                "agg_violation", "runtime_ms"}));
  EXPECT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.rows[0][0], "alg1");
  EXPECT_TRUE(r.exponents.regret.has_value());
  EXPECT_NE(log.str().find("fitted exponents"), std::string::npos);
}

TEST(Experiment, ByteIdenticalReruns) {
  for (Algorithm alg : {Algorithm::kAlg1, Algorithm::kBandit, Algorithm::kOgdProj}) {
    ExperimentConfig cfg = small_config(alg, "det_a");
    cfg.trace = true;
    std::ostringstream log;
    run_experiment(cfg, log);
    const std::string first = slurp(cfg.out_dir / "summary.csv");
    const std::string trace =
        slurp(cfg.out_dir / ("trace_" + std::string(algorithm_name(alg)) + "_T200_seed1.csv"));
    cfg.out_dir = scratch("det_b");
    run_experiment(cfg, log);
    EXPECT_EQ(first, slurp(cfg.out_dir / "summary.csv"));
    EXPECT_EQ(trace,
              slurp(cfg.out_dir / ("trace_" + std::string(algorithm_name(alg)) + "_T200_seed1.csv")));
  }
}

TEST(Experiment, RegretRecomputableFromTrace) {
  ExperimentConfig cfg = small_config(Algorithm::kAlg1, "recompute");
  cfg.trace = true;
  std::ostringstream log;
  const ExperimentResult r = run_experiment(cfg, log);
  for (const auto& row : r.rows) {
    const CsvTable t = read_csv(cfg.out_dir / ("trace_alg1_T" + std::to_string(row.T) + "_seed" +
                                               std::to_string(row.seed) + ".csv"));
    double total = 0.0;
    for (const auto& line : t.rows) total += std::stod(line[1]);
    const ProblemInstance p = make_instance(cfg, row.T, row.seed);
    const FixedDecision star = best_fixed_decision(p, p.losses);
    EXPECT_NEAR(total - star.total_loss, row.regret, 1e-9);
  }
}

TEST(Experiment, InadmissibleGridPointsBecomeWarnings) {
  ExperimentConfig cfg = small_config(Algorithm::kProx, "warn");
  cfg.m = 1;
  cfg.T_grid = {500, 1312};
  cfg.seeds = {3};
  std::ostringstream log;
  const ExperimentResult r = run_experiment(cfg, log);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].T, 500u);
  EXPECT_NE(r.warnings[0].reason.find("1312"), std::string::npos);
  ASSERT_EQ(r.rows.size(), 1u);
  const CsvTable w = read_csv(cfg.out_dir / "warnings.csv");
  EXPECT_EQ(w.header.back(), "reason");
  EXPECT_EQ(w.rows.size(), 1u);
  EXPECT_FALSE(r.exponents.regret.has_value());
}

TEST(Experiment, ProjectedBaselineStaysFeasible) {
  ExperimentConfig cfg = small_config(Algorithm::kOgdProj, "ogd");
  cfg.loss_family = LossFamily::kQuadratic;
  std::ostringstream log;
  const ExperimentResult r = run_experiment(cfg, log);
  for (const auto& row : r.rows) {
    EXPECT_LE(row.clipped_violation_max, 1e-6 * static_cast<double>(row.T));
  }
}

TEST(Experiment, RegretAboveRangeBound) {
  for (Algorithm alg : {Algorithm::kAlg1, Algorithm::kBandit, Algorithm::kPenaltyLinear,
                        Algorithm::kPenaltySquared}) {
    const ExperimentConfig cfg = small_config(alg, "range");
    for (const std::size_t T : cfg.T_grid) {
      const GridPointResult g = run_grid_point(cfg, T, 5);
      EXPECT_GE(g.summary.regret, -g.problem.F * static_cast<double>(T));
    }
  }
}

TEST(Experiment, PenaltyOnTheorem1InstanceViolatesLinearly) {
  ExperimentConfig cfg = small_config(Algorithm::kPenaltyLinear, "thm1");
  cfg.instance = InstanceKind::kTheorem1;
  cfg.R = 2.0;
  cfg.r = 1.0;
  cfg.T_grid = {100, 1000, 10000};
  cfg.seeds = {1};
  std::ostringstream log;
  const ExperimentResult r = run_experiment(cfg, log);
  ASSERT_TRUE(r.exponents.clipped_violation_max.has_value());
  EXPECT_GE(*r.exponents.clipped_violation_max, 0.9);
}

TEST(Experiment, LearnerStreamIsSeparateFromInstance) {
  const ExperimentConfig cfg = small_config(Algorithm::kBandit, "seeds");
  const ProblemInstance a = make_instance(cfg, 80, 7);
  const ProblemInstance b = make_instance(cfg, 120, 7);
  for (std::size_t t = 0; t < 80; ++t) {
    EXPECT_EQ(a.losses[t].linear_term(), b.losses[t].linear_term());
  }
  const ScheduleParams p = schedule_for(Algorithm::kBandit, a, 0.5);
  Rng r1(1), r2(2);
  const auto x1 = run_learner(Algorithm::kBandit, a, p, r1);
  const auto x2 = run_learner(Algorithm::kBandit, a, p, r2);
  EXPECT_NE(x1.back().x, x2.back().x);
}

#ifdef LTC_RUN_PATH
int run_cli(const std::string& args) {
  const std::string cmd = std::string(LTC_RUN_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  EXPECT_EQ(run_cli("run --alg alg1 --d 3 --m 2 --T 200,400,800 --seeds 1 --out " + dir.string()),
            0);
  EXPECT_TRUE(fs::exists(dir / "summary.csv"));
  EXPECT_EQ(run_cli("run --alg nope --out " + dir.string()), 1);
  EXPECT_EQ(run_cli("run --alg alg1 --T 400,200 --out " + dir.string()), 1);
  EXPECT_EQ(run_cli("run --alg alg1 --d x --out " + dir.string()), 1);
  EXPECT_EQ(run_cli("run --alg alg1 --T 200 --seeds 1 --out /proc/ltc_denied"), 2);
}
#endif

}  // namespace
}  // namespace ltc
