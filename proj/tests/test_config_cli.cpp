#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "pdfw/config.hpp"
#include "pdfw/experiment.hpp"
#include "pdfw/image_io.hpp"
#include "pdfw/metrics_csv.hpp"

namespace pdfw {
namespace {

namespace fs = std::filesystem;

// A deliberately small experiment: 16x16 grid, 8 views.
std::string small_config(const std::string& output_dir, const std::string& runs,
                         const std::string& lambda = "0.1") {
  return R"({
  "grid": {"nx": 16, "ny": 16, "spacing": 1.0},
  "phantom": {"simulation_upsample": 2,
              "ellipses": [{"center": [0, 0], "axes": [0.7, 0.6], "rotation_deg": 20, "intensity": 1},
                           {"center": [0.2, 0.1], "axes": [0.2, 0.2], "intensity": 0.5}]},
  "geometry": {"num_views": 8, "num_detectors": 24, "detector_spacing": 1.0},
  "noise": {"std": 0.01, "seed": 5},
  "regularization": {"lambda": )" + lambda + R"(},
  "runs": )" + runs + R"(,
  "reference": {"compute_iterations": 50},
  "output_dir": ")" + output_dir + R"("
})";
}

const std::string kTwoRuns =
    R"([{"name": "a", "mode": "PDFW", "schedule": "S1", "k_max": 0},
        {"name": "b", "mode": "PDCP", "schedule": "S2", "k_max": 0, "x0": "backprojection"}])";

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::path(PDFW_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(PDFW_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(Config, ParsesSmallConfig) {
  const auto cfg = parse_config(small_config("out/x", kTwoRuns));
  EXPECT_EQ(cfg.nx, 16u);
  EXPECT_EQ(cfg.phantom.size(), 2u);
  EXPECT_NEAR(cfg.phantom[0].rotation, 20 * 3.14159265358979 / 180, 1e-12);
  EXPECT_EQ(cfg.simulation_upsample, 2u);
  EXPECT_EQ(cfg.offsets, default_offsets_2d());
  ASSERT_EQ(cfg.runs.size(), 2u);
  EXPECT_EQ(cfg.runs[0].schedule.kind(), StepSchedule::Kind::S1);
  EXPECT_EQ(cfg.runs[1].mode, SolverMode::PDCP);
  EXPECT_EQ(cfg.runs[1].x0, InitRule::Backprojection);
  EXPECT_EQ(cfg.reference.compute_iterations, 50u);
  EXPECT_FALSE(cfg.record_wall_time);
}

TEST(Config, CustomSchedule) {
  const std::string runs = R"([{"name": "c", "mode": "PDFW", "k_max": 3,
      "schedule": {"tau": {"rule": "power", "scale": 1, "c": 2, "p": 1},
                   "sigma": {"rule": "inverse_tau"},
                   "alpha": {"rule": "constant", "value": 0.5}, "theta": 0}}])";
  const auto cfg = parse_config(small_config("o", runs));
  const auto st = cfg.runs[0].schedule.eval(2, 2.0);
  EXPECT_DOUBLE_EQ(st.tau, 0.5);
  EXPECT_DOUBLE_EQ(st.sigma, 0.5);
  EXPECT_EQ(st.alpha, 0.5);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_NE(config_error(small_config("o", kTwoRuns, "0")).find("regularization.lambda"), std::string::npos);
  EXPECT_NE(config_error(small_config("o", "[]")).find("runs"), std::string::npos);
  EXPECT_NE(config_error(small_config("o", R"([{"name": "a", "mode": "PDFW", "schedule": "S3", "k_max": 1}])"))
                .find("runs[0].schedule"),
            std::string::npos);
  EXPECT_NE(config_error(small_config("o", R"([{"name": "a", "mode": "LALM", "k_max": 1}])")).find("mode"),
            std::string::npos);
  std::string typo = small_config("o", kTwoRuns);
  typo.replace(typo.find("\"seed\""), 6, "\"sede\"");
  EXPECT_NE(config_error(typo).find("noise.sede: unknown key"), std::string::npos) << config_error(typo);
  EXPECT_NE(config_error("{not json").find("not valid JSON"), std::string::npos);
  EXPECT_NE(config_error(small_config("o", R"([{"name": "a", "mode": "PDFW", "schedule": {"tau": {"rule": "constant", "value": 1},
      "sigma": {"rule": "constant", "value": 1}, "alpha": {"rule": "constant", "value": 2}, "theta": 0}, "k_max": 1}])"))
                .find("alpha"),
            std::string::npos);
}

TEST(Experiment, ZeroIterationsWritesOnlyInitialRow) {
  const auto dir = scratch_dir("kmax0");
  const auto cfg = parse_config(small_config(dir.string(), kTwoRuns));
  const auto outcome = run_experiment(cfg);
  for (const char* name : {"a", "b"}) {
    const auto rec = read_metrics_csv(dir / (std::string(name) + "_metrics.csv"));
    ASSERT_EQ(rec.rows().size(), 1u) << name;
    EXPECT_EQ(rec.rows()[0].k, 0u);
    EXPECT_TRUE(fs::exists(dir / (std::string(name) + "_final.img")));
  }
  EXPECT_TRUE(fs::exists(dir / "reference.img"));
  EXPECT_TRUE(fs::exists(dir / "phantom.img"));
  EXPECT_EQ(read_image(dir / "phantom.img").nx, 32u);
  EXPECT_NE(slurp(dir / "ledger.txt").find("PDFW_theta1"), std::string::npos);
  EXPECT_GT(outcome.lipschitz, 0.0);
}

TEST(Experiment, RunsShareOneSimulation) {
  const auto dir = scratch_dir("shared");
  const std::string runs = R"([{"name": "a", "mode": "PDFW", "schedule": "S2", "k_max": 5},
                               {"name": "b", "mode": "PDFW", "schedule": "S2", "k_max": 5}])";
  const auto outcome = run_experiment(parse_config(small_config(dir.string(), runs)));
  EXPECT_EQ(slurp(dir / "a_metrics.csv"), slurp(dir / "b_metrics.csv"));
  EXPECT_EQ(outcome.runs[0].final_image, outcome.runs[1].final_image);
}

TEST(Experiment, LoadsFrozenReference) {
  const auto dir = scratch_dir("frozen");
  const std::string runs = R"([{"name": "a", "mode": "PDFW", "schedule": "S1", "k_max": 2}])";
  const auto first = run_experiment(parse_config(small_config(dir.string(), runs)));
  std::string text = small_config((dir / "again").string(), runs);
  text.replace(text.find("\"compute_iterations\": 50"), 24, "\"load\": \"" + (dir / "reference.img").string() + "\"");
  const auto second = run_experiment(parse_config(text));
  EXPECT_EQ(first.reference, second.reference);
  EXPECT_EQ(first.reference_cost, second.reference_cost);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch_dir("cli");
  const auto log = dir / "log.txt";
  {
    std::ofstream(dir / "ok.json") << small_config((dir / "out").string(), kTwoRuns);
    std::ofstream(dir / "bad.json") << small_config((dir / "out").string(), kTwoRuns, "0");
  }
  EXPECT_EQ(run_cli("validate " + (dir / "ok.json").string(), log), 0);
  EXPECT_EQ(run_cli("validate " + (dir / "bad.json").string(), log), 1);
  EXPECT_NE(slurp(log).find("regularization.lambda"), std::string::npos);
  EXPECT_EQ(run_cli("run " + (dir / "bad.json").string(), log), 1);
  EXPECT_EQ(run_cli("run " + (dir / "missing.json").string(), log), 3);
  EXPECT_EQ(run_cli("run " + (dir / "ok.json").string(), log), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "a_metrics.csv"));
  EXPECT_EQ(run_cli("frobnicate", log), 1);
}

TEST(Cli, LedgerAndScheduleCheck) {
  const auto dir = scratch_dir("cli_report");
  const auto log = dir / "log.txt";
  EXPECT_EQ(run_cli("ledger --algo PDCP --n 10 --N 40 --m 5", log), 0);
  const auto ledger = slurp(log);
  EXPECT_NE(ledger.find("PDCP"), std::string::npos) << ledger;
  EXPECT_EQ(run_cli("ledger --algo NOPE --n 10 --N 40 --m 5", log), 1);
  EXPECT_EQ(run_cli("schedule-check --schedule S2 --L 2 --K 100", log), 0);
  EXPECT_NE(slurp(log).find("tau_vanishing=false"), std::string::npos);
  EXPECT_EQ(run_cli("schedule-check --schedule S1 --L 2 --K 5", log), 1);
}

}  // namespace
}  // namespace pdfw
