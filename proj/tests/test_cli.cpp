#include "cli.hpp"

#include <gtest/gtest.h>

#include "arcgd/report.hpp"

using namespace arcgd;
using namespace arcgd::cli;

namespace {

const std::filesystem::path kTmp =
    std::filesystem::temp_directory_path() / "arcgd_cli_tests";

}  // namespace

TEST(ParseCli, BenchRosenbrock) {
  const CliCommand cmd = parse_cli(
      {"bench-rosenbrock", "--config", "A", "--dims", "2,10", "--runs", "10"});
  const auto& args = std::get<RosenbrockArgs>(cmd);
  EXPECT_EQ(args.config, "A");
  EXPECT_EQ(args.dims, (std::vector<std::size_t>{2, 10}));
  EXPECT_EQ(args.runs, 10u);
  EXPECT_EQ(args.seed, 42u);  // default master seed
}

TEST(ParseCli, RejectsBadUsage) {
  EXPECT_THROW(parse_cli({"bench-rosenbrock", "--config", "C"}), UsageError);
  EXPECT_THROW(parse_cli({}), UsageError);
  EXPECT_THROW(parse_cli({"frobnicate"}), UsageError);
  EXPECT_THROW(parse_cli({"bench-rosenbrock", "--unknown-flag"}), UsageError);
  EXPECT_THROW(parse_cli({"bench-rosenbrock", "--runs", "-3"}), UsageError);
  EXPECT_THROW(parse_cli({"train-mlp", "--optimizer", "sgd"}), UsageError);
  EXPECT_THROW(parse_cli({"train-mlp", "--synthetic", "--data", "x.bin"}),
               UsageError);
  EXPECT_THROW(parse_cli({"train-mlp", "--synthetic", "--arch", "giant"}),
               UsageError);
  EXPECT_THROW(parse_cli({"report"}), UsageError);
}

TEST(ParseCli, TrainDefaultsAndOverrides) {
  const CliCommand cmd = parse_cli({"train-mlp", "--synthetic", "--optimizer",
                                    "lion", "--max-iters", "500", "--seed",
                                    "7", "--eta-low", "0.1"});
  const auto& args = std::get<TrainArgs>(cmd);
  EXPECT_TRUE(args.synthetic);
  EXPECT_EQ(args.optimizer, "lion");
  EXPECT_EQ(args.max_iters, 500u);
  EXPECT_EQ(args.seed, 7u);
  EXPECT_DOUBLE_EQ(args.eta_low, 0.1);
}

TEST(ParseCli, UsageErrorCarriesNonzeroExit) {
  try {
    parse_cli({"bench-rosenbrock", "--config", "C"});
    FAIL() << "expected UsageError";
  } catch (const UsageError& e) {
    EXPECT_NE(e.exit_code, 0);
  }
}

TEST(RunCommand, BenchRosenbrockEndToEnd) {
  std::filesystem::remove_all(kTmp);
  RosenbrockArgs args;
  args.dims = {2};
  args.runs = 2;
  args.out = (kTmp / "bench").string();
  EXPECT_EQ(run_command(CliCommand{args}), 0);

  const auto records_file = kTmp / "bench" / "A2_records.csv";
  ASSERT_TRUE(std::filesystem::exists(records_file));
  ASSERT_TRUE(std::filesystem::exists(kTmp / "bench" / "summary.json"));
  ASSERT_TRUE(std::filesystem::exists(kTmp / "bench" / "metadata.json"));

  const auto records = parse_run_csv(records_file);
  EXPECT_EQ(records.size(), 4u);  // 2 runs x 2 optimizers
}

TEST(RunCommand, ReportRoundTrip) {
  ReportArgs args;
  args.data = (kTmp / "bench" / "A2_records.csv").string();
  args.out = (kTmp / "report").string();
  EXPECT_EQ(run_command(CliCommand{args}), 0);
  EXPECT_TRUE(std::filesystem::exists(kTmp / "report" / "summary.json"));
}

TEST(RunCommand, TrainSyntheticEndToEnd) {
  TrainArgs args;
  args.synthetic = true;
  args.optimizer = "sgd";
  args.max_iters = 200;
  args.out = (kTmp / "train").string();
  EXPECT_EQ(run_command(CliCommand{args}), 0);
  EXPECT_TRUE(std::filesystem::exists(kTmp / "train" / "curve_tiny_sgd.csv"));
}

TEST(RunCommand, MissingDataFails) {
  TrainArgs args;
  args.data = (kTmp / "nope.bin").string();
  EXPECT_THROW(run_command(CliCommand{args}), std::runtime_error);
}
