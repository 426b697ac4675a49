#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace arcgd::cli {

struct RosenbrockArgs {
  std::string config = "A";
  std::vector<std::size_t> dims = {2, 10, 100, 1000};
  std::size_t runs = 10;
  std::uint64_t seed = 42;
  std::uint64_t max_iters = 1000000;
  int trace_every = 0;
  std::string out = "out";
};

struct TrainArgs {
  std::string arch = "tiny";
  std::string optimizer = "arcgd";
  std::string data;        // CIFAR-10 binary file or directory
  bool synthetic = false;  // use the built-in synthetic dataset instead
  std::size_t subset = 0;  // keep only the first N records (0 = all)
  std::uint64_t seed = 42;
  std::uint64_t max_iters = 20000;
  double eta_low = 0.0;  // >0 overrides the ArcGD preset
  std::string out = "out";
};

struct AblateArgs {
  std::string arch = "tiny";  // comma-separated preset names
  std::string data;
  bool synthetic = false;
  std::size_t subset = 0;
  std::uint64_t seed = 42;
  std::uint64_t max_iters = 20000;
  double eta_low = 0.1;  // second arm; first arm is the 0.01 default
  std::string out = "out";
};

struct ReportArgs {
  std::string data;  // records CSV, or a directory of *_records.csv
  std::string out = "out";
};

using CliCommand =
    std::variant<RosenbrockArgs, TrainArgs, AblateArgs, ReportArgs>;

/// Raised for bad usage; `exit_code` is what main should return.
struct UsageError : std::runtime_error {
  UsageError(std::string message, int code)
      : std::runtime_error(std::move(message)), exit_code(code) {}
  int exit_code;
};

/// Parses `args` (without the program name). Unknown flags, unknown
/// subcommands, out-of-range values and missing required combinations all
/// throw UsageError.
CliCommand parse_cli(const std::vector<std::string>& args);

/// Executes a parsed command; returns the process exit code (0 iff all
/// requested runs executed).
int run_command(const CliCommand& cmd);

int cli_main(int argc, char** argv);

}  // namespace arcgd::cli
