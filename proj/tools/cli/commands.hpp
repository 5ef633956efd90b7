#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "cli/run_config.hpp"

namespace idsm::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericError = 3 };

/// Flags shared by the commands; set values override the run document.
struct CommandOptions {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  unsigned jobs = 1;
};

/// Writes the verdict report JSON to `out`, and to <dir>/report.json when
/// --out is given.
int cmd_check(const RunConfig& config, const CommandOptions& options, std::ostream& out);

/// path_<k>.csv, jumps_<k>.csv per path, then manifest.json.
int cmd_simulate(const RunConfig& config, const CommandOptions& options, std::ostream& out);

/// decompose.csv, decompose_jumps.csv and decompose.json (also echoed to `out`).
int cmd_decompose(const RunConfig& config, const CommandOptions& options, std::ostream& out);

/// Full command line entry point; maps ConfigError/UnsupportedError to 2 and
/// NumericError to 3.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace idsm::cli
