#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "idsm/kernels.hpp"
#include "idsm/levy.hpp"
#include "idsm/quadrature.hpp"
#include "idsm/simulation.hpp"

namespace idsm::cli {

/// Parsed and validated run document. A manifest written by `simulate` is
/// itself a valid run document: its `config` section is read back together
/// with the recorded seed and path count.
struct RunConfig {
  ModelSpec model{{MixingPoint{}}};
  KernelSpec kernel = KernelSpec::exp_ma(1.0);
  SeriesConfig series;
  QuadratureConfig quadrature;
  std::string output_directory = "out";
  std::vector<std::string> formats{"csv", "json"};
  std::uint64_t seed = 0;
  /// Path count recorded in a manifest.
  std::optional<std::size_t> paths;

  [[nodiscard]] bool wants(const std::string& format) const;
};

/// Parses YAML (or JSON) text. Errors are ConfigError with a
/// `<source>:<line>: <key path>: <problem>` message.
RunConfig parse_run_config(const std::string& text, const std::string& source = "<config>");

RunConfig load_run_config(const std::string& path);

/// Canonical JSON echo of the configuration, with every default filled in.
/// parse_run_config(config_to_json(c)) reproduces c.
std::string config_to_json(const RunConfig& config, int indent = 2);

}  // namespace idsm::cli
