#include "cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "idsm/criteria.hpp"
#include "idsm/csv.hpp"
#include "idsm/errors.hpp"
#include "idsm/rng.hpp"

namespace idsm::cli {

namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

fs::path output_dir(const RunConfig& config, const CommandOptions& options) {
  fs::path dir = options.out.value_or(config.output_directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << content;
  if (!f) {
    throw ConfigError("cannot write " + path.string());
  }
}

RunConfig effective(const RunConfig& config, const CommandOptions& options) {
  RunConfig c = config;
  if (options.seed) {
    c.seed = *options.seed;
  }
  c.series.seed = c.seed;
  return c;
}

void require_symmetric(const ModelSpec& model) {
  for (const auto& p : model.points()) {
    if (!p.levy.symmetric()) {
      throw ConfigError("model point '" + p.label +
                        "': simulation supports symmetric Levy measures only (asymmetric centering is not implemented)");
    }
  }
}

ordered_json bounds_json(const TruncationBounds& b) {
  return {{"past", b.past}, {"series_tail", b.series_tail}, {"scale", b.scale}, {"total", b.total}};
}

struct PathFiles {
  std::string paths_csv;
  std::string jumps_csv;
  PathBundle bundle;
};

PathFiles simulate_one(const RunConfig& config, std::uint64_t seed) {
  SeriesConfig series = config.series;
  series.seed = seed;
  const SeriesState state = sample_series(series, config.model);
  PathFiles files;
  files.bundle = build_paths(state, series, config.model, config.kernel, config.quadrature);
  std::ostringstream p;
  write_paths_csv(p, files.bundle);
  files.paths_csv = p.str();
  std::ostringstream j;
  write_jumps_csv(j, files.bundle.jumps, config.model);
  files.jumps_csv = j.str();
  return files;
}

}  // namespace

int cmd_check(const RunConfig& config, const CommandOptions& options, std::ostream& out) {
  const VerdictReport report = verdict(config.model, config.kernel, {}, config.quadrature);
  const std::string json = report_to_json(report) + "\n";
  out << json;
  if (options.out && config.wants("json")) {
    write_file(output_dir(config, options) / "report.json", json);
  }
  return kOk;
}

int cmd_simulate(const RunConfig& input, const CommandOptions& options, std::ostream& out) {
  const RunConfig config = effective(input, options);
  require_symmetric(config.model);
  const fs::path dir = output_dir(config, options);
  const TruncationBounds bounds =
      truncation_bounds(config.series, config.model, config.kernel, config.quadrature);

  const std::size_t paths = options.paths.value_or(config.paths.value_or(1));
  std::vector<std::uint64_t> seeds(paths);
  for (std::size_t k = 0; k < paths; ++k) {
    seeds[k] = derive_seed(config.seed, k);
  }

  const bool csv = config.wants("csv");
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= paths) {
        return;
      }
      try {
        const PathFiles files = simulate_one(config, seeds[k]);
        if (csv) {
          write_file(dir / ("path_" + std::to_string(k) + ".csv"), files.paths_csv);
          write_file(dir / ("jumps_" + std::to_string(k) + ".csv"), files.jumps_csv);
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_lock);
        if (!failure) {
          failure = std::current_exception();
        }
        next.store(paths);
        return;
      }
    }
  };
  const unsigned jobs = std::max(1U, std::min<unsigned>(options.jobs, static_cast<unsigned>(std::max<std::size_t>(paths, 1))));
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < jobs; ++i) {
    pool.emplace_back(worker);
  }
  for (auto& t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  ordered_json manifest;
  manifest["command"] = "simulate";
  manifest["seed"] = config.seed;
  manifest["paths"] = paths;
  manifest["path_seeds"] = seeds;
  manifest["truncation"] = bounds_json(bounds);
  ordered_json files = ordered_json::array();
  if (csv) {
    for (std::size_t k = 0; k < paths; ++k) {
      files.push_back("path_" + std::to_string(k) + ".csv");
      files.push_back("jumps_" + std::to_string(k) + ".csv");
    }
  }
  manifest["files"] = std::move(files);
  manifest["warnings"] = config.kernel.warnings();
  manifest["config"] = ordered_json::parse(config_to_json(config));
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << paths << " path(s) to " << dir.string() << "\n";
  return kOk;
}

int cmd_decompose(const RunConfig& input, const CommandOptions& options, std::ostream& out) {
  const RunConfig config = effective(input, options);
  require_symmetric(config.model);
  const fs::path dir = output_dir(config, options);
  const TruncationBounds bounds =
      truncation_bounds(config.series, config.model, config.kernel, config.quadrature);
  const VerdictReport report = verdict(config.model, config.kernel, {}, config.quadrature);
  const PathFiles files = simulate_one(config, derive_seed(config.seed, 0));

  std::vector<std::string> warnings = config.kernel.warnings();
  if (report.verdict == Verdict::not_semimartingale) {
    warnings.push_back("X is not a semimartingale for this model and kernel: A has infinite variation");
  } else if (report.verdict == Verdict::inconclusive) {
    warnings.push_back("the semimartingale property of X is undecided for this model and kernel");
  }

  ordered_json doc;
  doc["max_decomposition_residual"] = max_decomposition_residual(files.bundle);
  doc["A_route_disagreement"] = a_route_disagreement(files.bundle);
  doc["truncation_bound"] = bounds.total;
  doc["truncation"] = bounds_json(bounds);
  doc["path_scale"] = path_scale(files.bundle);
  doc["seed"] = config.seed;
  doc["path_seed"] = derive_seed(config.seed, 0);
  doc["verdict"] = to_string(report.verdict);
  doc["report"] = ordered_json::parse(report_to_json(report));
  doc["warnings"] = warnings;
  const std::string json = doc.dump(2) + "\n";

  if (config.wants("csv")) {
    write_file(dir / "decompose.csv", files.paths_csv);
    write_file(dir / "decompose_jumps.csv", files.jumps_csv);
  }
  write_file(dir / "decompose.json", json);
  out << json;
  return kOk;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semimartingale checks and path simulation for infinitely divisible moving averages"};
  app.require_subcommand(1);

  std::string config_path;
  CommandOptions options;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::size_t paths = 0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "run document (YAML or JSON, or a manifest)")->required();
    cmd->add_option("--seed", seed, "master seed, overrides the document");
    cmd->add_option("--out", out_dir, "output directory");
  };
  auto* check = app.add_subcommand("check", "evaluate the semimartingale criteria");
  add_common(check);
  auto* simulate = app.add_subcommand("simulate", "simulate paths of X, M and A");
  add_common(simulate);
  simulate->add_option("--paths", paths, "number of paths");
  simulate->add_option("--jobs", options.jobs, "worker threads")->check(CLI::PositiveNumber);
  auto* decompose = app.add_subcommand("decompose", "one path with the decomposition report");
  add_common(decompose);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  CLI::App* active = app.get_subcommands().front();
  if (active->count("--seed") > 0) {
    options.seed = seed;
  }
  if (active->count("--out") > 0) {
    options.out = out_dir;
  }
  if (active == simulate && active->count("--paths") > 0) {
    options.paths = paths;
  }

  try {
    const RunConfig config = load_run_config(config_path);
    for (const auto& w : config.kernel.warnings()) {
      err << "warning: " << w << "\n";
    }
    if (active == check) {
      return cmd_check(config, options, out);
    }
    if (active == simulate) {
      return cmd_simulate(config, options, out);
    }
    return cmd_decompose(config, options, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  }
}

}  // namespace idsm::cli
