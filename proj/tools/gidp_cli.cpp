#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "gidp/errors.hpp"
#include "gidp/experiments.hpp"
#include "gidp/io.hpp"

namespace {

// GIDP_WORKERS takes precedence over config and command line.
std::optional<int> workers_from_env() {
  const char* raw = std::getenv("GIDP_WORKERS");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const long n = std::strtol(raw, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) {
    throw gidp::ConfigError("GIDP_WORKERS must be a positive integer", "GIDP_WORKERS");
  }
  return static_cast<int>(n);
}

void print_summary(const gidp::RunReport& report) {
  nlohmann::ordered_json j;
  j["directory"] = report.directory.string();
  j["config_hash"] = report.manifest.config_hash;
  j["seed"] = report.manifest.seed;
  nlohmann::ordered_json snaps = nlohmann::ordered_json::array();
  for (const auto& m : report.snapshots) {
    snaps.push_back({{"t", m.t},
                     {"status", m.status},
                     {"r_squared", m.r_squared ? nlohmann::ordered_json(*m.r_squared) : nullptr}});
  }
  j["snapshots"] = snaps;
  j["runtime_seconds"] = report.runtime_seconds;
  std::cout << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and analysis of generalized Ito diffusions with absorbing thresholds"};
  app.require_subcommand(1);

  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Run an experiment described by a JSON config");
  simulate->add_option("config", config_path, "Config file")->required();

  std::string target;
  gidp::ReproduceOptions options;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out = "reproduce";
  auto* repro = app.add_subcommand("reproduce", "Run built-in presets and compare with reference values");
  repro->add_option("target", target, "fig1..fig6, table1 or table2")->required();
  repro->add_option("--scale", options.scale, "Fraction of trajectories in (0, 1]");
  repro->add_option("--seed", seed, "Root seed override");
  repro->add_option("--workers", workers, "Worker threads");
  repro->add_option("--out", out, "Output directory");

  std::string preset;
  auto* show = app.add_subcommand("show-preset", "Print a preset as a JSON config");
  show->add_option("name", preset, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << gidp::error_json(gidp::ErrorKind::Config, "cli_experiments", e.what()) << "\n";
    return 2;
  }

  try {
    const auto env_workers = workers_from_env();
    if (*simulate) {
      auto config = gidp::load_config(config_path);
      if (env_workers) config.ensemble.workers = *env_workers;
      print_summary(gidp::run(config));
    } else if (*repro) {
      options.seed = seed;
      options.workers = env_workers ? env_workers : workers;
      options.out = out;
      const auto report = gidp::reproduce(target, options);
      std::cout << "preset,label,t,metric,reference,measured\n";
      for (const auto& r : report.rows) {
        std::cout << r.preset << ',' << r.label << ',' << gidp::io::format_double(r.t) << ','
                  << r.metric << ',' << gidp::io::format_double(r.reference) << ','
                  << (r.measured ? gidp::io::format_double(*r.measured) : "nan") << '\n';
      }
    } else if (*show) {
      std::cout << gidp::to_json(gidp::preset_config(preset));
    }
  } catch (const gidp::Error& e) {
    std::cerr << gidp::error_json(e.kind(), e.module(), e.what()) << "\n";
    return gidp::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << gidp::error_json(gidp::ErrorKind::Io, "cli_experiments", e.what()) << "\n";
    return 4;
  }
  return 0;
}
