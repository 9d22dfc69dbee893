#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gidp/errors.hpp"
#include "gidp/sde_engine.hpp"
#include "gidp/stats_metrics.hpp"

namespace gidp {

inline constexpr const char* kLibraryVersion = "1.0.0";

struct ProcessConfig {
  ProcessKind kind = ProcessKind::BM;
  double x0 = 0.0;
  double t0 = 0.0;
  double mu0 = 0.0;
  double sigma0 = 1.0;
  std::optional<double> alpha;
  std::optional<double> beta;
};

struct ThresholdConfig {
  std::optional<double> x_v;
  AbsorptionTiming timing = AbsorptionTiming::PathWise;
};

struct EntropyConfig {
  bool enabled = false;
  std::vector<double> q_values{1.0};
  // "first_step": offset chosen so model and data agree at the first grid
  // step; "none": zero offset.
  std::string gauge_mode = "first_step";
  int rate_window = 1;
};

struct AnalysisConfig {
  std::size_t n_bins = 200;
  BinRange range{};
  EntropyConfig entropy;
};

struct OutputConfig {
  std::string directory = "gidp_run";
  bool csv = true;
  bool json = true;
};

struct ExperimentConfig {
  std::string name;
  ProcessConfig process;
  ThresholdConfig threshold;
  EnsembleConfig ensemble;
  AnalysisConfig analysis;
  OutputConfig output;
};

// Parses and validates a JSON document. Unknown keys, type mismatches and
// domain violations raise ConfigError naming the field (and line for
// syntax errors).
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
void validate(const ExperimentConfig& config);
// Canonical JSON form (round-trips through parse_config).
std::string to_json(const ExperimentConfig& config);

GidpSpec build_spec(const ExperimentConfig& config);
ThresholdRule build_threshold(const ExperimentConfig& config);

struct OutputFile {
  std::string path;  // relative to the run directory
  std::string hash;  // git blob SHA-1
};

struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> module_versions;
  std::vector<OutputFile> files;
};

struct SnapshotMetrics {
  double t = 0.0;
  std::size_t n_alive = 0;
  std::string status;  // "ok", "empty" or "undefined_metric"
  std::optional<double> r_squared;
  std::optional<double> mae;
};

struct SeriesMetrics {
  std::optional<double> r_squared;
  std::optional<double> mae;
};

struct EntropyMetrics {
  double q = 1.0;
  double gauge_offset = 0.0;
  SeriesMetrics entropy;
  SeriesMetrics rate;
  bool analytic = false;
};

struct RunReport {
  std::filesystem::path directory;
  RunManifest manifest;
  std::vector<SnapshotMetrics> snapshots;
  std::vector<EntropyMetrics> entropy;
  double runtime_seconds = 0.0;
};

RunReport run(const ExperimentConfig& config);

// Built-in experiment presets: fig1 (BM), fig2 (GBM), fig3 (LF), fig4 (GLF),
// fig5 (BM entropy), fig6 (GBM entropy).
inline constexpr std::uint64_t kPresetSeed = 1;
std::vector<std::string> preset_names();
ExperimentConfig preset_config(const std::string& name);

struct ReferenceValue {
  std::string label;  // row letter or metric name
  double t = 0.0;
  std::string metric;  // "r_squared" or "mae", or entropy_/rate_ prefixed
  double value = 0.0;
};
// Reference values for a preset (R^2 as a fraction, MAE absolute).
std::vector<ReferenceValue> reference_values(const std::string& preset);

struct ComparisonRow {
  std::string preset;
  std::string label;
  double t = 0.0;
  std::string metric;
  double reference = 0.0;
  std::optional<double> measured;
};

struct ReproduceOptions {
  double scale = 1.0;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::filesystem::path out = "reproduce";
};

struct ReproduceReport {
  std::string target;
  std::vector<RunReport> runs;
  std::vector<ComparisonRow> rows;
  double runtime_seconds = 0.0;
};

// Targets: fig1..fig6, table1 (fig1 + fig2), table2 (fig3 + fig4).
std::vector<std::string> target_presets(const std::string& target);
ExperimentConfig scaled_preset(const std::string& preset, const ReproduceOptions& options);
ReproduceReport reproduce(const std::string& target, const ReproduceOptions& options);

// Process exit code for an error kind: 2 config, 3 numerical, 4 I/O.
int exit_code_for(ErrorKind kind);
// {"code", "module", "message"} object.
std::string error_json(ErrorKind kind, const std::string& module, const std::string& message);

}  // namespace gidp
