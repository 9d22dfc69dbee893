#include "gidp/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <set>
#include <sstream>

#include "gidp/analytic_solutions.hpp"
#include "gidp/entropy_analytics.hpp"
#include "gidp/io.hpp"

namespace gidp {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kModule = "cli_experiments";
constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError("'" + path + "' must be an object", path);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  check_object(j, path);
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) {
      throw ConfigError("unknown key '" + join(path, item.key()) + "'", join(path, item.key()));
    }
  }
}

const json* find(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& require(const json& j, const std::string& path, const char* key) {
  const json* v = find(j, key);
  if (v == nullptr) throw ConfigError("missing required key '" + join(path, key) + "'", join(path, key));
  return *v;
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError("'" + field + "' must be a number", field);
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError("'" + field + "' must be finite", field);
  return d;
}

std::uint64_t as_count(const json& v, const std::string& field, bool allow_zero = false) {
  if (v.is_number_unsigned() || v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i < 0 || (i == 0 && !allow_zero)) {
      throw ConfigError("'" + field + "' must be a positive integer", field);
    }
    return static_cast<std::uint64_t>(v.is_number_unsigned() ? v.get<std::uint64_t>() : i);
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && (d > 0 || (allow_zero && d == 0)) && d < 9.0e15) {
      return static_cast<std::uint64_t>(d);
    }
  }
  throw ConfigError("'" + field + "' must be a positive integer", field);
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError("'" + field + "' must be a string", field);
  return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) throw ConfigError("'" + field + "' must be true or false", field);
  return v.get<bool>();
}

// Re-raises module domain errors as configuration errors naming the field.
template <typename F>
void as_config(const std::string& field, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(field + ": " + e.what(), field);
  }
}

std::string time_label(double t) { return "t_" + io::format_double(t); }

ordered_json optional_number(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

// Config fields that do not influence the data produced.
ordered_json hashed_config(const ExperimentConfig& config) {
  auto j = ordered_json::parse(to_json(config));
  j["ensemble"].erase("workers");
  j["output"].erase("directory");
  return j;
}

struct PendingFile {
  std::string path;
  std::string content;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SeriesMetrics series_metrics(const std::vector<double>& empirical, const std::vector<double>& model) {
  SeriesMetrics m;
  try {
    m.r_squared = r_squared(empirical, model);
  } catch (const UndefinedMetricError&) {
  }
  m.mae = mae(empirical, model);
  return m;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Io: return 4;
    default: return 3;
  }
}

std::string error_json(ErrorKind kind, const std::string& module, const std::string& message) {
  ordered_json j;
  j["code"] = to_string(kind);
  j["module"] = module;
  j["message"] = message;
  return j.dump();
}

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const std::size_t line = line_of(text, e.byte > 0 ? e.byte - 1 : 0);
    std::ostringstream msg;
    msg << "syntax error at line " << line << ": " << e.what();
    throw ConfigError(msg.str(), "", line);
  }
  check_keys(root, "", {"name", "process", "threshold", "ensemble", "analysis", "output"});
  ExperimentConfig c;
  if (const json* v = find(root, "name")) c.name = as_string(*v, "name");

  const json& p = require(root, "", "process");
  check_keys(p, "process", {"kind", "x0", "t0", "mu0", "sigma0", "alpha", "beta"});
  as_config("process.kind", [&] {
    c.process.kind = parse_process_kind(as_string(require(p, "process", "kind"), "process.kind"));
  });
  c.process.x0 = as_number(require(p, "process", "x0"), "process.x0");
  if (const json* v = find(p, "t0")) c.process.t0 = as_number(*v, "process.t0");
  c.process.mu0 = as_number(require(p, "process", "mu0"), "process.mu0");
  c.process.sigma0 = as_number(require(p, "process", "sigma0"), "process.sigma0");
  if (const json* v = find(p, "alpha")) c.process.alpha = as_number(*v, "process.alpha");
  if (const json* v = find(p, "beta")) c.process.beta = as_number(*v, "process.beta");

  if (const json* t = find(root, "threshold")) {
    check_keys(*t, "threshold", {"x_V", "absorption"});
    if (const json* v = find(*t, "x_V")) c.threshold.x_v = as_number(*v, "threshold.x_V");
    if (const json* v = find(*t, "absorption")) {
      const auto mode = as_string(*v, "threshold.absorption");
      if (mode == "path_wise") {
        c.threshold.timing = AbsorptionTiming::PathWise;
      } else if (mode == "at_snapshot") {
        c.threshold.timing = AbsorptionTiming::AtSnapshot;
      } else {
        throw ConfigError("threshold.absorption must be 'path_wise' or 'at_snapshot'",
                          "threshold.absorption");
      }
    }
  }

  const json& e = require(root, "", "ensemble");
  check_keys(e, "ensemble",
             {"n_trajectories", "n_steps", "t_final", "snapshot_times", "seed", "workers"});
  c.ensemble.n_trajectories = as_count(require(e, "ensemble", "n_trajectories"), "ensemble.n_trajectories");
  c.ensemble.n_steps = as_count(require(e, "ensemble", "n_steps"), "ensemble.n_steps");
  c.ensemble.t_final = as_number(require(e, "ensemble", "t_final"), "ensemble.t_final");
  if (const json* v = find(e, "snapshot_times")) {
    if (!v->is_array()) throw ConfigError("'ensemble.snapshot_times' must be an array", "ensemble.snapshot_times");
    for (const auto& t : *v) c.ensemble.snapshot_times.push_back(as_number(t, "ensemble.snapshot_times"));
  } else {
    c.ensemble.snapshot_times = {c.ensemble.t_final};
  }
  if (const json* v = find(e, "seed")) c.ensemble.seed = as_count(*v, "ensemble.seed", true);
  if (const json* v = find(e, "workers")) {
    c.ensemble.workers = static_cast<int>(std::min<std::uint64_t>(as_count(*v, "ensemble.workers"), 4096));
  }

  if (const json* a = find(root, "analysis")) {
    check_keys(*a, "analysis", {"n_bins", "range", "entropy"});
    if (const json* v = find(*a, "n_bins")) c.analysis.n_bins = as_count(*v, "analysis.n_bins");
    if (const json* v = find(*a, "range")) {
      if (v->is_string() && v->get<std::string>() == "auto") {
        c.analysis.range = BinRange::automatic_range();
      } else if (v->is_array() && v->size() == 2) {
        c.analysis.range = BinRange::fixed(as_number((*v)[0], "analysis.range"),
                                           as_number((*v)[1], "analysis.range"));
      } else {
        throw ConfigError("analysis.range must be \"auto\" or [lo, hi]", "analysis.range");
      }
    }
    if (const json* en = find(*a, "entropy")) {
      check_keys(*en, "analysis.entropy", {"enabled", "q_values", "gauge_mode", "rate_window"});
      auto& ec = c.analysis.entropy;
      if (const json* v = find(*en, "enabled")) ec.enabled = as_bool(*v, "analysis.entropy.enabled");
      if (const json* v = find(*en, "q_values")) {
        if (!v->is_array() || v->empty()) {
          throw ConfigError("analysis.entropy.q_values must be a nonempty array", "analysis.entropy.q_values");
        }
        ec.q_values.clear();
        for (const auto& q : *v) ec.q_values.push_back(as_number(q, "analysis.entropy.q_values"));
      }
      if (const json* v = find(*en, "gauge_mode")) ec.gauge_mode = as_string(*v, "analysis.entropy.gauge_mode");
      if (const json* v = find(*en, "rate_window")) {
        ec.rate_window = static_cast<int>(std::min<std::uint64_t>(as_count(*v, "analysis.entropy.rate_window"), 1001));
      }
    }
  }

  if (const json* o = find(root, "output")) {
    check_keys(*o, "output", {"directory", "formats"});
    if (const json* v = find(*o, "directory")) c.output.directory = as_string(*v, "output.directory");
    if (const json* v = find(*o, "formats")) {
      if (!v->is_array()) throw ConfigError("output.formats must be an array", "output.formats");
      c.output.csv = c.output.json = false;
      for (const auto& f : *v) {
        const auto name = as_string(f, "output.formats");
        if (name == "csv") {
          c.output.csv = true;
        } else if (name == "json") {
          c.output.json = true;
        } else {
          throw ConfigError("unknown output format '" + name + "' (expected csv or json)", "output.formats");
        }
      }
    }
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const fs::path& path) { return parse_config(io::read_file(path)); }

GidpSpec build_spec(const ExperimentConfig& config) {
  ProcessParams params;
  params.x0 = config.process.x0;
  params.t0 = config.process.t0;
  params.mu0 = config.process.mu0;
  params.sigma0 = config.process.sigma0;
  params.alpha = config.process.alpha.value_or(2.0);
  params.beta = config.process.beta.value_or(0.0);
  return make_process(config.process.kind, params);
}

ThresholdRule build_threshold(const ExperimentConfig& config) {
  if (!config.threshold.x_v) return ThresholdRule::none();
  return ThresholdRule::absorb_to_zero(*config.threshold.x_v, config.threshold.timing);
}

void validate(const ExperimentConfig& c) {
  const bool stable = c.process.kind == ProcessKind::LF || c.process.kind == ProcessKind::GLF;
  if (!stable && (c.process.alpha || c.process.beta)) {
    throw ConfigError("process.alpha and process.beta apply only to LF and GLF", "process.alpha");
  }
  if (stable && !c.process.alpha) {
    throw ConfigError("LF and GLF require process.alpha in (0, 2]", "process.alpha");
  }
  as_config("process", [&] { (void)build_spec(c); });
  if (c.process.sigma0 < 0.0) throw ConfigError("process.sigma0 must be nonnegative", "process.sigma0");
  if (c.threshold.x_v && is_geometric(c.process.kind) && !(*c.threshold.x_v > 0.0)) {
    throw ConfigError("geometric processes require threshold.x_V > 0", "threshold.x_V");
  }
  if (!(c.ensemble.t_final > c.process.t0)) {
    throw ConfigError("ensemble.t_final must exceed process.t0", "ensemble.t_final");
  }
  if (c.ensemble.snapshot_times.empty()) {
    throw ConfigError("ensemble.snapshot_times must not be empty", "ensemble.snapshot_times");
  }
  if (c.ensemble.workers < 1) throw ConfigError("ensemble.workers must be positive", "ensemble.workers");
  if (c.ensemble.n_trajectories < 1) {
    throw ConfigError("ensemble.n_trajectories must be positive", "ensemble.n_trajectories");
  }
  if (c.ensemble.n_steps < 1) throw ConfigError("ensemble.n_steps must be positive", "ensemble.n_steps");
  as_config("ensemble.snapshot_times", [&] { (void)snapshot_steps(c.process.t0, c.ensemble); });
  if (c.analysis.n_bins < 2) throw ConfigError("analysis.n_bins must be at least 2", "analysis.n_bins");
  if (!c.analysis.range.automatic && !(c.analysis.range.hi > c.analysis.range.lo)) {
    throw ConfigError("analysis.range must satisfy lo < hi", "analysis.range");
  }
  const auto& en = c.analysis.entropy;
  for (const double q : en.q_values) {
    if (!(q > 0.0)) throw ConfigError("entropy orders q must be positive", "analysis.entropy.q_values");
  }
  if (en.gauge_mode != "first_step" && en.gauge_mode != "none") {
    throw ConfigError("analysis.entropy.gauge_mode must be 'first_step' or 'none'",
                      "analysis.entropy.gauge_mode");
  }
  if (en.rate_window < 1 || en.rate_window % 2 == 0) {
    throw ConfigError("analysis.entropy.rate_window must be a positive odd integer",
                      "analysis.entropy.rate_window");
  }
  if (en.enabled && c.ensemble.n_steps < 3) {
    throw ConfigError("entropy series need at least three steps", "ensemble.n_steps");
  }
  if (c.output.directory.empty()) throw ConfigError("output.directory must not be empty", "output.directory");
}

std::string to_json(const ExperimentConfig& c) {
  ordered_json j;
  if (!c.name.empty()) j["name"] = c.name;
  ordered_json p;
  p["kind"] = to_string(c.process.kind);
  p["x0"] = c.process.x0;
  p["t0"] = c.process.t0;
  p["mu0"] = c.process.mu0;
  p["sigma0"] = c.process.sigma0;
  if (c.process.alpha) p["alpha"] = *c.process.alpha;
  if (c.process.beta) p["beta"] = *c.process.beta;
  j["process"] = p;
  if (c.threshold.x_v) {
    j["threshold"] = {{"x_V", *c.threshold.x_v}, {"absorption", to_string(c.threshold.timing)}};
  }
  ordered_json e;
  e["n_trajectories"] = c.ensemble.n_trajectories;
  e["n_steps"] = c.ensemble.n_steps;
  e["t_final"] = c.ensemble.t_final;
  e["snapshot_times"] = c.ensemble.snapshot_times;
  e["seed"] = c.ensemble.seed;
  e["workers"] = c.ensemble.workers;
  j["ensemble"] = e;
  ordered_json a;
  a["n_bins"] = c.analysis.n_bins;
  if (c.analysis.range.automatic) {
    a["range"] = "auto";
  } else {
    a["range"] = {c.analysis.range.lo, c.analysis.range.hi};
  }
  a["entropy"] = {{"enabled", c.analysis.entropy.enabled},
                  {"q_values", c.analysis.entropy.q_values},
                  {"gauge_mode", c.analysis.entropy.gauge_mode},
                  {"rate_window", c.analysis.entropy.rate_window}};
  j["analysis"] = a;
  ordered_json formats = ordered_json::array();
  if (c.output.csv) formats.push_back("csv");
  if (c.output.json) formats.push_back("json");
  j["output"] = {{"directory", c.output.directory}, {"formats", formats}};
  return j.dump(2) + "\n";
}

RunReport run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  validate(config);
  const GidpSpec spec = build_spec(config);
  const ThresholdRule threshold = build_threshold(config);
  const auto& ent = config.analysis.entropy;
  const bool gaussian_kind =
      config.process.kind == ProcessKind::BM || config.process.kind == ProcessKind::GBM;

  // Empirical entropy at every grid step, one series per order q.
  std::vector<std::vector<SeriesPoint>> entropy_series(ent.q_values.size());
  StepObserver observer;
  if (ent.enabled) {
    observer = [&](std::size_t, double t, std::span<const double> values,
                   std::span<const std::uint8_t> alive) {
      if (std::find(alive.begin(), alive.end(), std::uint8_t{1}) == alive.end()) return;
      const auto h = histogram(values, alive, config.analysis.n_bins, BinRange::automatic_range());
      for (std::size_t k = 0; k < ent.q_values.size(); ++k) {
        const double q = ent.q_values[k];
        entropy_series[k].push_back({t, entropy_empirical(h, EntropyGauge{q, 1.0, 0.0})});
      }
    };
  }
  const EnsembleResult result = simulate_ensemble(spec, threshold, config.ensemble, observer);

  RunReport report;
  report.directory = config.output.directory;
  std::vector<PendingFile> files;

  RestrictedSolution solution;
  solution.kind = config.process.kind;
  solution.x0 = config.process.x0;
  solution.t0 = config.process.t0;
  solution.mu0 = config.process.mu0;
  solution.sigma0 = config.process.sigma0;
  solution.alpha = config.process.alpha.value_or(2.0);
  solution.beta = config.process.beta.value_or(0.0);
  if (config.threshold.x_v) {
    solution.x_v = *config.threshold.x_v;
  } else {
    solution.x_v = is_geometric(config.process.kind) ? 0.0 : -kInf;
  }
  const bool model_available = config.process.sigma0 > 0.0;

  std::vector<std::pair<std::string, std::string>> snapshot_files;
  for (const auto& snap : result.snapshots) {
    SnapshotMetrics m;
    m.t = snap.t;
    m.n_alive = snap.n_alive;
    const std::string label = time_label(snap.t);
    if (config.output.csv) {
      const std::string rel = "snapshots/" + label + ".csv";
      files.push_back({rel, snapshot_csv(snap)});
      snapshot_files.emplace_back(rel, files.back().content);
    }
    if (snap.n_alive == 0) {
      m.status = "empty";
      report.snapshots.push_back(m);
      continue;
    }
    const auto hist = histogram(snap.values, snap.alive, config.analysis.n_bins, config.analysis.range);
    const auto centers = hist.centers();
    std::vector<double> model(hist.n_bins(), std::numeric_limits<double>::quiet_NaN());
    m.status = "ok";
    if (model_available) {
      model = psi_curve(solution, centers, snap.t);
      try {
        m.r_squared = r_squared(hist.densities, model);
      } catch (const UndefinedMetricError&) {
        m.status = "undefined_metric";
      }
      m.mae = mae(hist.densities, model);
    } else {
      m.status = "undefined_metric";
    }
    if (config.output.csv) files.push_back({"histograms/" + label + ".csv", histogram_csv(hist, model)});
    report.snapshots.push_back(m);
  }
  if (config.output.json) {
    files.push_back({"snapshots/metadata.json", snapshot_metadata_json(result, snapshot_files)});
  }

  for (std::size_t k = 0; k < entropy_series.size() && ent.enabled; ++k) {
    const double q = ent.q_values[k];
    const auto& series = entropy_series[k];
    EntropyMetrics em;
    em.q = q;
    std::vector<SeriesPoint> rate;
    if (series.size() >= 3) rate = rate_empirical(series, ent.rate_window);
    std::vector<double> h_model(series.size(), std::numeric_limits<double>::quiet_NaN());
    std::vector<double> r_model(series.size(), std::numeric_limits<double>::quiet_NaN());
    em.analytic = gaussian_kind && model_available && series.size() >= 3;
    if (em.analytic) {
      const DiffusionParams dp{config.process.x0, config.process.mu0, config.process.sigma0};
      const bool bm = config.process.kind == ProcessKind::BM;
      for (std::size_t i = 0; i < series.size(); ++i) {
        const double tau = series[i].t - config.process.t0;
        if (q == 1.0) {
          h_model[i] = shannon_analytic(config.process.kind, dp, solution.x_v, tau);
          r_model[i] = bm ? rate_bm(dp, solution.x_v, tau) : rate_gbm(dp, solution.x_v, tau);
        } else {
          const EntropyGauge g{q, 1.0, 0.0};
          h_model[i] = bm ? renyi_bm_analytic(dp, solution.x_v, tau, g)
                          : renyi_gbm_analytic(dp, solution.x_v, tau, g);
        }
      }
      if (ent.gauge_mode == "first_step") em.gauge_offset = series.front().value - h_model.front();
      for (auto& h : h_model) h += em.gauge_offset;
      std::vector<double> h_emp(series.size());
      for (std::size_t i = 0; i < series.size(); ++i) h_emp[i] = series[i].value;
      em.entropy = series_metrics(h_emp, h_model);
      if (q == 1.0) {
        std::vector<double> r_emp(rate.size());
        for (std::size_t i = 0; i < rate.size(); ++i) r_emp[i] = rate[i].value;
        em.rate = series_metrics(r_emp, r_model);
      }
    }
    if (config.output.csv && !series.empty()) {
      std::string out = "t,H,dH_dt,H_model,dH_dt_model\n";
      for (std::size_t i = 0; i < series.size(); ++i) {
        out += io::format_double(series[i].t) + ',' + io::format_double(series[i].value) + ',' +
               (rate.empty() ? std::string("nan") : io::format_double(rate[i].value)) + ',' +
               io::format_double(h_model[i]) + ',' + io::format_double(r_model[i]) + '\n';
      }
      const std::string name = q == 1.0 ? "entropy.csv" : "entropy_q" + io::format_double(q) + ".csv";
      files.push_back({name, out});
    }
    report.entropy.push_back(em);
  }

  if (config.output.json) {
    ordered_json metrics;
    metrics["name"] = config.name;
    metrics["process"] = to_string(config.process.kind);
    ordered_json snaps = ordered_json::array();
    for (const auto& m : report.snapshots) {
      snaps.push_back({{"t", m.t},
                       {"n_alive", m.n_alive},
                       {"status", m.status},
                       {"r_squared", optional_number(m.r_squared)},
                       {"mae", optional_number(m.mae)}});
    }
    metrics["snapshots"] = snaps;
    ordered_json ents = ordered_json::array();
    for (const auto& em : report.entropy) {
      ents.push_back({{"q", em.q},
                      {"analytic", em.analytic},
                      {"gauge_offset", em.gauge_offset},
                      {"entropy", {{"r_squared", optional_number(em.entropy.r_squared)},
                                   {"mae", optional_number(em.entropy.mae)}}},
                      {"rate", {{"r_squared", optional_number(em.rate.r_squared)},
                                {"mae", optional_number(em.rate.mae)}}}});
    }
    metrics["entropy"] = ents;
    files.push_back({"metrics.json", metrics.dump(2) + "\n"});
  }

  const fs::path dir = config.output.directory;
  report.manifest.config_hash = io::git_blob_hash(hashed_config(config).dump());
  report.manifest.seed = config.ensemble.seed;
  report.manifest.module_versions = {{"gidp", kLibraryVersion},
                                     {"noise_models", "1"},
                                     {"sde_engine", "1"},
                                     {"analytic_solutions", "1"},
                                     {"action_functionals", "1"},
                                     {"entropy_analytics", "1"},
                                     {"stats_metrics", "1"},
                                     {"cli_experiments", "1"}};
  std::sort(files.begin(), files.end(),
            [](const PendingFile& a, const PendingFile& b) { return a.path < b.path; });
  for (const auto& f : files) {
    io::write_file(dir / f.path, f.content);
    report.manifest.files.push_back({f.path, io::git_blob_hash(f.content)});
  }
  ordered_json manifest;
  manifest["config_hash"] = report.manifest.config_hash;
  manifest["seed"] = report.manifest.seed;
  manifest["module_versions"] = report.manifest.module_versions;
  ordered_json listed = ordered_json::array();
  for (const auto& f : report.manifest.files) listed.push_back({{"path", f.path}, {"hash", f.hash}});
  manifest["files"] = listed;
  io::write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  report.runtime_seconds = seconds_since(start);
  return report;
}

std::vector<std::string> target_presets(const std::string& target) {
  if (target == "table1") return {"fig1", "fig2"};
  if (target == "table2") return {"fig3", "fig4"};
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), target) != names.end()) return {target};
  throw ConfigError("unknown reproduction target '" + target +
                        "' (expected fig1..fig6, table1 or table2)",
                    "target");
}

ExperimentConfig scaled_preset(const std::string& preset, const ReproduceOptions& options) {
  if (!(options.scale > 0.0 && options.scale <= 1.0)) {
    throw ConfigError("scale must lie in (0, 1]", "scale");
  }
  ExperimentConfig c = preset_config(preset);
  const double n = std::round(options.scale * static_cast<double>(c.ensemble.n_trajectories));
  c.ensemble.n_trajectories = static_cast<std::size_t>(std::max(1.0, n));
  if (options.seed) c.ensemble.seed = *options.seed;
  if (options.workers) c.ensemble.workers = *options.workers;
  c.output.directory = (options.out / preset).string();
  validate(c);
  return c;
}

ReproduceReport reproduce(const std::string& target, const ReproduceOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  ReproduceReport report;
  report.target = target;
  const auto presets = target_presets(target);
  std::vector<ExperimentConfig> configs;
  for (const auto& p : presets) configs.push_back(scaled_preset(p, options));
  for (std::size_t k = 0; k < presets.size(); ++k) {
    const auto run_report = run(configs[k]);
    for (const auto& ref : reference_values(presets[k])) {
      ComparisonRow row{presets[k], ref.label, ref.t, ref.metric, ref.value, std::nullopt};
      if (ref.metric == "r_squared" || ref.metric == "mae") {
        for (const auto& m : run_report.snapshots) {
          if (std::abs(m.t - ref.t) < 1e-9) row.measured = ref.metric == "mae" ? m.mae : m.r_squared;
        }
      } else if (!run_report.entropy.empty()) {
        const auto& em = run_report.entropy.front();
        if (ref.metric == "entropy_r_squared") row.measured = em.entropy.r_squared;
        if (ref.metric == "entropy_mae") row.measured = em.entropy.mae;
        if (ref.metric == "rate_r_squared") row.measured = em.rate.r_squared;
        if (ref.metric == "rate_mae") row.measured = em.rate.mae;
      }
      report.rows.push_back(row);
    }
    report.runs.push_back(run_report);
  }
  std::string csv = "preset,label,t,metric,reference,measured\n";
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.rows) {
    csv += r.preset + ',' + r.label + ',' + io::format_double(r.t) + ',' + r.metric + ',' +
           io::format_double(r.reference) + ',' +
           (r.measured ? io::format_double(*r.measured) : std::string("nan")) + '\n';
    rows.push_back({{"preset", r.preset},
                    {"label", r.label},
                    {"t", r.t},
                    {"metric", r.metric},
                    {"reference", r.reference},
                    {"measured", optional_number(r.measured)}});
  }
  const std::string stem = "comparison_" + target;
  io::write_file(options.out / (stem + ".csv"), csv);
  ordered_json summary;
  summary["target"] = target;
  summary["scale"] = options.scale;
  summary["rows"] = rows;
  io::write_file(options.out / (stem + ".json"), summary.dump(2) + "\n");
  report.runtime_seconds = seconds_since(start);
  return report;
}

}  // namespace gidp
