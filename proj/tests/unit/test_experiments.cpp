#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <string>

#include "gidp/errors.hpp"
#include "gidp/experiments.hpp"
#include "gidp/io.hpp"

using namespace gidp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gidp_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const char* kMinimal = R"({
  "process": {"kind": "BM", "x0": 0, "mu0": 0.1, "sigma0": 1},
  "ensemble": {"n_trajectories": 100, "n_steps": 10, "t_final": 1}
})";

std::string with(const std::string& key_path, const std::string& value) {
  auto j = nlohmann::json::parse(kMinimal);
  j[nlohmann::json::json_pointer(key_path)] = nlohmann::json::parse(value);
  return j.dump();
}

void expect_config_error(const std::string& text, const std::string& needle) {
  try {
    parse_config(text);
    FAIL("expected ConfigError for " << text);
  } catch (const ConfigError& e) {
    INFO(e.what());
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const std::string& args, const fs::path& dir, const std::string& env = "") {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = env + " \"" + std::string(GIDP_CLI_PATH) + "\" " + args + " > \"" + out.string() +
                          "\" 2> \"" + err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WEXITSTATUS(status), io::read_file(out), io::read_file(err)};
}

ExperimentConfig small_fig1(const fs::path& dir) {
  ReproduceOptions o;
  o.scale = 0.25;
  o.out = dir;
  return scaled_preset("fig1", o);
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const auto c = parse_config(kMinimal);
  CHECK(c.process.kind == ProcessKind::BM);
  CHECK(c.process.t0 == 0.0);
  CHECK_FALSE(c.threshold.x_v.has_value());
  CHECK(c.analysis.range.automatic);
  CHECK(c.ensemble.snapshot_times == std::vector<double>{1.0});
  CHECK(c.ensemble.workers == 1);
  CHECK(c.ensemble.seed == 0);
  CHECK(c.output.csv);
  CHECK(c.output.json);
  CHECK_FALSE(c.analysis.entropy.enabled);
  CHECK(build_threshold(c).absorbing == false);
}

TEST_CASE("config rejections name the offending constraint") {
  expect_config_error(with("/process/kind", "\"LF\"") , "alpha");
  auto lf = nlohmann::json::parse(kMinimal);
  lf["process"]["kind"] = "LF";
  lf["process"]["alpha"] = 2.5;
  expect_config_error(lf.dump(), "(0, 2]");
  expect_config_error(with("/process/alpha", "1.5"), "LF and GLF");
  expect_config_error(with("/process/sigma0", "-1"), "sigma0");
  expect_config_error(with("/process/bogus", "1"), "unknown key 'process.bogus'");
  expect_config_error(with("/extra", "1"), "unknown key 'extra'");
  expect_config_error(with("/ensemble/n_steps", "2.5"), "ensemble.n_steps");
  expect_config_error(with("/ensemble/n_trajectories", "0"), "ensemble.n_trajectories");
  expect_config_error(with("/ensemble/snapshot_times", "[1.5]"), "ensemble.snapshot_times");
  expect_config_error(with("/analysis", R"({"range": [3, 1]})"), "analysis.range");
  expect_config_error(with("/analysis", R"({"entropy": {"gauge_mode": "middle"}})"), "gauge_mode");
  expect_config_error(with("/analysis", R"({"entropy": {"rate_window": 4}})"), "rate_window");
  expect_config_error(with("/output", R"({"formats": ["xml"]})"), "xml");
  expect_config_error(with("/threshold", R"({"absorption": "sometimes"})"), "absorption");
  expect_config_error(with("/process/x0", "\"two\""), "process.x0");

  auto gbm = nlohmann::json::parse(kMinimal);
  gbm["process"]["kind"] = "GBM";
  gbm["process"]["x0"] = 1.0;
  gbm["threshold"]["x_V"] = -1.0;
  expect_config_error(gbm.dump(), "x_V");

  try {
    parse_config("{\n  \"process\": {\n    \"kind\": BM\n  }\n}");
    FAIL("expected syntax error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("canonical JSON round-trips") {
  for (const auto& name : preset_names()) {
    const auto c = preset_config(name);
    const std::string text = to_json(c);
    CHECK(to_json(parse_config(text)) == text);
  }
}

TEST_CASE("preset fidelity") {
  const auto f1 = preset_config("fig1");
  CHECK(f1.process.kind == ProcessKind::BM);
  CHECK(f1.process.x0 == 2.0);
  CHECK(f1.process.t0 == 0.0);
  CHECK(f1.process.mu0 == 0.1);
  CHECK(f1.process.sigma0 == 3.0);
  CHECK(*f1.threshold.x_v == 1.0);
  CHECK(f1.ensemble.n_trajectories == 40000);
  CHECK(f1.ensemble.n_steps == 5000);
  CHECK(f1.analysis.n_bins == 200);
  CHECK(f1.ensemble.t_final == 100.0);
  CHECK(f1.ensemble.snapshot_times == std::vector<double>{12.5, 25, 37.5, 50, 62.5, 75, 87.5, 100});

  const auto f2 = preset_config("fig2");
  CHECK(f2.process.kind == ProcessKind::GBM);
  CHECK(f2.process.x0 == 60.0);
  CHECK(f2.process.mu0 == 0.205);
  CHECK(f2.process.sigma0 == 0.08);
  CHECK(*f2.threshold.x_v == 1.0);
  CHECK(f2.ensemble.n_trajectories == 100000);
  CHECK(f2.ensemble.n_steps == 4000);
  CHECK(f2.analysis.n_bins == 400);
  CHECK(f2.ensemble.snapshot_times.back() == 40.0);

  const auto f3 = preset_config("fig3");
  CHECK(f3.process.kind == ProcessKind::LF);
  CHECK(f3.process.x0 == 5.0);
  CHECK(f3.process.mu0 == 0.5);
  CHECK(f3.process.sigma0 == 0.4);
  CHECK(*f3.process.alpha == 1.8);
  CHECK(*f3.process.beta == 0.9);
  CHECK(*f3.threshold.x_v == -1.0);
  CHECK(f3.ensemble.n_steps == 5000);
  CHECK(f3.ensemble.snapshot_times.front() == 6.25);

  const auto f4 = preset_config("fig4");
  CHECK(f4.process.kind == ProcessKind::GLF);
  CHECK(f4.process.x0 == 80.0);
  CHECK(f4.process.mu0 == 0.105);
  CHECK(f4.process.sigma0 == 0.1);
  CHECK(*f4.process.alpha == 1.9);
  CHECK(*f4.process.beta == 0.5);
  CHECK(f4.ensemble.n_steps == 8000);

  CHECK(preset_config("fig5").analysis.entropy.enabled);
  CHECK(preset_config("fig5").process.sigma0 == 3.0);
  CHECK(preset_config("fig6").process.kind == ProcessKind::GBM);
  CHECK_THROWS_AS(preset_config("fig9"), ConfigError);

  // Shipped preset files are the canonical serialization of the built-ins.
  for (const auto& name : preset_names()) {
    const fs::path file = fs::path(GIDP_PRESET_DIR) / (name + ".json");
    CHECK(io::read_file(file) == to_json(preset_config(name)));
  }
}

TEST_CASE("reference tables") {
  CHECK(reference_values("fig1").size() == 16);
  CHECK(reference_values("fig4").size() == 16);
  CHECK(reference_values("fig1")[0].value == doctest::Approx(0.9521));
  CHECK(reference_values("fig2")[15].value == doctest::Approx(0.011e-5));
  CHECK(target_presets("table1") == std::vector<std::string>{"fig1", "fig2"});
  CHECK(target_presets("table2") == std::vector<std::string>{"fig3", "fig4"});
  CHECK_THROWS_AS(target_presets("fig9"), ConfigError);
  ReproduceOptions bad;
  bad.scale = 1.5;
  CHECK_THROWS_AS(scaled_preset("fig1", bad), ConfigError);
  bad.scale = 0.0;
  CHECK_THROWS_AS(scaled_preset("fig1", bad), ConfigError);
  ReproduceOptions quarter;
  quarter.scale = 0.25;
  const auto c = scaled_preset("fig2", quarter);
  CHECK(c.ensemble.n_trajectories == 25000);
  CHECK(c.ensemble.n_steps == 4000);
}

TEST_CASE("fig1 at 10^4 trajectories: artifacts, metrics and determinism") {
  const auto dir = scratch("fig1");
  auto cfg = small_fig1(dir / "a");
  const auto report = run(cfg);
  REQUIRE(report.snapshots.size() == 8);
  for (const auto& m : report.snapshots) {
    CHECK(m.status == "ok");
    REQUIRE(m.r_squared.has_value());
    CHECK(*m.r_squared > 0.9);
  }
  for (const char* f : {"manifest.json", "metrics.json", "snapshots/metadata.json", "snapshots/t_12.5.csv",
                        "snapshots/t_100.csv", "histograms/t_50.csv"}) {
    CHECK(fs::exists(dir / "a" / "fig1" / f));
  }
  const auto metrics = nlohmann::json::parse(io::read_file(dir / "a" / "fig1" / "metrics.json"));
  CHECK(metrics["snapshots"].size() == 8);

  auto again = cfg;
  again.output.directory = (dir / "b").string();
  again.ensemble.workers = 4;
  const auto second = run(again);
  CHECK(second.manifest.config_hash == report.manifest.config_hash);
  REQUIRE(second.manifest.files.size() == report.manifest.files.size());
  for (std::size_t i = 0; i < report.manifest.files.size(); ++i) {
    CHECK(second.manifest.files[i].path == report.manifest.files[i].path);
    CHECK(second.manifest.files[i].hash == report.manifest.files[i].hash);
  }
  CHECK(io::read_file(dir / "a" / "fig1" / "manifest.json") == io::read_file(dir / "b" / "manifest.json"));

  auto reseeded = cfg;
  reseeded.output.directory = (dir / "c").string();
  reseeded.ensemble.seed = 2;
  CHECK(run(reseeded).manifest.config_hash != report.manifest.config_hash);
}

TEST_CASE("zero noise surfaces an undefined metric") {
  const auto dir = scratch("zero");
  auto c = parse_config(kMinimal);
  c.process.sigma0 = 0.0;
  c.output.directory = dir.string();
  const auto report = run(c);
  REQUIRE(report.snapshots.size() == 1);
  CHECK(report.snapshots[0].status == "undefined_metric");
  CHECK_FALSE(report.snapshots[0].r_squared.has_value());
  const std::string hist = io::read_file(dir / "histograms" / "t_1.csv");
  CHECK(hist.find("nan") != std::string::npos);
}

TEST_CASE("entropy series output") {
  const auto dir = scratch("entropy");
  auto c = parse_config(kMinimal);
  c.process.x0 = 2.0;
  c.process.sigma0 = 3.0;
  c.threshold.x_v = 1.0;
  c.threshold.timing = AbsorptionTiming::AtSnapshot;
  c.ensemble.n_trajectories = 5000;
  c.ensemble.n_steps = 50;
  c.ensemble.t_final = 10.0;
  c.ensemble.snapshot_times = {10.0};
  c.analysis.entropy.enabled = true;
  c.analysis.entropy.q_values = {1.0, 2.0};
  c.output.directory = dir.string();
  const auto report = run(c);
  REQUIRE(report.entropy.size() == 2);
  CHECK(report.entropy[0].entropy.r_squared.value() > 0.99);
  CHECK(report.entropy[0].rate.r_squared.has_value());
  CHECK(report.entropy[1].entropy.r_squared.value() > 0.99);
  const std::string csv = io::read_file(dir / "entropy.csv");
  CHECK(csv.rfind("t,H,dH_dt,H_model,dH_dt_model\n", 0) == 0);
  CHECK(fs::exists(dir / "entropy_q2.csv"));
}

TEST_CASE("error helpers") {
  CHECK(exit_code_for(ErrorKind::Config) == 2);
  CHECK(exit_code_for(ErrorKind::Convergence) == 3);
  CHECK(exit_code_for(ErrorKind::Overflow) == 3);
  CHECK(exit_code_for(ErrorKind::Io) == 4);
  const auto j = nlohmann::json::parse(error_json(ErrorKind::Domain, "noise_models", "bad"));
  CHECK(j["code"] == "domain");
  CHECK(j["module"] == "noise_models");
  CHECK(j["message"] == "bad");
}

TEST_CASE("command line interface") {
  const auto dir = scratch("cli");
  const auto cfg_path = dir / "run.json";
  auto c = parse_config(kMinimal);
  c.output.directory = (dir / "run").string();
  io::write_file(cfg_path, to_json(c));

  const auto ok = cli("simulate \"" + cfg_path.string() + "\"", dir);
  CHECK(ok.code == 0);
  CHECK(fs::exists(dir / "run" / "manifest.json"));

  io::write_file(dir / "bad.json", with("/process/sigma0", "-2"));
  const auto bad = cli("simulate \"" + (dir / "bad.json").string() + "\"", dir);
  CHECK(bad.code == 2);
  const auto err = nlohmann::json::parse(bad.err);
  CHECK(err["code"] == "config");
  CHECK(err["module"] == "cli_experiments");

  const auto missing = cli("simulate \"" + (dir / "nope.json").string() + "\"", dir);
  CHECK(missing.code == 4);
  CHECK(nlohmann::json::parse(missing.err)["code"] == "io");

  auto blow = c;
  blow.process.kind = ProcessKind::GBM;
  blow.process.x0 = 1.0;
  blow.process.mu0 = 1e40;
  blow.ensemble.t_final = 10.0;
  blow.ensemble.snapshot_times = {10.0};
  io::write_file(dir / "blow.json", to_json(blow));
  const auto numerical = cli("simulate \"" + (dir / "blow.json").string() + "\"", dir);
  CHECK(numerical.code == 3);
  CHECK(nlohmann::json::parse(numerical.err)["module"] == "sde_engine");

  const auto unknown = cli("reproduce fig9 --out \"" + (dir / "r").string() + "\"", dir);
  CHECK(unknown.code == 2);
  const auto scale = cli("reproduce fig1 --scale 2 --out \"" + (dir / "r").string() + "\"", dir);
  CHECK(scale.code == 2);
  const auto env = cli("simulate \"" + cfg_path.string() + "\"", dir, "GIDP_WORKERS=zero");
  CHECK(env.code == 2);
  const auto env_ok = cli("simulate \"" + cfg_path.string() + "\"", dir, "GIDP_WORKERS=3");
  CHECK(env_ok.code == 0);

  const auto preset = cli("show-preset fig3", dir);
  CHECK(preset.code == 0);
  CHECK(preset.out == to_json(preset_config("fig3")));
  CHECK(cli("", dir).code == 2);
}
