#include "gidp/sde_engine.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "gidp/errors.hpp"
#include "gidp/io.hpp"

namespace gidp {

namespace {

constexpr const char* kModule = "sde_engine";

nlohmann::ordered_json noise_json(const NoiseModel& noise) {
  nlohmann::ordered_json j;
  if (const auto* g = std::get_if<GaussianNoiseParams>(&noise)) {
    j["family"] = "gaussian";
    j["nu"] = g->nu;
    j["rho"] = g->rho;
  } else {
    const auto& s = std::get<StableNoiseParams>(noise);
    j["family"] = "stable";
    j["alpha"] = s.alpha;
    j["beta"] = s.beta;
    j["nu"] = s.nu;
    j["rho"] = s.rho;
  }
  return j;
}

const char* to_string(CoefficientKind kind) {
  return kind == CoefficientKind::Linear ? "linear" : "constant";
}

}  // namespace

const char* to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::BM: return "BM";
    case ProcessKind::GBM: return "GBM";
    case ProcessKind::LF: return "LF";
    case ProcessKind::GLF: return "GLF";
  }
  return "?";
}

ProcessKind parse_process_kind(const std::string& name) {
  if (name == "BM") return ProcessKind::BM;
  if (name == "GBM") return ProcessKind::GBM;
  if (name == "LF") return ProcessKind::LF;
  if (name == "GLF") return ProcessKind::GLF;
  throw DomainError(kModule, "unknown process kind '" + name + "' (expected BM, GBM, LF or GLF)");
}

bool is_geometric(ProcessKind kind) { return kind == ProcessKind::GBM || kind == ProcessKind::GLF; }

const char* to_string(AbsorptionTiming timing) {
  return timing == AbsorptionTiming::PathWise ? "path_wise" : "at_snapshot";
}

void GidpSpec::validate() const {
  gidp::validate(noise);
  if (!std::isfinite(mu0)) throw DomainError(kModule, "drift coefficient mu0 must be finite");
  if (!(sigma0 >= 0.0) || !std::isfinite(sigma0)) {
    throw DomainError(kModule, "diffusion coefficient sigma0 must be nonnegative");
  }
  if (!std::isfinite(x0) || !std::isfinite(t0)) {
    throw DomainError(kModule, "initial condition must be finite");
  }
  if (diffusion_kind == CoefficientKind::Linear && !(x0 > 0.0)) {
    throw DomainError(kModule, "geometric processes require x0 > 0");
  }
}

GidpSpec make_process(ProcessKind kind, const ProcessParams& params) {
  if (!(params.sigma0 >= 0.0)) throw DomainError(kModule, "sigma0 must be nonnegative");
  if (!(params.rho > 0.0)) throw DomainError(kModule, "noise scale rho must be positive");
  GidpSpec spec;
  spec.x0 = params.x0;
  spec.t0 = params.t0;
  spec.mu0 = params.mu0;
  spec.sigma0 = params.sigma0;
  const bool geometric = is_geometric(kind);
  spec.drift_kind = geometric ? CoefficientKind::Linear : CoefficientKind::Constant;
  spec.diffusion_kind = spec.drift_kind;
  if (kind == ProcessKind::LF || kind == ProcessKind::GLF) {
    spec.noise = StableNoiseParams{params.alpha, params.beta, 0.0, 1.0};
  } else {
    spec.noise = GaussianNoiseParams{0.0, 1.0};
    spec.sigma0 *= params.rho;
  }
  spec.validate();
  return spec;
}

double step(double x, double dt, const GidpSpec& spec, double increment, std::size_t trajectory) {
  if (!(dt > 0.0)) throw DomainError(kModule, "time step must be positive");
  const double next = x + spec.drift(x) * dt + spec.diffusion(x) * increment;
  if (!std::isfinite(next)) {
    std::ostringstream msg;
    msg << "non-finite state";
    if (trajectory != OverflowError::npos) msg << " in trajectory " << trajectory;
    throw OverflowError(kModule, msg.str(), trajectory, 0);
  }
  return next;
}

std::vector<std::size_t> snapshot_steps(double t0, const EnsembleConfig& config) {
  const double span = config.t_final - t0;
  const double dt = span / static_cast<double>(config.n_steps);
  std::vector<std::size_t> steps;
  steps.reserve(config.snapshot_times.size());
  for (const double t : config.snapshot_times) {
    if (!std::isfinite(t)) throw DomainError(kModule, "snapshot times must be finite");
    const double k = std::round((t - t0) / dt);
    const double grid_t = t0 + k * dt;
    if (k < 1.0 || k > static_cast<double>(config.n_steps) ||
        std::abs(grid_t - t) > 0.5 * dt * (1.0 + 1e-9)) {
      std::ostringstream msg;
      msg << "snapshot time " << t << " does not lie on the grid (t0, t_final] within dt/2";
      throw DomainError(kModule, msg.str());
    }
    const auto ks = static_cast<std::size_t>(k);
    if (!steps.empty() && ks <= steps.back()) {
      throw DomainError(kModule, "snapshot times must be strictly increasing on the grid");
    }
    steps.push_back(ks);
  }
  return steps;
}

EnsembleResult simulate_ensemble(const GidpSpec& spec, const ThresholdRule& threshold,
                                 const EnsembleConfig& config, const StepObserver& observer) {
  spec.validate();
  if (config.n_trajectories < 1) throw DomainError(kModule, "n_trajectories must be positive");
  if (config.n_steps < 1) throw DomainError(kModule, "n_steps must be positive");
  if (!(config.t_final > spec.t0)) throw DomainError(kModule, "t_final must exceed t0");
  if (config.workers < 1) throw DomainError(kModule, "workers must be positive");
  if (threshold.absorbing) {
    if (!std::isfinite(threshold.x_v)) throw DomainError(kModule, "threshold x_V must be finite");
    if (spec.diffusion_kind == CoefficientKind::Linear && !(threshold.x_v > 0.0)) {
      throw DomainError(kModule, "geometric processes require x_V > 0");
    }
  }
  const auto snap_steps = snapshot_steps(spec.t0, config);

  EnsembleResult result;
  result.spec = spec;
  result.threshold = threshold;
  result.config = config;
  const std::size_t n = config.n_trajectories;
  const double dt = (config.t_final - spec.t0) / static_cast<double>(config.n_steps);
  result.dt = dt;

  const NoiseSampler sampler(cgf_time_scale(spec.noise, dt));
  const bool path_wise = threshold.absorbing && threshold.timing == AbsorptionTiming::PathWise;
  const bool at_snapshot = threshold.absorbing && threshold.timing == AbsorptionTiming::AtSnapshot;
  const double x_v = threshold.x_v;

  std::vector<double> x(n, spec.x0);
  std::vector<std::uint8_t> alive(n, 1);
  std::vector<RandomStream> streams;
  streams.reserve(n);
  for (std::size_t i = 0; i < n; ++i) streams.push_back(RandomStream::derive(config.seed, i));
  // Step at which each trajectory produced a non-finite value (0 = none).
  std::vector<std::size_t> failed(n, 0);
  if (path_wise && spec.x0 < x_v) std::fill(alive.begin(), alive.end(), 0);
  if (path_wise && spec.x0 < x_v) std::fill(x.begin(), x.end(), 0.0);

  std::vector<std::size_t> stops;
  if (observer) {
    stops.resize(config.n_steps);
    for (std::size_t k = 0; k < config.n_steps; ++k) stops[k] = k + 1;
  } else {
    stops = snap_steps;
  }

  std::vector<double> view_values(n);
  std::vector<std::uint8_t> view_alive(n);
  std::size_t next_snapshot = 0;
  std::size_t previous = 0;
  const long long n_signed = static_cast<long long>(n);

  for (const std::size_t stop : stops) {
#pragma omp parallel for num_threads(config.workers) schedule(static)
    for (long long ii = 0; ii < n_signed; ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      if (!alive[i] || failed[i] != 0) continue;
      double xi = x[i];
      RandomStream& rng = streams[i];
      for (std::size_t k = previous + 1; k <= stop; ++k) {
        const double next = xi + spec.drift(xi) * dt + spec.diffusion(xi) * sampler(rng);
        if (!std::isfinite(next)) {
          failed[i] = k;
          break;
        }
        xi = next;
        if (path_wise && xi < x_v) {
          xi = 0.0;
          alive[i] = 0;
          break;
        }
      }
      x[i] = xi;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (failed[i] != 0) {
        std::ostringstream msg;
        msg << "non-finite state in trajectory " << i << " at step " << failed[i];
        throw OverflowError(kModule, msg.str(), i, failed[i]);
      }
    }
    previous = stop;

    std::size_t n_alive = 0;
    for (std::size_t i = 0; i < n; ++i) {
      bool live = alive[i] != 0;
      if (at_snapshot) live = x[i] >= x_v;
      view_alive[i] = live ? 1 : 0;
      view_values[i] = live ? x[i] : 0.0;
      n_alive += live ? 1 : 0;
    }
    if (next_snapshot < snap_steps.size() && snap_steps[next_snapshot] == stop) {
      Snapshot snap;
      snap.t = config.snapshot_times[next_snapshot];
      snap.step = stop;
      snap.values = view_values;
      snap.alive = view_alive;
      snap.n_alive = n_alive;
      if (n_alive == 0) result.empty_snapshots.push_back(result.snapshots.size());
      result.snapshots.push_back(std::move(snap));
      ++next_snapshot;
    }
    if (observer) {
      observer(stop, spec.t0 + static_cast<double>(stop) * dt, view_values, view_alive);
    }
  }
  return result;
}

std::string snapshot_csv(const Snapshot& snapshot) {
  std::string out = "id,value,alive\n";
  out.reserve(out.size() + snapshot.values.size() * 24);
  for (std::size_t i = 0; i < snapshot.values.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += io::format_double(snapshot.values[i]);
    out += snapshot.alive[i] ? ",1\n" : ",0\n";
  }
  return out;
}

std::string snapshot_metadata_json(const EnsembleResult& result,
                                   const std::vector<std::pair<std::string, std::string>>& files) {
  nlohmann::ordered_json j;
  const auto& spec = result.spec;
  j["spec"] = {{"drift", {{"kind", to_string(spec.drift_kind)}, {"mu0", spec.mu0}}},
               {"diffusion", {{"kind", to_string(spec.diffusion_kind)}, {"sigma0", spec.sigma0}}},
               {"noise", noise_json(spec.noise)},
               {"x0", spec.x0},
               {"t0", spec.t0}};
  nlohmann::ordered_json threshold;
  threshold["mode"] = result.threshold.absorbing ? "absorb_to_zero" : "none";
  if (result.threshold.absorbing) {
    threshold["x_V"] = result.threshold.x_v;
    threshold["timing"] = to_string(result.threshold.timing);
  }
  j["threshold"] = threshold;
  j["config"] = {{"n_trajectories", result.config.n_trajectories},
                 {"n_steps", result.config.n_steps},
                 {"t_final", result.config.t_final},
                 {"dt", result.dt},
                 {"snapshot_times", result.config.snapshot_times}};
  j["seed"] = result.config.seed;
  nlohmann::ordered_json snaps = nlohmann::ordered_json::array();
  for (const auto& s : result.snapshots) {
    snaps.push_back({{"t", s.t}, {"step", s.step}, {"n_alive", s.n_alive}});
  }
  j["snapshots"] = snaps;
  j["empty_snapshots"] = result.empty_snapshots;
  nlohmann::ordered_json hashes = nlohmann::ordered_json::object();
  for (const auto& [name, content] : files) hashes[name] = io::git_blob_hash(content);
  j["content_hashes"] = hashes;
  return j.dump(2) + "\n";
}

}  // namespace gidp
