#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gidp/noise_models.hpp"

namespace gidp {

enum class CoefficientKind { Constant, Linear };
enum class ProcessKind { BM, GBM, LF, GLF };

const char* to_string(ProcessKind kind);
ProcessKind parse_process_kind(const std::string& name);
bool is_geometric(ProcessKind kind);

// dX = mu(X) dt + sigma(X) dL with Constant (c) or Linear (c*x)
// coefficients. sigma0 = 0 is accepted and yields deterministic paths.
struct GidpSpec {
  CoefficientKind drift_kind = CoefficientKind::Constant;
  double mu0 = 0.0;
  CoefficientKind diffusion_kind = CoefficientKind::Constant;
  double sigma0 = 1.0;
  NoiseModel noise = GaussianNoiseParams{};
  double x0 = 0.0;
  double t0 = 0.0;

  double drift(double x) const { return drift_kind == CoefficientKind::Linear ? mu0 * x : mu0; }
  double diffusion(double x) const {
    return diffusion_kind == CoefficientKind::Linear ? sigma0 * x : sigma0;
  }
  void validate() const;
};

struct ProcessParams {
  double x0 = 0.0;
  double t0 = 0.0;
  double mu0 = 0.0;
  double sigma0 = 1.0;
  double alpha = 2.0;
  double beta = 0.0;
  // Gaussian noise scale for GBM; folded into sigma0.
  double rho = 1.0;
};

GidpSpec make_process(ProcessKind kind, const ProcessParams& params);

// When the absorbing rule is checked.
//  PathWise:   after every Euler step; absorbed paths stay at 0 forever.
//  AtSnapshot: paths evolve freely and a path counts as absorbed at an
//              observation time iff its value there lies below x_V.
enum class AbsorptionTiming { PathWise, AtSnapshot };

const char* to_string(AbsorptionTiming timing);

struct ThresholdRule {
  bool absorbing = false;
  double x_v = 0.0;
  AbsorptionTiming timing = AbsorptionTiming::PathWise;

  static ThresholdRule none() { return {}; }
  static ThresholdRule absorb_to_zero(double x_v,
                                      AbsorptionTiming timing = AbsorptionTiming::PathWise) {
    return ThresholdRule{true, x_v, timing};
  }
};

struct EnsembleConfig {
  std::size_t n_trajectories = 1;
  std::size_t n_steps = 1;
  double t_final = 1.0;
  std::vector<double> snapshot_times;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct Snapshot {
  double t = 0.0;  // requested time
  std::size_t step = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> alive;
  std::size_t n_alive = 0;
};

struct EnsembleResult {
  GidpSpec spec;
  ThresholdRule threshold;
  EnsembleConfig config;
  double dt = 0.0;
  std::vector<Snapshot> snapshots;
  // Indices of snapshots without survivors.
  std::vector<std::size_t> empty_snapshots;
};

// One Euler-Maruyama update. `increment` is a draw from the noise scaled
// to dt. Throws OverflowError tagged with `trajectory` on a non-finite result.
double step(double x, double dt, const GidpSpec& spec, double increment,
            std::size_t trajectory = static_cast<std::size_t>(-1));

// Called after every grid step when supplied to simulate_ensemble; values of
// absorbed paths are reported as 0.
using StepObserver = std::function<void(std::size_t step, double t, std::span<const double> values,
                                        std::span<const std::uint8_t> alive)>;

// Grid step index of each requested snapshot time; throws DomainError when a
// time is off the grid by more than dt/2 or the list is not increasing.
std::vector<std::size_t> snapshot_steps(double t0, const EnsembleConfig& config);

EnsembleResult simulate_ensemble(const GidpSpec& spec, const ThresholdRule& threshold,
                                 const EnsembleConfig& config,
                                 const StepObserver& observer = nullptr);

// Columns id,value,alive; returns the bytes written.
std::string snapshot_csv(const Snapshot& snapshot);
// JSON sidecar describing the run, with content hashes of the given files.
std::string snapshot_metadata_json(const EnsembleResult& result,
                                   const std::vector<std::pair<std::string, std::string>>& files);

}  // namespace gidp
