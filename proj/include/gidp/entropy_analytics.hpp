#pragma once

#include <span>
#include <string>
#include <vector>

#include "gidp/quadrature.hpp"
#include "gidp/sde_engine.hpp"
#include "gidp/stats_metrics.hpp"

namespace gidp {

// H_q = b_q + a_q/(1-q) ln sum(...). Shannon (q = 1) requires a_1 = 1.
struct EntropyGauge {
  double q = 1.0;
  double a_q = 1.0;
  double b_q = 0.0;
  void validate() const;
};

// Drift and diffusion constants of restricted BM / GBM.
struct DiffusionParams {
  double x0 = 0.0;
  double mu0 = 0.0;
  double sigma0 = 1.0;
};

// Auxiliary offsets of the rate closed forms, recomputed on every call.
// z_v, w_v are the standardized thresholds; z1, w2 mirror them with the
// drift sign flipped; w3 = w_v + 2 sigma0 tau, w4 = w2 + 2 sigma0 tau;
// w1 = w_v - sigma0 tau (1-q)/q.
struct RateAuxiliaries {
  double z_v, z1, w_v, w1, w2, w3, w4;
};
RateAuxiliaries rate_auxiliaries(const DiffusionParams& params, double x_v, double tau, double q = 1.0);

// Histogram estimator; bins with zero count contribute nothing.
double entropy_empirical(const HistogramSeries& hist, const EntropyGauge& gauge);

// Closed-form Renyi entropies (q != 1). x_v = -inf (BM) or 0 (GBM) removes
// the threshold.
double renyi_bm_analytic(const DiffusionParams& params, double x_v, double tau,
                         const EntropyGauge& gauge);
double renyi_gbm_analytic(const DiffusionParams& params, double x_v, double tau,
                          const EntropyGauge& gauge);

inline constexpr QuadratureConfig kEntropyQuadrature{1e-11, 1e-11, 10000};

// -integral of psi ln psi (plus b_1) by adaptive quadrature over the
// restricted density; kind must be BM or GBM.
double shannon_analytic(ProcessKind kind, const DiffusionParams& params, double x_v, double tau,
                        const EntropyGauge& gauge = {},
                        const QuadratureConfig& quad = kEntropyQuadrature);

// Truncated-normal closed form of the same quantity.
double shannon_closed_form(ProcessKind kind, const DiffusionParams& params, double x_v, double tau,
                           const EntropyGauge& gauge = {});

// q -> 1 limit of the Renyi closed forms: symmetric pairs at 1 +- eps and
// 1 +- 2 eps combined by Richardson extrapolation.
double shannon_renyi_limit(ProcessKind kind, const DiffusionParams& params, double x_v, double tau,
                           double eps = 1e-3, const EntropyGauge& gauge = {});

// Shannon entropy production rates dH/dtau.
double rate_bm(const DiffusionParams& params, double x_v, double tau);
double rate_gbm(const DiffusionParams& params, double x_v, double tau);

struct SeriesPoint {
  double t;
  double value;
};

// Derivative of a series: three-point central differences inside, second
// order one-sided differences at the ends. window > 1 (odd) applies a
// centered moving average first, truncated at the ends.
std::vector<SeriesPoint> rate_empirical(std::span<const SeriesPoint> series, int window = 1);

// Columns t,H,dH_dt.
std::string entropy_csv(std::span<const SeriesPoint> entropy, std::span<const SeriesPoint> rate);

// Standard normal survival function and its logarithm (accurate far into
// the upper tail).
double std_normal_sf(double a);
double log_std_normal_sf(double a);

}  // namespace gidp
