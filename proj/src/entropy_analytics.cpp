#include "gidp/entropy_analytics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gidp/analytic_solutions.hpp"
#include "gidp/errors.hpp"
#include "gidp/io.hpp"

namespace gidp {

namespace {

constexpr const char* kModule = "entropy_analytics";
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSurvivalFloor = 1e-12;
constexpr double kSpan = 40.0;  // integration half-width in standard deviations

void check_params(const DiffusionParams& p, double tau) {
  if (!(tau > 0.0)) throw DomainError(kModule, "tau must be positive");
  if (!(p.sigma0 > 0.0)) throw DomainError(kModule, "sigma0 must be positive");
  if (!std::isfinite(p.x0) || !std::isfinite(p.mu0)) throw DomainError(kModule, "x0 and mu0 must be finite");
}

void check_geometric(const DiffusionParams& p, double x_v) {
  if (!(p.x0 > 0.0)) throw DomainError(kModule, "geometric entropy requires x0 > 0");
  if (!(x_v >= 0.0)) throw DomainError(kModule, "geometric entropy requires x_V >= 0");
}

double z_threshold(const DiffusionParams& p, double x_v, double tau) {
  if (x_v == -kInf) return -kInf;
  return (x_v - p.x0 - p.mu0 * tau) / p.sigma0;
}

double w_threshold(const DiffusionParams& p, double x_v, double tau) {
  if (x_v == 0.0) return -kInf;
  return (std::log(x_v) - std::log(p.x0) - p.mu0 * tau) / p.sigma0;
}

// ln of the standard normal survival at the standardized threshold; raises
// when the surviving mass is degenerate.
double log_mass(double a) {
  const double lm = log_std_normal_sf(a);
  if (!(lm >= std::log(kSurvivalFloor))) {
    std::ostringstream msg;
    msg << "surviving mass exp(" << lm << ") is below " << kSurvivalFloor;
    throw DegenerateNormalizationError(kModule, msg.str());
  }
  return lm;
}

// phi(a) / sf(a); zero when a = -inf.
double hazard(double a) {
  if (a == -kInf) return 0.0;
  const double log_phi = -0.5 * a * a - 0.5 * std::log(2.0 * kPi);
  return std::exp(log_phi - log_mass(a));
}

double renyi_core(double a, double q, double log_scale, const EntropyGauge& g) {
  // log_scale is the q-independent part ln sqrt(2 pi S^2) (+ geometric terms).
  const double first = log_mass(a);
  return g.b_q + g.a_q * std::log(q) / (2.0 * (q - 1.0)) + g.a_q * log_scale +
         g.a_q / (q - 1.0) * (q * first);
}

}  // namespace

double std_normal_sf(double a) { return 0.5 * std::erfc(a / std::numbers::sqrt2); }

double log_std_normal_sf(double a) {
  if (a == -kInf) return 0.0;
  if (a == kInf) return -kInf;
  if (a < 30.0) return std::log(std_normal_sf(a));
  const double inv2 = 1.0 / (a * a);
  return -0.5 * a * a - std::log(a * std::sqrt(2.0 * kPi)) +
         std::log1p(inv2 * (-1.0 + inv2 * (3.0 - 15.0 * inv2)));
}

void EntropyGauge::validate() const {
  if (!(q > 0.0) || !std::isfinite(q)) throw DomainError(kModule, "entropy order q must be positive");
  if (!std::isfinite(a_q) || !std::isfinite(b_q)) throw DomainError(kModule, "gauge must be finite");
  if (q == 1.0 && a_q != 1.0) throw DomainError(kModule, "the Shannon amplitude a_1 must equal 1");
}

RateAuxiliaries rate_auxiliaries(const DiffusionParams& p, double x_v, double tau, double q) {
  check_params(p, tau);
  RateAuxiliaries aux{};
  aux.z_v = z_threshold(p, x_v, tau);
  aux.z1 = x_v == -kInf ? -kInf : (x_v - p.x0 + p.mu0 * tau) / p.sigma0;
  if (p.x0 > 0.0 && x_v >= 0.0) {
    aux.w_v = w_threshold(p, x_v, tau);
    aux.w1 = aux.w_v - p.sigma0 * tau * (1.0 - q) / q;
    aux.w2 = x_v == 0.0 ? -kInf : (std::log(x_v) - std::log(p.x0) + p.mu0 * tau) / p.sigma0;
    aux.w3 = aux.w_v + 2.0 * p.sigma0 * tau;
    aux.w4 = aux.w2 + 2.0 * p.sigma0 * tau;
  } else {
    aux.w_v = aux.w1 = aux.w2 = aux.w3 = aux.w4 = std::numeric_limits<double>::quiet_NaN();
  }
  return aux;
}

double entropy_empirical(const HistogramSeries& hist, const EntropyGauge& gauge) {
  gauge.validate();
  if (hist.n_bins() == 0 || hist.n_survivors == 0) {
    throw DomainError(kModule, "entropy of an empty histogram is undefined");
  }
  const double n = static_cast<double>(hist.n_survivors);
  double in_range = 0.0;
  for (const auto c : hist.counts) in_range += static_cast<double>(c);
  if (!(in_range > 0.0)) throw DomainError(kModule, "histogram carries no mass");
  if (gauge.q == 1.0) {
    double h = 0.0;
    for (std::size_t i = 0; i < hist.n_bins(); ++i) {
      if (hist.counts[i] == 0) continue;
      const double width = hist.width(i);
      if (!(width > 0.0)) throw DomainError(kModule, "bin widths must be positive");
      const double p = static_cast<double>(hist.counts[i]) / n;
      h -= p * std::log(p / width);
    }
    return h + gauge.b_q;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < hist.n_bins(); ++i) {
    if (hist.counts[i] == 0) continue;
    const double width = hist.width(i);
    if (!(width > 0.0)) throw DomainError(kModule, "bin widths must be positive");
    const double p = static_cast<double>(hist.counts[i]) / n;
    sum += std::pow(p, gauge.q) * std::pow(width, 1.0 - gauge.q);
  }
  return gauge.b_q + gauge.a_q / (1.0 - gauge.q) * std::log(sum);
}

double renyi_bm_analytic(const DiffusionParams& params, double x_v, double tau,
                         const EntropyGauge& gauge) {
  gauge.validate();
  check_params(params, tau);
  const double q = gauge.q;
  if (q == 1.0) throw DomainError(kModule, "use the Shannon operations for q = 1");
  const double z_v = z_threshold(params, x_v, tau);
  const double a = z_v / std::sqrt(tau);
  const double log_scale = 0.5 * std::log(2.0 * kPi * params.sigma0 * params.sigma0 * tau);
  return renyi_core(a, q, log_scale, gauge) -
         gauge.a_q / (q - 1.0) * log_std_normal_sf(z_v * std::sqrt(q / tau));
}

double renyi_gbm_analytic(const DiffusionParams& params, double x_v, double tau,
                          const EntropyGauge& gauge) {
  gauge.validate();
  check_params(params, tau);
  check_geometric(params, x_v);
  const double q = gauge.q;
  if (q == 1.0) throw DomainError(kModule, "use the Shannon operations for q = 1");
  const double s0 = params.sigma0;
  const double w_v = w_threshold(params, x_v, tau);
  const double w1 = w_v - s0 * tau * (1.0 - q) / q;
  const double log_scale =
      0.5 * std::log(2.0 * kPi * s0 * s0 * params.x0 * params.x0 * tau) + params.mu0 * tau +
      s0 * s0 * tau * (1.0 - q) / (2.0 * q);
  return renyi_core(w_v / std::sqrt(tau), q, log_scale, gauge) -
         gauge.a_q / (q - 1.0) * log_std_normal_sf(w1 * std::sqrt(q / tau));
}

double shannon_analytic(ProcessKind kind, const DiffusionParams& params, double x_v, double tau,
                        const EntropyGauge& gauge, const QuadratureConfig& quad) {
  gauge.validate();
  check_params(params, tau);
  if (gauge.q != 1.0) throw DomainError(kModule, "Shannon entropy needs q = 1");
  if (kind != ProcessKind::BM && kind != ProcessKind::GBM) {
    throw DomainError(kModule, "analytic entropy is available for BM and GBM only");
  }
  RestrictedSolution sol;
  sol.kind = kind;
  sol.x0 = params.x0;
  sol.t0 = 0.0;
  sol.mu0 = params.mu0;
  sol.sigma0 = params.sigma0;
  sol.x_v = x_v;
  const double spread = params.sigma0 * std::sqrt(tau);
  const auto neg_plogp = [](double p) { return p > 0.0 ? -p * std::log(p) : 0.0; };
  std::vector<double> pts;
  if (kind == ProcessKind::BM) {
    const double centre = params.x0 + params.mu0 * tau;
    const double lo = std::max(x_v, centre - kSpan * spread);
    const double hi = centre + kSpan * spread;
    if (!(hi > lo)) throw DegenerateNormalizationError(kModule, "threshold lies beyond the mass");
    pts = {lo};
    if (centre > lo) pts.push_back(centre);
    pts.push_back(hi);
    (void)normalization_constant(sol.noise(), tau, z_threshold(params, x_v, tau));
    const auto f = [&](double x) { return neg_plogp(psi(sol, x, tau)); };
    return integrate(f, pts, quad).value + gauge.b_q;
  }
  check_geometric(params, x_v);
  const double centre = std::log(params.x0) + params.mu0 * tau;
  const double lo = std::max(x_v > 0.0 ? std::log(x_v) : -kInf, centre - kSpan * spread);
  const double hi = centre + kSpan * spread;
  if (!(hi > lo)) throw DegenerateNormalizationError(kModule, "threshold lies beyond the mass");
  pts = {lo};
  if (centre > lo) pts.push_back(centre);
  pts.push_back(hi);
  (void)normalization_constant(sol.noise(), tau, w_threshold(params, x_v, tau));
  const auto f = [&](double y) {
    const double x = std::exp(y);
    return neg_plogp(psi(sol, std::max(x, x_v), tau)) * x;
  };
  return integrate(f, pts, quad).value + gauge.b_q;
}

double shannon_closed_form(ProcessKind kind, const DiffusionParams& params, double x_v, double tau,
                           const EntropyGauge& gauge) {
  gauge.validate();
  check_params(params, tau);
  const double spread = params.sigma0 * std::sqrt(tau);
  double a;
  if (kind == ProcessKind::BM) {
    a = z_threshold(params, x_v, tau) / std::sqrt(tau);
  } else if (kind == ProcessKind::GBM) {
    check_geometric(params, x_v);
    a = w_threshold(params, x_v, tau) / std::sqrt(tau);
  } else {
    throw DomainError(kModule, "analytic entropy is available for BM and GBM only");
  }
  const double r = hazard(a);
  const double tilt = a == -kInf ? 0.0 : 0.5 * a * r;
  double h = 0.5 * std::log(2.0 * kPi * std::numbers::e) + std::log(spread) + log_mass(a) + tilt;
  if (kind == ProcessKind::GBM) h += std::log(params.x0) + params.mu0 * tau + spread * r;
  return h + gauge.b_q;
}

double shannon_renyi_limit(ProcessKind kind, const DiffusionParams& params, double x_v, double tau,
                           double eps, const EntropyGauge& gauge) {
  gauge.validate();
  if (!(eps > 0.0 && eps < 0.25)) throw DomainError(kModule, "eps must lie in (0, 0.25)");
  const auto renyi = [&](double q) {
    EntropyGauge g{q, 1.0, 0.0};
    return kind == ProcessKind::BM ? renyi_bm_analytic(params, x_v, tau, g)
                                   : renyi_gbm_analytic(params, x_v, tau, g);
  };
  if (kind != ProcessKind::BM && kind != ProcessKind::GBM) {
    throw DomainError(kModule, "analytic entropy is available for BM and GBM only");
  }
  const double near = 0.5 * (renyi(1.0 + eps) + renyi(1.0 - eps));
  const double far = 0.5 * (renyi(1.0 + 2.0 * eps) + renyi(1.0 - 2.0 * eps));
  return (4.0 * near - far) / 3.0 + gauge.b_q;
}

double rate_bm(const DiffusionParams& params, double x_v, double tau) {
  const RateAuxiliaries aux = rate_auxiliaries(params, x_v, tau);
  if (x_v == -kInf) return 0.5 / tau;
  const double z_v = aux.z_v;
  const double z1 = aux.z1;
  const double r = hazard(z_v / std::sqrt(tau));
  const double rt = r / tau;
  return 0.5 / tau + z1 * r / (4.0 * std::pow(tau, 1.5)) - 0.25 * z1 * z_v * rt * rt +
         z_v * r * z1 * z_v / (4.0 * std::pow(tau, 2.5));
}

double rate_gbm(const DiffusionParams& params, double x_v, double tau) {
  check_geometric(params, x_v);
  const RateAuxiliaries aux = rate_auxiliaries(params, x_v, tau);
  if (x_v == 0.0) return 0.5 / tau + params.mu0;
  const double r = hazard(aux.w_v / std::sqrt(tau));
  const double rt = r / tau;
  return 0.5 / tau + params.mu0 + aux.w4 * r / (4.0 * std::pow(tau, 1.5)) -
         0.25 * aux.w2 * aux.w3 * rt * rt +
         aux.w3 * r * aux.w2 * aux.w_v / (4.0 * std::pow(tau, 2.5));
}

std::vector<SeriesPoint> rate_empirical(std::span<const SeriesPoint> series, int window) {
  const std::size_t n = series.size();
  if (n < 3) throw DomainError(kModule, "a rate needs at least three points");
  if (window < 1 || window % 2 == 0) throw DomainError(kModule, "smoothing window must be odd");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(series[i].t > series[i - 1].t)) throw DomainError(kModule, "series times must increase");
  }
  std::vector<double> f(n);
  const std::size_t half = static_cast<std::size_t>(window / 2);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= half ? i - half : 0;
    const std::size_t hi = std::min(n - 1, i + half);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += series[j].value;
    f[i] = sum / static_cast<double>(hi - lo + 1);
  }
  std::vector<SeriesPoint> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i].t = series[i].t;
  {
    const double h1 = series[1].t - series[0].t;
    const double h2 = series[2].t - series[1].t;
    out[0].value = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * f[0] + (h1 + h2) / (h1 * h2) * f[1] -
                   h1 / (h2 * (h1 + h2)) * f[2];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = series[i].t - series[i - 1].t;
    const double h2 = series[i + 1].t - series[i].t;
    out[i].value = -h2 / (h1 * (h1 + h2)) * f[i - 1] + (h2 - h1) / (h1 * h2) * f[i] +
                   h1 / (h2 * (h1 + h2)) * f[i + 1];
  }
  {
    const double h1 = series[n - 2].t - series[n - 3].t;
    const double h2 = series[n - 1].t - series[n - 2].t;
    out[n - 1].value = h2 / (h1 * (h1 + h2)) * f[n - 3] - (h1 + h2) / (h1 * h2) * f[n - 2] +
                       (2.0 * h2 + h1) / (h2 * (h1 + h2)) * f[n - 1];
  }
  return out;
}

std::string entropy_csv(std::span<const SeriesPoint> entropy, std::span<const SeriesPoint> rate) {
  if (entropy.size() != rate.size()) throw DomainError(kModule, "entropy and rate lengths differ");
  std::string out = "t,H,dH_dt\n";
  for (std::size_t i = 0; i < entropy.size(); ++i) {
    out += io::format_double(entropy[i].t);
    out += ',';
    out += io::format_double(entropy[i].value);
    out += ',';
    out += io::format_double(rate[i].value);
    out += '\n';
  }
  return out;
}

}  // namespace gidp
