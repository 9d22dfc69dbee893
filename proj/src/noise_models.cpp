#include "gidp/noise_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "gidp/errors.hpp"

namespace gidp {

namespace {

constexpr const char* kModule = "noise_models";
constexpr double kPi = std::numbers::pi;
// ln(1e16): beyond p* with p*^alpha = this value, |exp(K)| < 1e-16.
constexpr double kCutoffExponent = 36.841361487904734;
// Density values down to this floor are treated as quadrature ringing.
constexpr double kNegativeFloor = -1e-9;
// Standardized distance beyond which the tail expansion is tried first.
constexpr double kTailSwitch = 10.0;

bool is_cauchy(const StableNoiseParams& s) { return s.alpha == 1.0 && s.beta == 0.0; }

double gaussian_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * kPi); }

double gaussian_sf(double u) { return 0.5 * std::erfc(u / std::numbers::sqrt2); }

// Asymptotic (alpha > 1) or convergent (alpha < 1) power series for the
// standardized stable law at x -> +infinity. Returns nothing when the terms
// stop shrinking before the requested accuracy is reached.
std::optional<double> stable_tail_series(double alpha, double beta, double x, bool survival_mode,
                                         const QuadratureConfig& quad) {
  const double bphi = beta * skew_factor(alpha);
  const double theta0 = std::atan(bphi);
  const double log_c = 0.5 * std::log1p(bphi * bphi);
  const double angle = 0.5 * kPi * alpha + theta0;
  const double log_x = std::log(x);
  const int max_terms = alpha < 1.0 ? 400 : 80;
  double sum = 0.0;
  double previous_bound = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= max_terms; ++k) {
    const double ka = k * alpha;
    double log_bound = k * log_c + std::lgamma(ka + 1.0) - std::lgamma(k + 1.0);
    if (survival_mode) {
      log_bound += -ka * log_x - std::log(ka);
    } else {
      log_bound += -(ka + 1.0) * log_x;
    }
    const double bound = std::exp(log_bound) / kPi;
    const double target = std::max(1e-3 * quad.abs_tol, 1e-3 * quad.rel_tol * std::abs(sum));
    if (bound < target) return sum;
    if (alpha > 1.0 && k > 1 && bound > previous_bound) return std::nullopt;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    sum += sign * bound * std::sin(k * angle);
    previous_bound = bound;
  }
  return std::nullopt;
}

std::vector<double> oscillation_breakpoints(double alpha, double bphi, double u,
                                            const QuadratureConfig& quad) {
  const double p_max = std::pow(kCutoffExponent, 1.0 / alpha);
  const double variation = std::abs(bphi) * std::pow(p_max, alpha) + std::abs(u) * p_max;
  const int cap = std::max(1, quad.max_panels / 4);
  const int n = std::clamp(static_cast<int>(std::ceil(variation / kPi)) + 1, 1, cap);
  std::vector<double> pts(n + 1);
  for (int i = 0; i <= n; ++i) pts[i] = p_max * static_cast<double>(i) / n;
  return pts;
}

double stable_standard_density(double alpha, double beta, double u, const QuadratureConfig& quad) {
  if (std::abs(u) > kTailSwitch) {
    const auto tail = u > 0 ? stable_tail_series(alpha, beta, u, false, quad)
                            : stable_tail_series(alpha, -beta, -u, false, quad);
    if (tail) return *tail;
  }
  const double bphi = beta * skew_factor(alpha);
  const auto integrand = [alpha, bphi, u](double p) {
    const double pa = std::pow(p, alpha);
    return std::exp(-pa) * std::cos(bphi * pa - p * u);
  };
  const auto pts = oscillation_breakpoints(alpha, bphi, u, quad);
  QuadratureConfig scaled = quad;
  scaled.abs_tol = quad.abs_tol * kPi;
  return integrate(integrand, pts, scaled).value / kPi;
}

double stable_standard_survival(double alpha, double beta, double u, const QuadratureConfig& quad) {
  if (std::abs(u) > kTailSwitch) {
    if (u > 0) {
      if (auto tail = stable_tail_series(alpha, beta, u, true, quad)) return *tail;
    } else {
      if (auto tail = stable_tail_series(alpha, -beta, -u, true, quad)) return 1.0 - *tail;
    }
  }
  const double bphi = beta * skew_factor(alpha);
  // Gil-Pelaez inversion.
  const auto integrand = [alpha, bphi, u](double p) {
    const double pa = std::pow(p, alpha);
    return std::exp(-pa) * std::sin(bphi * pa - p * u) / p;
  };
  const auto pts = oscillation_breakpoints(alpha, bphi, u, quad);
  QuadratureConfig scaled = quad;
  scaled.abs_tol = quad.abs_tol * kPi;
  return 0.5 + integrate(integrand, pts, scaled).value / kPi;
}

double clamp_density(double value) {
  if (value < kNegativeFloor) {
    std::ostringstream msg;
    msg << "density quadrature returned " << value << ", below the ringing floor";
    throw ConvergenceError(kModule, msg.str(), -value);
  }
  return std::max(0.0, value);
}

double clamp_probability(double value) {
  if (value < kNegativeFloor || value > 1.0 - kNegativeFloor) {
    std::ostringstream msg;
    msg << "survival quadrature returned " << value << ", outside [0, 1]";
    throw ConvergenceError(kModule, msg.str(), value < 0 ? -value : value - 1.0);
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace

double skew_factor(double alpha) {
  if (alpha == 2.0) return 0.0;
  return std::tan(0.5 * kPi * alpha);
}

void validate(const NoiseModel& model) {
  if (const auto* g = std::get_if<GaussianNoiseParams>(&model)) {
    if (!std::isfinite(g->nu)) throw DomainError(kModule, "Gaussian location must be finite");
    if (!(g->rho > 0.0) || !std::isfinite(g->rho)) {
      throw DomainError(kModule, "Gaussian scale rho must be positive");
    }
    return;
  }
  const auto& s = std::get<StableNoiseParams>(model);
  if (!(s.alpha > 0.0 && s.alpha <= 2.0)) {
    throw DomainError(kModule, "stability alpha must lie in (0, 2]");
  }
  if (!(s.beta >= -1.0 && s.beta <= 1.0)) {
    throw DomainError(kModule, "skewness beta must lie in [-1, 1]");
  }
  if (!std::isfinite(s.nu)) throw DomainError(kModule, "stable location must be finite");
  if (!(s.rho > 0.0) || !std::isfinite(s.rho)) {
    throw DomainError(kModule, "stable scale rho must be positive");
  }
  if (s.alpha == 1.0 && s.beta != 0.0) {
    throw UnsupportedParameterizationError(kModule,
                                           "alpha = 1 requires beta = 0 (skewed Cauchy unsupported)");
  }
}

bool is_gaussian(const NoiseModel& model) {
  return std::holds_alternative<GaussianNoiseParams>(model);
}

double location(const NoiseModel& model) {
  return std::visit([](const auto& m) { return m.nu; }, model);
}

double scale(const NoiseModel& model) {
  return std::visit([](const auto& m) { return m.rho; }, model);
}

std::string describe(const NoiseModel& model) {
  std::ostringstream out;
  out.precision(17);
  if (const auto* g = std::get_if<GaussianNoiseParams>(&model)) {
    out << "Gaussian{nu=" << g->nu << ", rho=" << g->rho << "}";
  } else {
    const auto& s = std::get<StableNoiseParams>(model);
    out << "Stable{alpha=" << s.alpha << ", beta=" << s.beta << ", nu=" << s.nu
        << ", rho=" << s.rho << "}";
  }
  return out.str();
}

std::complex<double> cgf_eval(const NoiseModel& model, std::complex<double> q) {
  validate(model);
  const std::complex<double> i(0.0, 1.0);
  if (const auto* g = std::get_if<GaussianNoiseParams>(&model)) {
    const std::complex<double> iq = i * q;
    return iq * g->nu + 0.5 * g->rho * g->rho * iq * iq;
  }
  const auto& s = std::get<StableNoiseParams>(model);
  const double modulus = std::abs(q);
  if (modulus == 0.0) return {0.0, 0.0};
  const std::complex<double> sign = q / modulus;
  const double magnitude = std::pow(s.rho * modulus, s.alpha);
  return i * q * s.nu - magnitude * (1.0 - i * s.beta * sign * skew_factor(s.alpha));
}

NoiseModel cgf_time_scale(const NoiseModel& model, double tau) {
  validate(model);
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw DomainError(kModule, "time scale tau must be positive");
  }
  if (const auto* g = std::get_if<GaussianNoiseParams>(&model)) {
    return GaussianNoiseParams{g->nu * tau, g->rho * std::sqrt(tau)};
  }
  auto s = std::get<StableNoiseParams>(model);
  s.nu *= tau;
  s.rho *= std::pow(tau, 1.0 / s.alpha);
  return s;
}

double density(const NoiseModel& model, double z, const QuadratureConfig& quad) {
  validate(model);
  if (std::isnan(z)) throw DomainError(kModule, "density argument is NaN");
  if (std::isinf(z)) return 0.0;
  const double nu = location(model);
  const double rho = scale(model);
  const double u = (z - nu) / rho;
  if (is_gaussian(model)) return gaussian_pdf(u) / rho;
  const auto& s = std::get<StableNoiseParams>(model);
  if (s.alpha == 2.0) return gaussian_pdf(u / std::numbers::sqrt2) / (rho * std::numbers::sqrt2);
  if (is_cauchy(s)) return 1.0 / (kPi * rho * (1.0 + u * u));
  return clamp_density(stable_standard_density(s.alpha, s.beta, u, quad) / rho);
}

double survival(const NoiseModel& model, double z, const QuadratureConfig& quad) {
  validate(model);
  if (std::isnan(z)) throw DomainError(kModule, "survival argument is NaN");
  if (z == std::numeric_limits<double>::infinity()) return 0.0;
  if (z == -std::numeric_limits<double>::infinity()) return 1.0;
  const double u = (z - location(model)) / scale(model);
  if (is_gaussian(model)) return gaussian_sf(u);
  const auto& s = std::get<StableNoiseParams>(model);
  if (s.alpha == 2.0) return gaussian_sf(u / std::numbers::sqrt2);
  if (is_cauchy(s)) {
    return u > 0 ? std::atan(1.0 / u) / kPi : 0.5 - std::atan(u) / kPi;
  }
  return clamp_probability(stable_standard_survival(s.alpha, s.beta, u, quad));
}

double cumulants(const NoiseModel& model, int n) {
  validate(model);
  if (n < 1) throw DomainError(kModule, "cumulant order must be at least 1");
  double nu = 0.0;
  double variance = 0.0;
  if (const auto* g = std::get_if<GaussianNoiseParams>(&model)) {
    nu = g->nu;
    variance = g->rho * g->rho;
  } else {
    const auto& s = std::get<StableNoiseParams>(model);
    if (s.alpha < 2.0) {
      if (n == 1 && s.alpha > 1.0) return s.nu;
      std::ostringstream msg;
      msg << "cumulant of order " << n << " does not exist for alpha = " << s.alpha;
      throw UndefinedMomentError(kModule, msg.str());
    }
    nu = s.nu;
    variance = 2.0 * s.rho * s.rho;
  }
  if (n == 1) return nu;
  if (n == 2) return variance;
  return 0.0;
}

NoiseSampler::NoiseSampler(const NoiseModel& model) {
  validate(model);
  nu_ = location(model);
  rho_ = scale(model);
  if (is_gaussian(model)) {
    path_ = Path::Gaussian;
    return;
  }
  const auto& s = std::get<StableNoiseParams>(model);
  alpha_ = s.alpha;
  if (s.alpha == 2.0) {
    path_ = Path::Gaussian;
    rho_ *= std::numbers::sqrt2;
    return;
  }
  if (is_cauchy(s)) {
    path_ = Path::Cauchy;
    return;
  }
  path_ = Path::Chambers;
  const double bphi = s.beta * skew_factor(s.alpha);
  inv_alpha_ = 1.0 / s.alpha;
  tail_exponent_ = (1.0 - s.alpha) / s.alpha;
  shift_ = std::atan(bphi) / s.alpha;
  stretch_ = std::pow(1.0 + bphi * bphi, 0.5 / s.alpha);
}

double NoiseSampler::operator()(RandomStream& rng) const {
  switch (path_) {
    case Path::Gaussian:
      return nu_ + rho_ * rng.normal();
    case Path::Cauchy:
      return nu_ + rho_ * std::tan(kPi * (rng.uniform() - 0.5));
    case Path::Chambers: {
      const double v = kPi * (rng.uniform() - 0.5);
      const double w = rng.exponential();
      const double shifted = alpha_ * (v + shift_);
      const double x = stretch_ * std::sin(shifted) / std::pow(std::cos(v), inv_alpha_) *
                       std::pow(std::cos(v - shifted) / w, tail_exponent_);
      return nu_ + rho_ * x;
    }
  }
  return 0.0;
}

double sample(const NoiseModel& model, RandomStream& rng) { return NoiseSampler(model)(rng); }

}  // namespace gidp
