#include "gidp/action_functionals.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gidp/errors.hpp"

namespace gidp {

namespace {

constexpr const char* kModule = "action_functionals";

double fd_step(double x) { return 1e-6 * std::max(1.0, std::abs(x)); }

double positive_sigma(const CoefficientField& coeffs, double x, double t) {
  const double s = coeffs.sigma.value(x, t);
  if (!(s > 0.0)) {
    std::ostringstream msg;
    msg << "diffusion coefficient must be positive, got " << s << " at x = " << x;
    throw DomainError(kModule, msg.str());
  }
  return s;
}

}  // namespace

double Coefficient::value(double x, double t) const {
  switch (kind_) {
    case Kind::Constant: return c_;
    case Kind::Linear: return c_ * x;
    case Kind::Custom: return f_(x, t);
  }
  return 0.0;
}

double Coefficient::dx(double x, double t) const {
  switch (kind_) {
    case Kind::Constant: return 0.0;
    case Kind::Linear: return c_;
    case Kind::Custom: {
      const double h = fd_step(x);
      return (f_(x + h, t) - f_(x - h, t)) / (2.0 * h);
    }
  }
  return 0.0;
}

double CoefficientField::gauge_term(double x, double t) const {
  const auto mk = mu.kind();
  const auto sk = sigma.kind();
  if (mk != Coefficient::Kind::Custom && mk == sk) return 0.0;
  if (mk != Coefficient::Kind::Custom && sk != Coefficient::Kind::Custom) {
    if (mk == Coefficient::Kind::Linear) return mu.coefficient();  // c_mu x / c_sigma
    // c_mu / (c_sigma x): sigma * d/dx = -c_mu / x
    return -mu.coefficient() / x;
  }
  const double s = sigma.value(x, t);
  const double h = fd_step(x);
  const auto ratio = [&](double y) { return mu.value(y, t) / sigma.value(y, t); };
  return s * (ratio(x + h) - ratio(x - h)) / (2.0 * h);
}

double CoefficientField::dlog_sigma(double x, double t) const {
  switch (sigma.kind()) {
    case Coefficient::Kind::Constant: return 0.0;
    case Coefficient::Kind::Linear: return 1.0 / x;
    case Coefficient::Kind::Custom: return sigma.dx(x, t) / sigma.value(x, t);
  }
  return 0.0;
}

void CalculusParameterization::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw DomainError(kModule, "gamma must lie in [0, 1]");
}

std::complex<double> lagrangian(double x, double xdot, std::complex<double> p, double t,
                                const CoefficientField& coeffs, const NoiseModel& noise,
                                CalculusParameterization gamma) {
  gamma.validate();
  const std::complex<double> i(0.0, 1.0);
  const double mu = coeffs.mu.value(x, t);
  const double sigma = positive_sigma(coeffs, x, t);
  return i * p * (xdot - mu) + cgf_eval(noise, sigma * p) - gamma.gamma * coeffs.gauge_term(x, t);
}

std::complex<double> hamiltonian(double x, std::complex<double> p_x, double t,
                                 const CoefficientField& coeffs, const NoiseModel& noise,
                                 CalculusParameterization gamma) {
  gamma.validate();
  const std::complex<double> i(0.0, 1.0);
  const double mu = coeffs.mu.value(x, t);
  const double sigma = positive_sigma(coeffs, x, t);
  return p_x * mu - cgf_eval(noise, -i * sigma * p_x) + gamma.gamma * coeffs.gauge_term(x, t);
}

double om_lagrangian(double x, double xdot, double t, const CoefficientField& coeffs,
                     CalculusParameterization gamma) {
  gamma.validate();
  const double mu = coeffs.mu.value(x, t);
  const double sigma = positive_sigma(coeffs, x, t);
  const double drift_gap = xdot - mu;
  // mu' - mu (ln sigma)' is the gauge term sigma (mu/sigma)'.
  return drift_gap * drift_gap / (2.0 * sigma * sigma) - gamma.gamma * coeffs.gauge_term(x, t);
}

double msrjd_hamiltonian(double x, double p_x, double t, const CoefficientField& coeffs,
                         CalculusParameterization gamma) {
  gamma.validate();
  const double mu = coeffs.mu.value(x, t);
  const double sigma = positive_sigma(coeffs, x, t);
  return p_x * mu - 0.5 * sigma * sigma * p_x * p_x + gamma.gamma * coeffs.gauge_term(x, t);
}

double jacobian_log_factor_discrete(std::span<const PathPoint> path, const CoefficientField& coeffs,
                                    CalculusParameterization gamma) {
  gamma.validate();
  if (path.size() < 2) throw DomainError(kModule, "a path needs at least two points");
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const double dt = path[k + 1].t - path[k].t;
    if (!(dt > 0.0)) throw DomainError(kModule, "path times must be strictly increasing");
    positive_sigma(coeffs, path[k].x, path[k].t);
    const double factor = 1.0 - dt * gamma.gamma * coeffs.gauge_term(path[k].x, path[k].t);
    if (!(factor > 0.0)) {
      std::ostringstream msg;
      msg << "Jacobian factor " << factor << " at step " << k << " is not positive";
      throw SingularJacobianError(kModule, msg.str());
    }
    total += std::log(factor);
  }
  return total;
}

double jacobian_log_factor_continuum(const std::function<double(double)>& path, double t0,
                                     double t1, const CoefficientField& coeffs,
                                     CalculusParameterization gamma, const QuadratureConfig& quad) {
  gamma.validate();
  if (!(t1 > t0)) throw DomainError(kModule, "integration interval must be nonempty");
  if (gamma.gamma == 0.0) return 0.0;
  const auto integrand = [&](double t) {
    const double x = path(t);
    positive_sigma(coeffs, x, t);
    return coeffs.gauge_term(x, t);
  };
  return -gamma.gamma * integrate(integrand, t0, t1, quad).value;
}

}  // namespace gidp
