#pragma once

#include <complex>
#include <functional>
#include <span>

#include "gidp/noise_models.hpp"
#include "gidp/quadrature.hpp"

namespace gidp {

// A drift or diffusion coefficient: c, c*x, or an arbitrary function of (x, t).
class Coefficient {
 public:
  enum class Kind { Constant, Linear, Custom };
  using Function = std::function<double(double x, double t)>;

  static Coefficient constant(double c) { return Coefficient(Kind::Constant, c, {}); }
  static Coefficient linear(double c) { return Coefficient(Kind::Linear, c, {}); }
  static Coefficient custom(Function f) { return Coefficient(Kind::Custom, 0.0, std::move(f)); }

  Kind kind() const noexcept { return kind_; }
  double coefficient() const noexcept { return c_; }
  double value(double x, double t) const;
  // d/dx; central differences with h = 1e-6*max(1,|x|) for Custom.
  double dx(double x, double t) const;

 private:
  Coefficient(Kind kind, double c, Function f) : kind_(kind), c_(c), f_(std::move(f)) {}
  Kind kind_;
  double c_;
  Function f_;
};

struct CoefficientField {
  Coefficient mu = Coefficient::constant(0.0);
  Coefficient sigma = Coefficient::constant(1.0);

  // sigma * d/dx (mu / sigma); exactly zero when mu and sigma share a
  // Constant or Linear form.
  double gauge_term(double x, double t) const;
  // d/dx ln sigma.
  double dlog_sigma(double x, double t) const;
};

// gamma = 0 Ito, 1/2 Fisk-Stratonovich, 1 Hanggi-Klimontovich.
struct CalculusParameterization {
  double gamma = 0.0;
  void validate() const;
};

// i p (xdot - mu) + K(sigma p) - gamma sigma d/dx(mu/sigma).
std::complex<double> lagrangian(double x, double xdot, std::complex<double> p, double t,
                                const CoefficientField& coeffs, const NoiseModel& noise,
                                CalculusParameterization gamma);

// p_X mu - K(-i sigma p_X) + gamma sigma d/dx(mu/sigma).
std::complex<double> hamiltonian(double x, std::complex<double> p_x, double t,
                                 const CoefficientField& coeffs, const NoiseModel& noise,
                                 CalculusParameterization gamma);

// White-noise action density (xdot-mu)^2/(2 sigma^2) - gamma mu' + gamma mu (ln sigma)'.
double om_lagrangian(double x, double xdot, double t, const CoefficientField& coeffs,
                     CalculusParameterization gamma);

// White-noise Hamiltonian p mu - sigma^2 p^2/2 + gamma mu' - gamma mu (ln sigma)'.
double msrjd_hamiltonian(double x, double p_x, double t, const CoefficientField& coeffs,
                         CalculusParameterization gamma);

struct PathPoint {
  double t;
  double x;
};

// Sum over steps of ln|1 - dt*gamma*sigma*d/dx(mu/sigma)| at the left point.
// The total time derivative of ln sigma is not included.
double jacobian_log_factor_discrete(std::span<const PathPoint> path, const CoefficientField& coeffs,
                                    CalculusParameterization gamma);

// -gamma * integral of sigma d/dx(mu/sigma) along x(t), t in [t0, t1].
double jacobian_log_factor_continuum(const std::function<double(double)>& path, double t0,
                                     double t1, const CoefficientField& coeffs,
                                     CalculusParameterization gamma,
                                     const QuadratureConfig& quad = {});

}  // namespace gidp
