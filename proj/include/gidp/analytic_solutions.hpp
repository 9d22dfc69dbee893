#pragma once

#include <span>
#include <string>
#include <vector>

#include "gidp/noise_models.hpp"
#include "gidp/sde_engine.hpp"

namespace gidp {

// Closed-form restricted density for one of the four processes. For BM/LF
// x_v = -inf means no threshold; for GBM/GLF x_v = 0 means no threshold.
struct RestrictedSolution {
  ProcessKind kind = ProcessKind::BM;
  double x0 = 0.0;
  double t0 = 0.0;
  double mu0 = 0.0;
  double sigma0 = 1.0;
  double alpha = 2.0;
  double beta = 0.0;
  double x_v = -std::numeric_limits<double>::infinity();

  void validate() const;
  // Unit noise driving the process.
  NoiseModel noise() const;
};

struct FpConstCoeffProblem {
  double mu0 = 0.0;
  double sigma0 = 1.0;
  double v0 = 0.0;
  NoiseModel noise = GaussianNoiseParams{};
  double x0 = 0.0;
  double t0 = 0.0;
};

enum class VariableChange { Identity, Log };

double drift_free_propagator(const NoiseModel& noise, double dx, double tau,
                             const QuadratureConfig& quad = {});

double fp_const_coeff_solution(const FpConstCoeffProblem& problem, double x, double t,
                               const QuadratureConfig& quad = {});

double change_of_variable(VariableChange kind, double x, double x0);

// 1/survival(z_V) under the noise scaled to tau. Survival below 1e-12 raises
// DegenerateNormalizationError.
double normalization_constant(const NoiseModel& noise, double tau, double z_v,
                              const QuadratureConfig& quad = {});

double psi(const RestrictedSolution& solution, double x, double t,
           const QuadratureConfig& quad = {});

// psi on a grid at one time; the normalization is computed once.
std::vector<double> psi_curve(const RestrictedSolution& solution, std::span<const double> xs,
                              double t, const QuadratureConfig& quad = {});

// Columns x,psi.
std::string curve_csv(std::span<const double> xs, std::span<const double> values);

}  // namespace gidp
