#pragma once

#include <functional>
#include <span>

namespace gidp {

struct QuadratureConfig {
  double abs_tol = 1e-8;
  double rel_tol = 1e-6;
  // Budget of Gauss-Kronrod panel applications (21 integrand calls each).
  int max_panels = 10000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int panels = 0;
};

using Integrand = std::function<double(double)>;

// Globally adaptive 21-point Gauss-Kronrod on [a, b]. Throws ConvergenceError
// (carrying the residual error estimate) when the budget is exhausted.
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureConfig& config = {});

// Same, starting from the panels delimited by `breakpoints` (sorted, at
// least two entries). Useful for oscillatory integrands.
QuadratureResult integrate(const Integrand& f, std::span<const double> breakpoints,
                           const QuadratureConfig& config = {});

}  // namespace gidp
