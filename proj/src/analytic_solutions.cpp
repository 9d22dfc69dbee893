#include "gidp/analytic_solutions.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gidp/errors.hpp"
#include "gidp/io.hpp"

namespace gidp {

namespace {

constexpr const char* kModule = "analytic_solutions";
constexpr double kSurvivalFloor = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double positive_tau(double t, double t0) {
  const double tau = t - t0;
  if (!(tau > 0.0)) throw DomainError(kModule, "evaluation time must exceed t0");
  return tau;
}

// Standardized coordinate of x (z for additive kinds, w for geometric ones).
double standardized(const RestrictedSolution& s, double x, double tau) {
  if (is_geometric(s.kind)) {
    if (x <= 0.0) return -kInf;
    return (std::log(x) - std::log(s.x0) - s.mu0 * tau) / s.sigma0;
  }
  if (std::isinf(x)) return x;
  return (x - s.x0 - s.mu0 * tau) / s.sigma0;
}

struct Prepared {
  NoiseModel scaled;
  double tau;
  double norm;
};

Prepared prepare(const RestrictedSolution& s, double t, const QuadratureConfig& quad) {
  s.validate();
  const double tau = positive_tau(t, s.t0);
  const double z_v = standardized(s, s.x_v, tau);
  return Prepared{cgf_time_scale(s.noise(), tau), tau, normalization_constant(s.noise(), tau, z_v, quad)};
}

double evaluate(const RestrictedSolution& s, const Prepared& p, double x, const QuadratureConfig& quad) {
  if (x < s.x_v) return 0.0;
  if (is_geometric(s.kind) && x <= 0.0) return 0.0;
  const double coord = standardized(s, x, p.tau);
  const double jacobian = is_geometric(s.kind) ? s.sigma0 * x : s.sigma0;
  return density(p.scaled, coord, quad) * p.norm / jacobian;
}

}  // namespace

void RestrictedSolution::validate() const {
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
    throw DomainError(kModule, "sigma0 must be positive for the analytic density");
  }
  if (!std::isfinite(mu0) || !std::isfinite(x0) || !std::isfinite(t0)) {
    throw DomainError(kModule, "x0, t0 and mu0 must be finite");
  }
  if (std::isnan(x_v) || x_v == kInf) throw DomainError(kModule, "threshold x_V must be finite or -inf");
  if (is_geometric(kind)) {
    if (!(x0 > 0.0)) throw DomainError(kModule, "geometric kinds require x0 > 0");
    if (x_v < 0.0) throw DomainError(kModule, "geometric kinds require x_V >= 0");
  }
  gidp::validate(noise());
}

NoiseModel RestrictedSolution::noise() const {
  if (kind == ProcessKind::LF || kind == ProcessKind::GLF) {
    return StableNoiseParams{alpha, beta, 0.0, 1.0};
  }
  return GaussianNoiseParams{0.0, 1.0};
}

double drift_free_propagator(const NoiseModel& noise, double dx, double tau,
                             const QuadratureConfig& quad) {
  return density(cgf_time_scale(noise, tau), dx, quad);
}

double fp_const_coeff_solution(const FpConstCoeffProblem& problem, double x, double t,
                               const QuadratureConfig& quad) {
  if (!(problem.sigma0 > 0.0)) throw DomainError(kModule, "sigma0 must be positive");
  if (!(problem.v0 >= 0.0)) throw DomainError(kModule, "decay rate V0 must be nonnegative");
  const double tau = positive_tau(t, problem.t0);
  const double z = (x - problem.x0 - problem.mu0 * tau) / problem.sigma0;
  return std::exp(-tau * problem.v0) / problem.sigma0 *
         density(cgf_time_scale(problem.noise, tau), z, quad);
}

double change_of_variable(VariableChange kind, double x, double x0) {
  if (kind == VariableChange::Identity) return x - x0;
  if (!(x > 0.0) || !(x0 > 0.0)) {
    throw DomainError(kModule, "logarithmic change of variable needs positive arguments");
  }
  return std::log(x) - std::log(x0);
}

double normalization_constant(const NoiseModel& noise, double tau, double z_v,
                              const QuadratureConfig& quad) {
  const double mass = survival(cgf_time_scale(noise, tau), z_v, quad);
  if (!(mass >= kSurvivalFloor)) {
    std::ostringstream msg;
    msg << "survival mass " << mass << " above the threshold is below " << kSurvivalFloor;
    throw DegenerateNormalizationError(kModule, msg.str());
  }
  return 1.0 / mass;
}

double psi(const RestrictedSolution& solution, double x, double t, const QuadratureConfig& quad) {
  const Prepared p = prepare(solution, t, quad);
  return evaluate(solution, p, x, quad);
}

std::vector<double> psi_curve(const RestrictedSolution& solution, std::span<const double> xs,
                              double t, const QuadratureConfig& quad) {
  const Prepared p = prepare(solution, t, quad);
  std::vector<double> out;
  out.reserve(xs.size());
  for (const double x : xs) out.push_back(evaluate(solution, p, x, quad));
  return out;
}

std::string curve_csv(std::span<const double> xs, std::span<const double> values) {
  if (xs.size() != values.size()) throw DomainError(kModule, "curve arrays differ in length");
  std::string out = "x,psi\n";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out += io::format_double(xs[i]);
    out += ',';
    out += io::format_double(values[i]);
    out += '\n';
  }
  return out;
}

}  // namespace gidp
