#pragma once

#include <complex>
#include <string>
#include <variant>

#include "gidp/quadrature.hpp"
#include "gidp/random_stream.hpp"

namespace gidp {

struct GaussianNoiseParams {
  double nu = 0.0;
  double rho = 1.0;
};

// Stable law in the S1 parameterization.
struct StableNoiseParams {
  double alpha = 2.0;
  double beta = 0.0;
  double nu = 0.0;
  double rho = 1.0;
};

using NoiseModel = std::variant<GaussianNoiseParams, StableNoiseParams>;

// Throws DomainError or UnsupportedParameterizationError.
void validate(const NoiseModel& model);
bool is_gaussian(const NoiseModel& model);
double location(const NoiseModel& model);
double scale(const NoiseModel& model);
std::string describe(const NoiseModel& model);

// tan(pi*alpha/2), pinned to 0 at alpha = 2.
double skew_factor(double alpha);

// Cumulant generating function. For complex arguments the formula is
// continued literally, with |q| the modulus and sign(q) = q/|q|.
std::complex<double> cgf_eval(const NoiseModel& model, std::complex<double> q);
inline std::complex<double> cgf_eval(const NoiseModel& model, double q) {
  return cgf_eval(model, std::complex<double>(q, 0.0));
}

NoiseModel cgf_time_scale(const NoiseModel& model, double tau);

// D(z) = (1/2pi) * integral of exp(-ipz + K(p)) dp.
double density(const NoiseModel& model, double z, const QuadratureConfig& quad = {});

// Probability of exceeding z.
double survival(const NoiseModel& model, double z, const QuadratureConfig& quad = {});

// Cumulant c_n; throws UndefinedMomentError when it does not exist.
double cumulants(const NoiseModel& model, int n);

// Draws with per-model constants precomputed; cheap to copy.
class NoiseSampler {
 public:
  explicit NoiseSampler(const NoiseModel& model);
  double operator()(RandomStream& rng) const;

 private:
  enum class Path { Gaussian, Cauchy, Chambers };
  Path path_;
  double nu_;
  double rho_;
  double alpha_ = 2.0;
  double inv_alpha_ = 0.5;
  double tail_exponent_ = 0.0;  // (1 - alpha) / alpha
  double shift_ = 0.0;          // B
  double stretch_ = 1.0;        // S
};

double sample(const NoiseModel& model, RandomStream& rng);

}  // namespace gidp
