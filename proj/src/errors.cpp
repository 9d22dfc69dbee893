#include "gidp/errors.hpp"

namespace gidp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::UnsupportedParameterization: return "unsupported_parameterization";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::UndefinedMoment: return "undefined_moment";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::DegenerateNormalization: return "degenerate_normalization";
    case ErrorKind::SingularJacobian: return "singular_jacobian";
    case ErrorKind::UndefinedMetric: return "undefined_metric";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace gidp
