#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gidp {

enum class ErrorKind {
  Domain,
  UnsupportedParameterization,
  Convergence,
  UndefinedMoment,
  Overflow,
  DegenerateNormalization,
  SingularJacobian,
  UndefinedMetric,
  Config,
  Io,
};

const char* to_string(ErrorKind kind);

// Base for every error raised by the library. `module` names the
// component that detected the problem.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message)
      : std::runtime_error(message), kind_(kind), module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

 private:
  ErrorKind kind_;
  std::string module_;
};

class DomainError : public Error {
 public:
  DomainError(std::string module, const std::string& message)
      : Error(ErrorKind::Domain, std::move(module), message) {}
};

class UnsupportedParameterizationError : public Error {
 public:
  UnsupportedParameterizationError(std::string module, const std::string& message)
      : Error(ErrorKind::UnsupportedParameterization, std::move(module), message) {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(std::string module, const std::string& message, double residual)
      : Error(ErrorKind::Convergence, std::move(module), message), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class UndefinedMomentError : public Error {
 public:
  UndefinedMomentError(std::string module, const std::string& message)
      : Error(ErrorKind::UndefinedMoment, std::move(module), message) {}
};

class OverflowError : public Error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  OverflowError(std::string module, const std::string& message, std::size_t trajectory,
                std::size_t step)
      : Error(ErrorKind::Overflow, std::move(module), message),
        trajectory_(trajectory),
        step_(step) {}
  std::size_t trajectory() const noexcept { return trajectory_; }
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t trajectory_;
  std::size_t step_;
};

class DegenerateNormalizationError : public Error {
 public:
  DegenerateNormalizationError(std::string module, const std::string& message)
      : Error(ErrorKind::DegenerateNormalization, std::move(module), message) {}
};

class SingularJacobianError : public Error {
 public:
  SingularJacobianError(std::string module, const std::string& message)
      : Error(ErrorKind::SingularJacobian, std::move(module), message) {}
};

class UndefinedMetricError : public Error {
 public:
  UndefinedMetricError(std::string module, const std::string& message)
      : Error(ErrorKind::UndefinedMetric, std::move(module), message) {}
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, std::string field = {}, std::size_t line = 0)
      : Error(ErrorKind::Config, "cli_experiments", message),
        field_(std::move(field)),
        line_(line) {}
  const std::string& field() const noexcept { return field_; }
  // 1-based line of the offending token, 0 when unknown.
  std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

class IoError : public Error {
 public:
  IoError(std::string module, const std::string& message)
      : Error(ErrorKind::Io, std::move(module), message) {}
};

}  // namespace gidp
