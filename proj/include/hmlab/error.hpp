#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmlab {

/// Broad failure class, used by the CLI to pick an exit code.
enum class ErrorClass { input, numerical, range };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), class_(cls) {}
  ErrorClass error_class() const noexcept { return class_; }

 private:
  ErrorClass class_;
};

// Input and contract violations.

class InvalidField : public Error {
 public:
  explicit InvalidField(const std::string& what) : Error(ErrorClass::input, "invalid field: " + what) {}
};

class UnsupportedDomain : public Error {
 public:
  explicit UnsupportedDomain(const std::string& what)
      : Error(ErrorClass::input, "unsupported domain: " + what) {}
};

class InvalidMetric : public Error {
 public:
  explicit InvalidMetric(const std::string& what) : Error(ErrorClass::input, "invalid metric: " + what) {}
};

/// Boundary data that the metric cannot evaluate.
class InvalidMetricRange : public InvalidMetric {
 public:
  explicit InvalidMetricRange(const std::string& what) : InvalidMetric(what) {}
};

class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(ErrorClass::input, "invalid input: " + what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorClass::input, "config: " + what) {}
};

// Numerical failures.

class LinearSolverFailure : public Error {
 public:
  LinearSolverFailure(double final_residual, std::size_t sweeps)
      : Error(ErrorClass::numerical, "linear solver did not converge after " + std::to_string(sweeps) +
                                         " sweeps (relative residual " + std::to_string(final_residual) + ")"),
        final_residual(final_residual),
        sweeps(sweeps) {}
  double final_residual;
  std::size_t sweeps;
};

class Stagnation : public Error {
 public:
  Stagnation(const std::string& what, std::vector<double> history)
      : Error(ErrorClass::numerical, "stagnation: " + what), history(std::move(history)) {}
  std::vector<double> history;
};

class InsufficientSupport : public Error {
 public:
  explicit InsufficientSupport(const std::string& what)
      : Error(ErrorClass::numerical, "insufficient support: " + what) {}
};

class DegenerateCircle : public Error {
 public:
  explicit DegenerateCircle(const std::string& what) : Error(ErrorClass::numerical, "degenerate circle: " + what) {}
};

class UnresolvedWinding : public Error {
 public:
  explicit UnresolvedWinding(const std::string& what)
      : Error(ErrorClass::numerical, "unresolved winding: " + what) {}
};

class DiskUnresolved : public Error {
 public:
  explicit DiskUnresolved(const std::string& what) : Error(ErrorClass::numerical, "disk unresolved: " + what) {}
};

// Metric domain / iterate range.

class DomainError : public Error {
 public:
  DomainError(const std::string& what, std::complex<double> w)
      : Error(ErrorClass::range, "outside metric domain: " + what), point(w) {}
  std::complex<double> point;
};

class RangeViolation : public Error {
 public:
  RangeViolation(const std::string& what, std::size_t node, std::complex<double> value)
      : Error(ErrorClass::range, "range violation at node " + std::to_string(node) + ": " + what),
        node(node),
        value(value) {}
  std::size_t node;
  std::complex<double> value;
};

}  // namespace hmlab
