#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace geolab {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// State outside the chart domain or too close to a coordinate singularity.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Metric not positive definite at the evaluation point.
class DegenerateMetricError : public Error {
 public:
  explicit DegenerateMetricError(const std::string& where)
      : Error("degenerate metric: " + where) {}
};

/// Invalid constructor or configuration parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Operation-specific precondition failed (e.g. subalgebra not in annihilator).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Failure while evaluating a function inside a derivative stencil.
class DerivativeError : public Error {
 public:
  using Error::Error;
};

/// Newton iteration of an implicit step did not converge.
class StepFailedError : public Error {
 public:
  StepFailedError(const std::string& msg, std::vector<double> history)
      : Error("step failed: " + msg), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

/// Lagrange multiplier solve in the constrained stepper failed.
class ConstraintSolveError : public Error {
 public:
  ConstraintSolveError(const std::string& msg, std::vector<double> history)
      : Error("constraint solve failed: " + msg), residual_history(std::move(history)) {}
  std::vector<double> residual_history;
};

/// Tangency computation found the wrong number of roots.
class DegenerateLineError : public Error {
 public:
  explicit DegenerateLineError(const std::string& msg) : Error("degenerate line: " + msg) {}
};

/// Pencil check called at a point where the reference bracket drops rank.
class NonGenericPointError : public Error {
 public:
  explicit NonGenericPointError(const std::string& msg) : Error("non-generic base point: " + msg) {}
};

}  // namespace geolab
