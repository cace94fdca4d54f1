#pragma once

#include <stdexcept>
#include <string>

namespace qdelta {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (bad q, k = 0, ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A complex power was requested on the closed negative real axis.
class BranchCutError : public Error {
  public:
    using Error::Error;
};

/// Adaptive quadrature exhausted its subdivision budget.
class QuadratureFailure : public Error {
  public:
    QuadratureFailure(const std::string& what, double partial_value, double error_estimate)
        : Error(what), partial_value_(partial_value), error_estimate_(error_estimate) {}

    double partial_value() const noexcept { return partial_value_; }
    double error_estimate() const noexcept { return error_estimate_; }

  private:
    double partial_value_;
    double error_estimate_;
};

class NonFiniteIntegrand : public Error {
  public:
    NonFiniteIntegrand(const std::string& what, double where) : Error(what), where_(where) {}
    double where() const noexcept { return where_; }

  private:
    double where_;
};

/// The integrand does not decay fast enough for the half-line to converge.
class TailDivergence : public Error {
  public:
    using Error::Error;
};

/// Normalization/moment projection of a perturbed density did not converge.
class ProjectionFailure : public Error {
  public:
    using Error::Error;
};

/// dβ/β mixing requested for a density that is not integrable against 1/β at 0.
class SingularOrigin : public Error {
  public:
    using Error::Error;
};

}  // namespace qdelta
