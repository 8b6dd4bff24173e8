#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace jlt {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// Invalid input: malformed config, broken invariant, mismatched spec.
class UsageError : public Error {
  public:
    using Error::Error;
    const char* kind() const noexcept override { return "usage"; }
};

/// Evaluation point outside the domain of a function (e.g. z on the spectrum).
class DomainError : public Error {
  public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

/// Touching bands, |Δ(z)| = 2 exactly, and similar degenerate configurations.
class DegeneracyError : public Error {
  public:
    using Error::Error;
    const char* kind() const noexcept override { return "degeneracy"; }
};

/// An iterative method failed to converge.
class NumericError : public Error {
  public:
    NumericError(const std::string& what, double previous = 0.0, double last = 0.0)
        : Error(what), previous_(previous), last_(last) {}
    const char* kind() const noexcept override { return "numeric"; }

    /// Last two estimates produced before giving up (quadrature only).
    double previous_estimate() const noexcept { return previous_; }
    double last_estimate() const noexcept { return last_; }

  private:
    double previous_;
    double last_;
};

/// Argument tracking along a contour failed; carries the offending box.
class ContourError : public Error {
  public:
    ContourError(const std::string& what, std::complex<double> lo, std::complex<double> hi)
        : Error(what), lo_(lo), hi_(hi) {}
    const char* kind() const noexcept override { return "contour"; }

    std::complex<double> lo() const noexcept { return lo_; }
    std::complex<double> hi() const noexcept { return hi_; }

  private:
    std::complex<double> lo_;
    std::complex<double> hi_;
};

}  // namespace jlt
