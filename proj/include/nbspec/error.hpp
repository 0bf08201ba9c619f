#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nbspec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed edge-list input. Carries the 1-based line number.
class ParseError : public Error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

class InvalidGraph : public Error {
  public:
    using Error::Error;
};

/// Unknown node, bad generator parameters, t outside the admissible range, ...
class DomainError : public Error {
  public:
    using Error::Error;
};

/// The graph does not satisfy the hypotheses of a Perron-dependent operation.
class NotApplicable : public Error {
  public:
    using Error::Error;
};

class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}

    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Two routes that must agree exactly (or to a hard tolerance) disagree.
class ConsistencyError : public Error {
  public:
    using Error::Error;
};

class NormalizationFailure : public Error {
  public:
    NormalizationFailure(const std::string& what, double re, double im)
        : Error(what + " at eigenvalue (" + std::to_string(re) + ", " + std::to_string(im) + ")"),
          re_(re), im_(im) {}

    double eigenvalue_real() const noexcept { return re_; }
    double eigenvalue_imag() const noexcept { return im_; }

  private:
    double re_;
    double im_;
};

class BudgetExceeded : public Error {
  public:
    using Error::Error;
};

}  // namespace nbspec
