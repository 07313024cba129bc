#pragma once

#include <stdexcept>
#include <string>

namespace saddle {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Operation precondition on series data was violated (bad constant term,
/// singular linear part, truncation too low, ...).
class SeriesError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation or expansion hit a singularity (log/sqrt of 0, division by 0).
class SingularPoint : public Error {
public:
    SingularPoint(const std::string& msg, std::string subexpression)
        : Error(msg + ": " + subexpression), subexpression_(std::move(subexpression)) {}
    const std::string& subexpression() const noexcept { return subexpression_; }

private:
    std::string subexpression_;
};

class DegenerateHessian : public Error {
public:
    using Error::Error;
};

/// Principal square roots are undefined (eigenvalue on the closed negative
/// real axis) or the phase fails the Re φ ≥ 0 spot check.
class InadmissiblePhase : public Error {
public:
    using Error::Error;
};

class NoStationaryPoints : public Error {
public:
    NoStationaryPoints(const std::string& msg, double best_residual)
        : Error(msg), best_residual_(best_residual) {}
    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

/// Geometry the expansion does not cover (corner points, off-domain seeds).
class UnsupportedGeometry : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// Problem data violates a stated precondition (v1(1) != 1, bad domain, ...).
class InvalidProblem : public Error {
public:
    using Error::Error;
};

/// Direction κ lies on or outside the interval spanned by v1'(1), v2'(1).
class BoundaryDirection : public Error {
public:
    using Error::Error;
};

}  // namespace saddle
