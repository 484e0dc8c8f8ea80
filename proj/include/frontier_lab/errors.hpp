#pragma once

#include <stdexcept>
#include <string>

namespace frontier_lab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- input / data errors ---------------------------------------------------

/// Malformed row or non-numeric cell in a returns stream.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Dimension mismatch: ragged CSV rows, inconsistent vector/matrix shapes.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Fewer than n+1 observations for n assets.
class InsufficientData : public Error {
public:
    using Error::Error;
};

/// Covariance matrix failed the symmetry tolerance.
class AsymmetricCovariance : public Error {
public:
    using Error::Error;
};

/// Covariance matrix is not positive definite (Cholesky pivot underflow).
class SingularCovariance : public Error {
public:
    using Error::Error;
};

/// An estimated or supplied expected return is <= 0.
class NonPositiveReturn : public Error {
public:
    using Error::Error;
};

/// A scalar argument is NaN or infinite.
class NonFinite : public Error {
public:
    using Error::Error;
};

// --- optimization errors ----------------------------------------------------

/// The expected-return vector is proportional to ones: D ~ 0 and the two
/// portfolio constraints are not independent.
class DegenerateUniverse : public Error {
public:
    using Error::Error;
};

/// Requested risk lies below the minimum feasible risk of the frontier.
class InfeasibleRisk : public Error {
public:
    using Error::Error;
};

/// Weight rescaling requested for a zero-budget portfolio.
class CriticalBudget : public Error {
public:
    using Error::Error;
};

/// The KKT matrix is singular (degenerate constraint set).
class SingularKkt : public Error {
public:
    using Error::Error;
};

// --- output errors -----------------------------------------------------------

/// Plot data spans an empty range (all points identical).
class DegenerateRange : public Error {
public:
    using Error::Error;
};

/// Filesystem write failure.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace frontier_lab
