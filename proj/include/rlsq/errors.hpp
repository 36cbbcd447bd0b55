#pragma once

#include <stdexcept>
#include <string>

namespace rlsq {

/// Base class for all rlsq errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dimension mismatch between operands.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Rejected argument (zeta > s, kappa < 1, ...).
class InvalidParameterError : public Error {
public:
    using Error::Error;
};

/// A factorization found the matrix numerically rank deficient.
class RankDeficiencyError : public Error {
public:
    using Error::Error;
};

/// Triangular solve with a zero diagonal entry.
class SingularTriangularError : public Error {
public:
    using Error::Error;
};

/// SVD iteration did not converge within the sweep cap.
class SvdConvergenceError : public Error {
public:
    using Error::Error;
};

/// Malformed input file; message carries the offending line number.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Metric undefined for the given arguments (zero reference solution, ...).
class MetricError : public Error {
public:
    using Error::Error;
};

/// File could not be opened or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace rlsq
