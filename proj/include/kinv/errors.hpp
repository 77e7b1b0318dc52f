#pragma once

#include <stdexcept>
#include <string>

namespace kinv {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A matrix expected to be symmetric positive definite failed factorization.
struct NotSpdError : Error {
    using Error::Error;
};

/// An ensemble with fewer than two particles cannot supply empirical moments.
struct DegenerateEnsembleError : Error {
    using Error::Error;
};

/// The posterior precision matrix is numerically singular.
struct SingularPrecisionError : Error {
    using Error::Error;
};

/// The step parameter of the filtering system must be positive.
struct InvalidGammaError : Error {
    using Error::Error;
};

/// The innovation covariance could not be inverted.
struct SingularInnovationError : Error {
    using Error::Error;
};

/// A square-root update or moment correction needs more independent directions
/// than the ensemble carries.
struct RankDeficientError : Error {
    using Error::Error;
};

/// MCMC proposal scale outside its admissible range.
struct InvalidStepError : Error {
    using Error::Error;
};

/// Two problem definitions disagree on parameter or observation dimensions.
struct ShapeMismatchError : Error {
    using Error::Error;
};

/// Requested subspace rank exceeds the numerical rank of the prior covariance.
struct RankExceededError : Error {
    using Error::Error;
};

/// The discrete forward solve did not complete.
struct SolverFailureError : Error {
    using Error::Error;
};

/// Run artifacts being merged refer to different problems.
struct MismatchedProblemError : Error {
    using Error::Error;
};

} // namespace kinv
