#pragma once

#include <Eigen/Cholesky>

#include "kinv/core.hpp"

namespace kinv {

/// Kalman gain K = Cxy * Cyy^-1 via a symmetric solve. Throws
/// SingularInnovationError when Cyy cannot be factorized.
Matrix kalman_gain(const Matrix& cxy, const Matrix& cyy);

/// Pre-multiplier of the adjustment update, built from the compact SVD of the
/// state square root Zhat and the whitened observation square root. Applying
/// it to the centered particles reproduces the Kalman covariance exactly:
///   A Zhat Zhat^T A^T = Zhat (I + Yhat^T S^-1 Yhat)^-1 Zhat^T.
/// Throws RankDeficientError when Zhat has rank zero.
Matrix adjustment_multiplier(const Matrix& zhat, const Matrix& yhat,
                             const Eigen::LLT<Matrix>& noise);

/// Post-multiplier of the transform update, from the J x J eigendecomposition
///   Yhat^T S^-1 Yhat = P Gamma P^T,  T = P (Gamma + I)^-1/2 P^T,
/// so that (Zhat T)(Zhat T)^T equals the Kalman covariance.
Matrix transform_multiplier(const Matrix& yhat, const Eigen::LLT<Matrix>& noise);

} // namespace kinv
