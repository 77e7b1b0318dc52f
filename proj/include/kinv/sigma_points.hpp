#pragma once

#include "kinv/core.hpp"

namespace kinv {

enum class UkiVariant {
    Simplex,   // J = N_theta + 2 nodes from the recursive simplex frame
    Symmetric, // J = 2*N_theta + 1 symmetric nodes
};

/// Deterministic quadrature nodes for a Gaussian. Column 0 is the mean; the
/// remaining columns carry a single weight `a` such that
///   sum_j a (theta_j - m)(theta_j - m)^T = C.
/// The mean rule evaluates functions at the center node only.
struct SigmaPoints {
    Matrix points; // N_theta x J
    double weight; // a
    UkiVariant variant;

    Index size() const { return points.cols(); }
};

Index sigma_point_count(UkiVariant v, Index n_theta);

double sigma_point_weight(UkiVariant v, Index n_theta);

/// Unit-covariance spread directions (N_theta x (J-1)); scaled by the
/// Cholesky factor of C to form the actual nodes.
Matrix sigma_point_directions(UkiVariant v, Index n_theta);

SigmaPoints sigma_points_uki1(const Vector& mean, const Matrix& cov);
SigmaPoints sigma_points_uki2(const Vector& mean, const Matrix& cov);
SigmaPoints make_sigma_points(UkiVariant v, const Vector& mean, const Matrix& cov);

} // namespace kinv
