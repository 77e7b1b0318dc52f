#pragma once

#include <Eigen/Cholesky>

#include "kinv/core.hpp"
#include "kinv/evaluate.hpp"

namespace kinv {

/// Filtering system built around the stacked map F(theta) = [G(theta); theta]
/// observed against the stacked datum x = [y; r0]. The observation noise
/// covariance is ((gamma+1)/gamma) * blockdiag(Sigma_eta, Sigma_0); the
/// evolution covariance is state dependent (gamma * C_n) and enters through
/// the inflation helpers below rather than being stored here.
struct AugmentedSystem {
    double gamma = 1.0;
    Index n_theta = 0;
    Index n_obs = 0;

    Vector x;         // [y; r0]
    Matrix sigma_nu;  // ((gamma+1)/gamma) * blockdiag(Sigma_eta, Sigma_0)

    // copies of the problem pieces needed for diagnostics and initialization
    Vector y;
    Vector prior_mean;
    Matrix prior_cov;
    Matrix noise_cov;

    IndexedMap forward; // G, possibly routed by column index

    Eigen::LLT<Matrix> sigma_nu_llt;   // noise draws and whitening
    Eigen::LLT<Matrix> noise_cov_llt;  // misfit term of the optimization error
    Eigen::LLT<Matrix> prior_cov_llt;  // regularization term

    Index aug_dim() const { return n_obs + n_theta; }

    /// F(theta) = [G(theta); theta] for a single parameter vector.
    Vector augmented_map(const Vector& theta) const;

    /// F applied to every column; the trailing identity block is appended
    /// after the G fan-out so only G evaluations cost anything.
    Matrix evaluate(const Matrix& thetas, int jobs) const;

    /// 0.5*||S_eta^-1/2 (y - g_pred)||^2 + 0.5*||S_0^-1/2 (mean - r0)||^2
    double optimization_error(const Vector& g_pred, const Vector& mean) const;
};

/// Assembles the augmented system for one problem. Throws InvalidGammaError
/// for gamma <= 0.
AugmentedSystem build_augmented(const InverseProblem& problem, double gamma);

/// Prediction step on moments: mean unchanged, covariance scaled by gamma+1.
GaussianBelief inflate(const GaussianBelief& belief, double gamma);

/// Prediction step on particles: spread about the empirical mean scaled by
/// sqrt(gamma+1). Deterministic; preserves the mean and the affine span.
Ensemble inflate_ensemble(const Ensemble& e, double gamma);

} // namespace kinv
