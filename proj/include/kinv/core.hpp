#pragma once

#include <cstdint>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "kinv/errors.hpp"

namespace kinv {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Seedable random stream. Every stochastic component draws from an Rng that
/// is passed in explicitly, so runs are reproducible given the seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double gauss() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

    Vector gauss_vector(Index n) {
        Vector v(n);
        for (Index i = 0; i < n; ++i) v(i) = gauss();
        return v;
    }

    Matrix gauss_matrix(Index rows, Index cols) {
        Matrix m(rows, cols);
        // column-major fill so draw order matches per-particle vectors
        for (Index j = 0; j < cols; ++j)
            for (Index i = 0; i < rows; ++i) m(i, j) = gauss();
        return m;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// First two moments of the current filtering distribution.
struct GaussianBelief {
    Vector mean;
    Matrix cov;

    Index dim() const { return mean.size(); }
};

/// Particle representation: columns are parameter vectors.
struct Ensemble {
    Matrix particles; // N_theta x J

    Index dim() const { return particles.rows(); }
    Index size() const { return particles.cols(); }
};

/// Inverse problem data: black-box forward map, observation, Gaussian noise
/// and Gaussian prior. The forward map must be safe to call concurrently.
struct InverseProblem {
    std::function<Vector(const Vector&)> forward;
    Vector y;
    Matrix noise_cov;  // Sigma_eta
    Vector prior_mean; // r_0
    Matrix prior_cov;  // Sigma_0

    Index dim() const { return prior_mean.size(); }
    Index obs_dim() const { return y.size(); }

    /// Checks that both covariances admit a Cholesky factorization.
    void validate() const;
};

/// Symmetric part of a square matrix; cheap guard against round-off drift.
inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

bool is_symmetric(const Matrix& m, double rel_tol = 1e-12);

/// Lower-triangular L with L L^T = C. If plain Cholesky fails because of
/// round-off (tiny negative eigenvalues), a single diagonal jitter of
/// 1e-12 * trace(C)/n is added before refactorizing.
Matrix spd_sqrt(const Matrix& c);

/// Column average and the 1/(J-1)-normalized empirical covariance.
std::pair<Vector, Matrix> ensemble_moments(const Ensemble& e);

Vector ensemble_mean(const Ensemble& e);

/// Centered square root: column j is (theta_j - mean)/sqrt(J-1), so that
/// Z Z^T equals the empirical covariance exactly.
Matrix ensemble_sqrt(const Ensemble& e);

/// Exact posterior of a linear-Gaussian problem:
///   mean = r0 + (G' S_eta^-1 G + S_0^-1)^-1 G' S_eta^-1 (y - G r0)
///   cov  = (G' S_eta^-1 G + S_0^-1)^-1
/// Used as the oracle for every linear convergence check.
GaussianBelief gaussian_posterior_linear(const Matrix& g, const InverseProblem& problem);

/// ||v - ref|| / ||ref||, falling back to the absolute norm for ref = 0.
double relative_error(const Vector& v, const Vector& ref);

/// Frobenius-norm analogue of relative_error.
double relative_error(const Matrix& m, const Matrix& ref);

} // namespace kinv
