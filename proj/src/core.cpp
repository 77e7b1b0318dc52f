#include "kinv/core.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace kinv {

void InverseProblem::validate() const {
    if (noise_cov.rows() != obs_dim() || noise_cov.cols() != obs_dim())
        throw ShapeMismatchError("noise covariance does not match observation length");
    if (prior_cov.rows() != dim() || prior_cov.cols() != dim())
        throw ShapeMismatchError("prior covariance does not match parameter length");
    spd_sqrt(noise_cov);
    spd_sqrt(prior_cov);
}

bool is_symmetric(const Matrix& m, double rel_tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1.0);
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

Matrix spd_sqrt(const Matrix& c) {
    if (c.rows() != c.cols()) throw NotSpdError("matrix is not square");
    if (!is_symmetric(c)) throw NotSpdError("matrix is not symmetric");

    Eigen::LLT<Matrix> llt(c);
    if (llt.info() == Eigen::Success) return llt.matrixL();

    const Index n = c.rows();
    const double jitter = 1e-12 * c.trace() / static_cast<double>(n);
    Matrix jittered = c;
    jittered.diagonal().array() += jitter;
    llt.compute(jittered);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    throw NotSpdError("Cholesky factorization failed even after diagonal jitter");
}

std::pair<Vector, Matrix> ensemble_moments(const Ensemble& e) {
    const Vector mean = ensemble_mean(e);
    const Matrix z = ensemble_sqrt(e);
    return {mean, z * z.transpose()};
}

Vector ensemble_mean(const Ensemble& e) {
    if (e.size() < 2) throw DegenerateEnsembleError("ensemble needs at least 2 particles");
    return e.particles.rowwise().mean();
}

Matrix ensemble_sqrt(const Ensemble& e) {
    const Vector mean = ensemble_mean(e);
    const double scale = 1.0 / std::sqrt(static_cast<double>(e.size() - 1));
    return (e.particles.colwise() - mean) * scale;
}

GaussianBelief gaussian_posterior_linear(const Matrix& g, const InverseProblem& problem) {
    if (g.rows() != problem.obs_dim() || g.cols() != problem.dim())
        throw ShapeMismatchError("forward matrix shape does not match the problem");

    const Eigen::LLT<Matrix> noise(problem.noise_cov);
    const Eigen::LLT<Matrix> prior(problem.prior_cov);
    if (noise.info() != Eigen::Success || prior.info() != Eigen::Success)
        throw NotSpdError("problem covariances are not positive definite");

    const Matrix precision = symmetrize(g.transpose() * noise.solve(g) +
                                        prior.solve(Matrix::Identity(problem.dim(), problem.dim())));

    Eigen::SelfAdjointEigenSolver<Matrix> eig(precision);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    if (lmin <= 0.0 || lmax / lmin > 1e14)
        throw SingularPrecisionError("posterior precision is numerically singular");

    const Eigen::LLT<Matrix> prec(precision);
    const Vector residual = problem.y - g * problem.prior_mean;
    GaussianBelief post;
    post.mean = problem.prior_mean + prec.solve(g.transpose() * noise.solve(residual));
    post.cov = symmetrize(prec.solve(Matrix::Identity(problem.dim(), problem.dim())));
    return post;
}

double relative_error(const Vector& v, const Vector& ref) {
    const double denom = ref.norm();
    if (denom == 0.0) return v.norm();
    return (v - ref).norm() / denom;
}

double relative_error(const Matrix& m, const Matrix& ref) {
    const double denom = ref.norm();
    if (denom == 0.0) return m.norm();
    return (m - ref).norm() / denom;
}

} // namespace kinv
