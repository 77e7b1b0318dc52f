#include "kinv/meanfield.hpp"

namespace kinv {

Vector AugmentedSystem::augmented_map(const Vector& theta) const {
    Vector out(aug_dim());
    out.head(n_obs) = forward(0, theta);
    out.tail(n_theta) = theta;
    return out;
}

Matrix AugmentedSystem::evaluate(const Matrix& thetas, int jobs) const {
    Matrix out(aug_dim(), thetas.cols());
    out.topRows(n_obs) = evaluate_columns(forward, thetas, n_obs, jobs);
    out.bottomRows(n_theta) = thetas;
    return out;
}

double AugmentedSystem::optimization_error(const Vector& g_pred, const Vector& mean) const {
    const Vector misfit = noise_cov_llt.matrixL().solve(y - g_pred);
    const Vector reg = prior_cov_llt.matrixL().solve(mean - prior_mean);
    return 0.5 * misfit.squaredNorm() + 0.5 * reg.squaredNorm();
}

AugmentedSystem build_augmented(const InverseProblem& problem, double gamma) {
    if (!(gamma > 0.0)) throw InvalidGammaError("gamma must be positive");

    AugmentedSystem sys;
    sys.gamma = gamma;
    sys.n_theta = problem.dim();
    sys.n_obs = problem.obs_dim();

    sys.x.resize(sys.aug_dim());
    sys.x.head(sys.n_obs) = problem.y;
    sys.x.tail(sys.n_theta) = problem.prior_mean;

    const double factor = (gamma + 1.0) / gamma;
    sys.sigma_nu = Matrix::Zero(sys.aug_dim(), sys.aug_dim());
    sys.sigma_nu.topLeftCorner(sys.n_obs, sys.n_obs) = factor * problem.noise_cov;
    sys.sigma_nu.bottomRightCorner(sys.n_theta, sys.n_theta) = factor * problem.prior_cov;

    sys.y = problem.y;
    sys.prior_mean = problem.prior_mean;
    sys.prior_cov = problem.prior_cov;
    sys.noise_cov = problem.noise_cov;

    auto g = problem.forward;
    sys.forward = [g](Index, const Vector& theta) { return g(theta); };

    sys.sigma_nu_llt.compute(sys.sigma_nu);
    sys.noise_cov_llt.compute(problem.noise_cov);
    sys.prior_cov_llt.compute(problem.prior_cov);
    if (sys.sigma_nu_llt.info() != Eigen::Success ||
        sys.noise_cov_llt.info() != Eigen::Success ||
        sys.prior_cov_llt.info() != Eigen::Success)
        throw NotSpdError("problem covariances are not positive definite");

    return sys;
}

GaussianBelief inflate(const GaussianBelief& belief, double gamma) {
    return {belief.mean, (gamma + 1.0) * belief.cov};
}

Ensemble inflate_ensemble(const Ensemble& e, double gamma) {
    const Vector mean = ensemble_mean(e);
    const double scale = std::sqrt(gamma + 1.0);
    Ensemble out;
    out.particles = (scale * (e.particles.colwise() - mean)).colwise() + mean;
    return out;
}

} // namespace kinv
