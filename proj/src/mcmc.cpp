#include "kinv/mcmc.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace kinv {

namespace {

void check_chain(const ChainConfig& config) {
    if (config.n_samples < 1) throw Error("chain length must be positive");
    if (config.burn_in < 0 || config.burn_in >= config.n_samples)
        throw Error("burn-in must be nonnegative and shorter than the chain");
}

struct Misfits {
    Eigen::LLT<Matrix> noise;
    Eigen::LLT<Matrix> prior;

    explicit Misfits(const InverseProblem& p) : noise(p.noise_cov), prior(p.prior_cov) {
        if (noise.info() != Eigen::Success || prior.info() != Eigen::Success)
            throw NotSpdError("problem covariances are not positive definite");
    }

    double data(const InverseProblem& p, const Vector& theta) const {
        const Vector r = noise.matrixL().solve(p.y - p.forward(theta));
        return 0.5 * r.squaredNorm();
    }

    double regularization(const InverseProblem& p, const Vector& theta) const {
        const Vector r = prior.matrixL().solve(theta - p.prior_mean);
        return 0.5 * r.squaredNorm();
    }
};

} // namespace

ChainSummary rwm_sample(const InverseProblem& problem, const ChainConfig& config) {
    check_chain(config);
    if (!(config.step_size > 0.0)) throw InvalidStepError("RWM step size must be positive");

    Rng rng(config.seed);
    const Misfits misfits(problem);
    MomentAccumulator acc(problem.dim());

    Vector theta = problem.prior_mean;
    double phi = misfits.data(problem, theta) + misfits.regularization(problem, theta);

    long accepted = 0;
    for (long i = 0; i < config.n_samples; ++i) {
        const Vector proposal = theta + config.step_size * rng.gauss_vector(problem.dim());
        const double phi_prop =
            misfits.data(problem, proposal) + misfits.regularization(problem, proposal);
        if (std::log(rng.uniform()) < phi - phi_prop) {
            theta = proposal;
            phi = phi_prop;
            accepted += 1;
        }
        if (i >= config.burn_in) acc.add(theta);
    }

    return {acc.mean(), acc.covariance(),
            static_cast<double>(accepted) / static_cast<double>(config.n_samples), acc.count()};
}

ChainSummary pcn_sample(const InverseProblem& problem, const ChainConfig& config) {
    check_chain(config);
    const double beta = config.step_size;
    if (!(beta > 0.0 && beta < 1.0)) throw InvalidStepError("pCN step must lie in (0, 1)");

    Rng rng(config.seed);
    const Misfits misfits(problem);
    MomentAccumulator acc(problem.dim());
    const double contraction = std::sqrt(1.0 - beta * beta);

    Vector theta = problem.prior_mean;
    double phi = misfits.data(problem, theta); // prior-reversible: misfit only

    long accepted = 0;
    for (long i = 0; i < config.n_samples; ++i) {
        const Vector xi = misfits.prior.matrixL() * rng.gauss_vector(problem.dim());
        const Vector proposal =
            problem.prior_mean + contraction * (theta - problem.prior_mean) + beta * xi;
        const double phi_prop = misfits.data(problem, proposal);
        if (std::log(rng.uniform()) < phi - phi_prop) {
            theta = proposal;
            phi = phi_prop;
            accepted += 1;
        }
        if (i >= config.burn_in) acc.add(theta);
    }

    return {acc.mean(), acc.covariance(),
            static_cast<double>(accepted) / static_cast<double>(config.n_samples), acc.count()};
}

} // namespace kinv
