#pragma once

#include "kinv/core.hpp"

namespace kinv {

struct ChainConfig {
    long n_samples = 100000; // total chain length, burn-in included
    long burn_in = 10000;
    double step_size = 1.0; // RWM proposal scale, or pCN beta
    std::uint64_t seed = 0;
};

struct ChainSummary {
    Vector mean;
    Matrix cov;
    double acceptance_rate = 0.0;
    long kept = 0;
};

/// Streaming mean/covariance so multi-million-sample chains never get stored.
class MomentAccumulator {
public:
    explicit MomentAccumulator(Index dim)
        : n_(0), mean_(Vector::Zero(dim)), comoment_(Matrix::Zero(dim, dim)) {}

    void add(const Vector& x) {
        n_ += 1;
        const Vector delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        comoment_ += delta * (x - mean_).transpose();
    }

    long count() const { return n_; }
    const Vector& mean() const { return mean_; }
    Matrix covariance() const {
        if (n_ < 2) throw DegenerateEnsembleError("need at least 2 samples for a covariance");
        return symmetrize(comoment_ / static_cast<double>(n_ - 1));
    }

private:
    long n_;
    Vector mean_;
    Matrix comoment_;
};

/// Random-walk Metropolis targeting the regularized posterior density
/// exp(-Phi_R) with isotropic proposal theta' = theta + step * xi.
ChainSummary rwm_sample(const InverseProblem& problem, const ChainConfig& config);

/// Preconditioned Crank-Nicolson: the prior-reversible proposal
/// theta' = r0 + sqrt(1-beta^2) (theta - r0) + beta xi, xi ~ N(0, Sigma_0),
/// accepted on the data misfit alone. Requires beta in (0, 1).
ChainSummary pcn_sample(const InverseProblem& problem, const ChainConfig& config);

} // namespace kinv
