#pragma once

#include <atomic>
#include <memory>

#include "kinv/core.hpp"
#include "kinv/meanfield.hpp"

namespace kinv {

/// Change of variables theta = r0 + U tau onto the dominant prior modes.
struct LowRankMap {
    Matrix basis;           // N_theta x N_r, orthonormal columns
    Vector singular_values; // D_0 diagonal, nonincreasing
    Vector anchor;          // r0

    Vector lift(const Vector& tau) const { return anchor + basis * tau; }
    Vector project(const Vector& theta) const { return basis.transpose() * (theta - anchor); }
    Matrix lift_cov(const Matrix& tau_cov) const {
        return basis * tau_cov * basis.transpose();
    }
};

struct LowRankProblem {
    InverseProblem problem; // over tau, prior N(0, diag(D_0))
    LowRankMap map;
};

/// Reparameterizes the problem over the leading n_r prior modes. Throws
/// RankExceededError when n_r exceeds the numerical rank of Sigma_0.
LowRankProblem lowrank_wrap(const InverseProblem& problem, Index n_r);

/// Element-wise change of variables enforcing bounds; the positive kind maps
/// through exp, the interval kind through a reversed logistic, so +inf in the
/// unconstrained variable approaches the LOWER bound.
struct BoxTransform {
    enum class Kind { Positive, Interval };

    Kind kind = Kind::Positive;
    Vector lower, upper; // interval kind only

    static BoxTransform positive();
    static BoxTransform interval(Vector lower, Vector upper);

    Vector apply(const Vector& unconstrained) const;
    Vector invert(const Vector& constrained) const;
};

/// Composes the forward map with the transform: the returned problem is posed
/// over the unconstrained variable and its prior fields are interpreted in
/// that coordinate system.
InverseProblem box_wrap(const InverseProblem& problem, const BoxTransform& transform);

/// Fidelity-routed evaluation: sigma-point consumers send the center node
/// (column 0) to the expensive model and every other node to the cheap one.
class BiFidelityProblem {
public:
    BiFidelityProblem(InverseProblem hi, InverseProblem lo);

    Vector eval(Index column, const Vector& theta) const;

    const InverseProblem& hi() const { return hi_; }
    const InverseProblem& lo() const { return lo_; }

    long hi_evals() const { return hi_count_->load(); }
    long lo_evals() const { return lo_count_->load(); }
    void reset_counts() const;

private:
    InverseProblem hi_, lo_;
    std::shared_ptr<std::atomic<long>> hi_count_, lo_count_;
};

BiFidelityProblem bifidelity_wrap(InverseProblem hi, InverseProblem lo);

/// Augmented system whose forward dispatch routes by column index.
AugmentedSystem build_augmented(const BiFidelityProblem& problem, double gamma);

} // namespace kinv
