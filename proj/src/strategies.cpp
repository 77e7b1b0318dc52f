#include "kinv/strategies.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace kinv {

LowRankProblem lowrank_wrap(const InverseProblem& problem, Index n_r) {
    const Index n = problem.dim();
    if (n_r < 1 || n_r > n) throw RankExceededError("requested rank outside [1, N_theta]");

    Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrize(problem.prior_cov));
    // reorder to nonincreasing spectrum
    const Vector values = eig.eigenvalues().reverse();
    Matrix vectors = eig.eigenvectors().rowwise().reverse();

    Index numerical_rank = 0;
    for (Index i = 0; i < n; ++i)
        if (values(i) > 1e-12 * values(0)) ++numerical_rank;
    if (n_r > numerical_rank)
        throw RankExceededError("requested rank exceeds the numerical rank of the prior");

    LowRankMap map;
    map.basis = vectors.leftCols(n_r);
    map.singular_values = values.head(n_r);
    map.anchor = problem.prior_mean;

    LowRankProblem wrapped;
    wrapped.map = map;
    wrapped.problem.y = problem.y;
    wrapped.problem.noise_cov = problem.noise_cov;
    wrapped.problem.prior_mean = Vector::Zero(n_r);
    wrapped.problem.prior_cov = map.singular_values.asDiagonal();
    auto forward = problem.forward;
    wrapped.problem.forward = [forward, map](const Vector& tau) { return forward(map.lift(tau)); };
    return wrapped;
}

BoxTransform BoxTransform::positive() {
    BoxTransform t;
    t.kind = Kind::Positive;
    return t;
}

BoxTransform BoxTransform::interval(Vector lower, Vector upper) {
    if (lower.size() != upper.size() || ((upper - lower).array() <= 0.0).any())
        throw Error("interval bounds must satisfy lower < upper coordinate-wise");
    BoxTransform t;
    t.kind = Kind::Interval;
    t.lower = std::move(lower);
    t.upper = std::move(upper);
    return t;
}

Vector BoxTransform::apply(const Vector& unconstrained) const {
    if (kind == Kind::Positive) return unconstrained.array().exp();
    return lower.array() +
           (upper - lower).array() / (1.0 + unconstrained.array().exp());
}

Vector BoxTransform::invert(const Vector& constrained) const {
    if (kind == Kind::Positive) return constrained.array().log();
    return ((upper - constrained).array() / (constrained - lower).array()).log();
}

InverseProblem box_wrap(const InverseProblem& problem, const BoxTransform& transform) {
    InverseProblem wrapped = problem;
    auto forward = problem.forward;
    wrapped.forward = [forward, transform](const Vector& unconstrained) {
        return forward(transform.apply(unconstrained));
    };
    return wrapped;
}

BiFidelityProblem::BiFidelityProblem(InverseProblem hi, InverseProblem lo)
    : hi_(std::move(hi)), lo_(std::move(lo)),
      hi_count_(std::make_shared<std::atomic<long>>(0)),
      lo_count_(std::make_shared<std::atomic<long>>(0)) {
    if (hi_.dim() != lo_.dim() || hi_.obs_dim() != lo_.obs_dim())
        throw ShapeMismatchError("fidelity levels disagree on problem dimensions");
}

Vector BiFidelityProblem::eval(Index column, const Vector& theta) const {
    if (column == 0) {
        hi_count_->fetch_add(1, std::memory_order_relaxed);
        return hi_.forward(theta);
    }
    lo_count_->fetch_add(1, std::memory_order_relaxed);
    return lo_.forward(theta);
}

void BiFidelityProblem::reset_counts() const {
    hi_count_->store(0);
    lo_count_->store(0);
}

BiFidelityProblem bifidelity_wrap(InverseProblem hi, InverseProblem lo) {
    return {std::move(hi), std::move(lo)};
}

AugmentedSystem build_augmented(const BiFidelityProblem& problem, double gamma) {
    AugmentedSystem sys = build_augmented(problem.hi(), gamma);
    const BiFidelityProblem dispatch = problem; // shares the counters
    sys.forward = [dispatch](Index column, const Vector& theta) {
        return dispatch.eval(column, theta);
    };
    return sys;
}

} // namespace kinv
