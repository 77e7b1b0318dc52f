#include "kinv/transport.hpp"

#include <chrono>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "kinv/evaluate.hpp"
#include "kinv/square_root.hpp"

namespace kinv {

const char* transport_name(TransportVariant v) {
    switch (v) {
    case TransportVariant::Iukf1: return "iukf1";
    case TransportVariant::Iukf2: return "iukf2";
    case TransportVariant::Ienkf: return "ienkf";
    case TransportVariant::Ieakf: return "ieakf";
    case TransportVariant::Ietkf: return "ietkf";
    }
    return "?";
}

bool transport_uses_ensemble(TransportVariant v) {
    return v != TransportVariant::Iukf1 && v != TransportVariant::Iukf2;
}

Ensemble gaussian_init_correction(const Ensemble& samples, const GaussianBelief& target) {
    const Index n = samples.dim();
    const Index j = samples.size();
    if (j < n + 1)
        throw RankDeficientError("moment correction needs at least N_theta + 1 particles");

    // rows of the centered sample matrix are particles, so row sums stay zero
    // under any right multiplication and the mean shift below is exact
    const Vector sample_mean = ensemble_mean(samples);
    const Matrix centered = (samples.particles.colwise() - sample_mean).transpose(); // J x n

    Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector s1 = svd.singularValues();
    if (s1(s1.size() - 1) <= 1e-12 * s1(0))
        throw RankDeficientError("centered samples do not span the parameter space");

    Eigen::SelfAdjointEigenSolver<Matrix> eig(
        symmetrize(static_cast<double>(j - 1) * target.cov));
    const Vector s2 = eig.eigenvalues().cwiseMax(0.0);
    const Matrix u2 = eig.eigenvectors();

    const Matrix x = svd.matrixV() * s1.cwiseInverse().asDiagonal() *
                     s2.cwiseSqrt().asDiagonal() * u2.transpose();

    Ensemble corrected;
    corrected.particles = (centered * x).transpose().colwise() + target.mean;
    return corrected;
}

namespace {

struct Analysis {
    Vector mean;       // updated mean
    Vector y_pred;     // predicted observation
    Matrix cxy, cyy;   // cross and innovation covariances
};

} // namespace

StepInfo transport_step(MethodState& state, const InverseProblem& problem, double dt,
                        TransportVariant variant, Rng* rng, int jobs) {
    if (!(dt > 0.0 && dt <= 1.0)) throw Error("dt must lie in (0, 1]");

    const Matrix scaled_noise = problem.noise_cov / dt;
    const IndexedMap g = [&problem](Index, const Vector& theta) { return problem.forward(theta); };

    if (!transport_uses_ensemble(variant)) {
        const UkiVariant uv =
            variant == TransportVariant::Iukf1 ? UkiVariant::Simplex : UkiVariant::Symmetric;
        // no inflation: quadrature nodes come straight from the current belief
        const SigmaPoints sp = make_sigma_points(uv, state.belief.mean, state.belief.cov);
        const Index j = sp.size();
        const Matrix values = evaluate_columns(g, sp.points, problem.obs_dim(), jobs);
        const Vector y_pred = values.col(0);

        const Matrix dtheta = sp.points.rightCols(j - 1).colwise() - state.belief.mean;
        const Matrix dvalue = values.rightCols(j - 1).colwise() - y_pred;
        const Matrix cxy = sp.weight * dtheta * dvalue.transpose();
        const Matrix cyy = sp.weight * dvalue * dvalue.transpose() + scaled_noise;

        const Matrix gain = kalman_gain(cxy, cyy);
        state.belief.mean += gain * (problem.y - y_pred);
        state.belief.cov = symmetrize(state.belief.cov - gain * cxy.transpose());
        state.iteration += 1;
        return {y_pred, j};
    }

    const Index j = state.ensemble.size();
    if (j < 2) throw DegenerateEnsembleError("transport update needs at least 2 particles");

    const Matrix values = evaluate_columns(g, state.ensemble.particles, problem.obs_dim(), jobs);
    const Vector m = ensemble_mean(state.ensemble);
    const Vector y_mean = values.rowwise().mean();

    const double root = std::sqrt(static_cast<double>(j - 1));
    const Matrix zhat = (state.ensemble.particles.colwise() - m) / root;
    const Matrix yhat = (values.colwise() - y_mean) / root;
    const Matrix cxy = zhat * yhat.transpose();
    const Matrix cyy = yhat * yhat.transpose() + scaled_noise;

    Eigen::LLT<Matrix> noise_llt(scaled_noise);
    if (noise_llt.info() != Eigen::Success)
        throw NotSpdError("scaled observation noise is not positive definite");

    if (variant == TransportVariant::Ienkf) {
        if (!rng) throw Error("stochastic transport variant needs an rng");
        const Matrix noise = noise_llt.matrixL() * rng->gauss_matrix(problem.obs_dim(), j);
        const Matrix gain = kalman_gain(cxy, cyy);
        const Matrix innovations = ((-values - noise).colwise() + problem.y);
        state.ensemble.particles += gain * innovations;
    } else {
        const Vector mean = m + kalman_gain(cxy, cyy) * (problem.y - y_mean);
        if (variant == TransportVariant::Ieakf) {
            const Matrix a = adjustment_multiplier(zhat, yhat, noise_llt);
            state.ensemble.particles =
                (a * (state.ensemble.particles.colwise() - m)).colwise() + mean;
        } else {
            const Matrix t = transform_multiplier(yhat, noise_llt);
            state.ensemble.particles = ((zhat * t) * root).colwise() + mean;
        }
    }

    auto [mean, cov] = ensemble_moments(state.ensemble);
    state.belief = {std::move(mean), std::move(cov)};
    state.iteration += 1;
    return {y_mean, j};
}

MethodState run_transport(TransportVariant variant, const InverseProblem& problem,
                          const TransportConfig& config, const GaussianBelief* reference) {
    if (config.steps < 1) throw Error("transport needs at least one step");

    Rng rng(config.seed);

    // starting moments; a nonzero perturbation shifts the mean by p prior
    // standard deviations per coordinate and scales the covariance by 1 + p
    GaussianBelief start{problem.prior_mean, problem.prior_cov};
    if (config.init_perturbation != 0.0) {
        const double p = config.init_perturbation;
        start.mean += p * problem.prior_cov.diagonal().cwiseSqrt();
        start.cov *= (1.0 + p);
    }

    MethodState state;
    state.method = transport_uses_ensemble(variant) ? Method::Eki : Method::Uki2;
    if (transport_uses_ensemble(variant)) {
        if (config.ensemble_size < 2)
            throw DegenerateEnsembleError("particle variants need at least 2 particles");
        const Matrix draws = rng.gauss_matrix(problem.dim(), config.ensemble_size);
        state.ensemble.particles =
            (spd_sqrt(start.cov) * draws).colwise() + start.mean;
        if (config.exact_init)
            state.ensemble = gaussian_init_correction(state.ensemble, start);
        auto [mean, cov] = ensemble_moments(state.ensemble);
        state.belief = {std::move(mean), std::move(cov)};
    } else {
        state.belief = start;
    }

    Eigen::LLT<Matrix> noise_llt(problem.noise_cov);
    Eigen::LLT<Matrix> prior_llt(problem.prior_cov);

    using clock = std::chrono::steady_clock;
    const double initial_norm = std::max(1.0, state.belief.mean.norm());
    for (int n = 0; n < config.steps; ++n) {
        const auto t0 = clock::now();
        const StepInfo info =
            transport_step(state, problem, config.dt(), variant, &rng, config.jobs);
        const auto t1 = clock::now();

        IterationRecord rec;
        rec.iter = state.iteration;
        rec.fwd_evals = info.fwd_evals;
        rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        const Vector misfit = noise_llt.matrixL().solve(problem.y - info.g_pred);
        const Vector reg = prior_llt.matrixL().solve(state.belief.mean - problem.prior_mean);
        rec.opt_err = 0.5 * misfit.squaredNorm() + 0.5 * reg.squaredNorm();
        if (reference) {
            rec.mean_rel_err = relative_error(state.belief.mean, reference->mean);
            rec.cov_rel_err = relative_error(state.belief.cov, reference->cov);
        } else {
            rec.mean_rel_err = std::numeric_limits<double>::quiet_NaN();
            rec.cov_rel_err = std::numeric_limits<double>::quiet_NaN();
        }
        state.history.push_back(rec);

        if (!state.belief.mean.allFinite() || !state.belief.cov.allFinite() ||
            state.belief.mean.norm() > 1e8 * initial_norm) {
            state.diverged = true;
            break;
        }
    }
    return state;
}

} // namespace kinv
