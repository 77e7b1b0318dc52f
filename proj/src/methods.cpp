#include "kinv/methods.hpp"

#include <chrono>
#include <cmath>

#include "kinv/square_root.hpp"
#include "kinv/transport.hpp"

namespace kinv {

bool is_sigma_point_method(Method m) { return m == Method::Uki1 || m == Method::Uki2; }

const char* method_name(Method m) {
    switch (m) {
    case Method::Uki1: return "uki1";
    case Method::Uki2: return "uki2";
    case Method::Eki: return "eki";
    case Method::Eaki: return "eaki";
    case Method::Etki: return "etki";
    }
    return "?";
}

namespace {

void refresh_moments(MethodState& state) {
    auto [mean, cov] = ensemble_moments(state.ensemble);
    state.belief = {std::move(mean), std::move(cov)};
}

bool state_is_finite(const MethodState& state) {
    if (!state.belief.mean.allFinite() || !state.belief.cov.allFinite()) return false;
    if (state.uses_ensemble() && !state.ensemble.particles.allFinite()) return false;
    return true;
}

} // namespace

StepInfo uki_step(MethodState& state, const AugmentedSystem& system, UkiVariant variant,
                  int jobs) {
    const GaussianBelief predicted = inflate(state.belief, system.gamma);
    const SigmaPoints sp = make_sigma_points(variant, predicted.mean, predicted.cov);
    const Index j = sp.size();

    const Matrix values = system.evaluate(sp.points, jobs);
    const Vector y_pred = values.col(0); // center-node mean rule

    const Matrix dtheta = sp.points.rightCols(j - 1).colwise() - predicted.mean;
    const Matrix dvalue = values.rightCols(j - 1).colwise() - y_pred;

    const Matrix cxy = sp.weight * dtheta * dvalue.transpose();
    const Matrix cyy = sp.weight * dvalue * dvalue.transpose() + system.sigma_nu;

    const Matrix gain = kalman_gain(cxy, cyy);
    state.belief.mean = predicted.mean + gain * (system.x - y_pred);
    state.belief.cov = symmetrize(predicted.cov - gain * cxy.transpose());
    state.iteration += 1;

    return {y_pred.head(system.n_obs), j};
}

StepInfo eki_step(MethodState& state, const AugmentedSystem& system, Rng& rng, int jobs) {
    const Ensemble predicted = inflate_ensemble(state.ensemble, system.gamma);
    const Index j = predicted.size();

    // per-particle observation noise, drawn before the fan-out so the stream
    // order is independent of thread count
    const Matrix noise =
        system.sigma_nu_llt.matrixL() * rng.gauss_matrix(system.aug_dim(), j);

    const Matrix values = system.evaluate(predicted.particles, jobs);
    const Vector m_hat = ensemble_mean(predicted);
    const Vector y_mean = values.rowwise().mean();

    const double scale = 1.0 / static_cast<double>(j - 1);
    const Matrix dtheta = predicted.particles.colwise() - m_hat;
    const Matrix dvalue = values.colwise() - y_mean;
    const Matrix cxy = scale * dtheta * dvalue.transpose();
    const Matrix cyy = scale * dvalue * dvalue.transpose() + system.sigma_nu;

    const Matrix gain = kalman_gain(cxy, cyy);
    const Matrix innovations = ((-values - noise).colwise() + system.x);
    state.ensemble.particles = predicted.particles + gain * innovations;
    refresh_moments(state);
    state.iteration += 1;

    return {y_mean.head(system.n_obs), j};
}

namespace {

// Shared analysis for the two deterministic square-root updates.
StepInfo square_root_step(MethodState& state, const AugmentedSystem& system, bool adjustment,
                          int jobs) {
    if (state.ensemble.size() < 2)
        throw DegenerateEnsembleError("square-root update needs at least 2 particles");

    const Ensemble predicted = inflate_ensemble(state.ensemble, system.gamma);
    const Index j = predicted.size();

    const Matrix values = system.evaluate(predicted.particles, jobs);
    const Vector m_hat = ensemble_mean(predicted);
    const Vector y_mean = values.rowwise().mean();

    const double root = std::sqrt(static_cast<double>(j - 1));
    const Matrix zhat = (predicted.particles.colwise() - m_hat) / root;
    const Matrix yhat = (values.colwise() - y_mean) / root;

    const Matrix cxy = zhat * yhat.transpose();
    const Matrix cyy = yhat * yhat.transpose() + system.sigma_nu;
    const Vector mean = m_hat + kalman_gain(cxy, cyy) * (system.x - y_mean);

    if (adjustment) {
        const Matrix a = adjustment_multiplier(zhat, yhat, system.sigma_nu_llt);
        state.ensemble.particles =
            (a * (predicted.particles.colwise() - m_hat)).colwise() + mean;
    } else {
        const Matrix t = transform_multiplier(yhat, system.sigma_nu_llt);
        state.ensemble.particles = ((zhat * t) * root).colwise() + mean;
    }
    refresh_moments(state);
    state.iteration += 1;

    return {y_mean.head(system.n_obs), j};
}

} // namespace

StepInfo eaki_step(MethodState& state, const AugmentedSystem& system, int jobs) {
    return square_root_step(state, system, /*adjustment=*/true, jobs);
}

StepInfo etki_step(MethodState& state, const AugmentedSystem& system, int jobs) {
    return square_root_step(state, system, /*adjustment=*/false, jobs);
}

MethodState initial_state(Method method, const AugmentedSystem& system, const RunConfig& config,
                          Rng& rng) {
    MethodState state;
    state.method = method;
    if (is_sigma_point_method(method)) {
        state.belief = {system.prior_mean, system.prior_cov};
        return state;
    }

    if (config.ensemble_size < 2)
        throw DegenerateEnsembleError("particle methods need at least 2 particles");
    const Matrix draws = rng.gauss_matrix(system.n_theta, config.ensemble_size);
    state.ensemble.particles =
        (system.prior_cov_llt.matrixL() * draws).colwise() + system.prior_mean;
    if (config.exact_init)
        state.ensemble =
            gaussian_init_correction(state.ensemble, {system.prior_mean, system.prior_cov});
    refresh_moments(state);
    return state;
}

StepInfo method_step(MethodState& state, const AugmentedSystem& system, const RunConfig& config,
                     Rng& rng) {
    switch (state.method) {
    case Method::Uki1: return uki_step(state, system, UkiVariant::Simplex, config.jobs);
    case Method::Uki2: return uki_step(state, system, UkiVariant::Symmetric, config.jobs);
    case Method::Eki: return eki_step(state, system, rng, config.jobs);
    case Method::Eaki: return eaki_step(state, system, config.jobs);
    case Method::Etki: return etki_step(state, system, config.jobs);
    }
    throw Error("unknown method");
}

MethodState run(Method method, const AugmentedSystem& system, const RunConfig& config,
                const GaussianBelief* reference) {
    if (config.iterations < 0) throw Error("iterations must be nonnegative");

    Rng rng(config.seed);
    MethodState state = initial_state(method, system, config, rng);
    const double initial_norm = std::max(1.0, state.belief.mean.norm());

    using clock = std::chrono::steady_clock;
    for (int n = 0; n < config.iterations; ++n) {
        const auto t0 = clock::now();
        const StepInfo info = method_step(state, system, config, rng);
        const auto t1 = clock::now();

        IterationRecord rec;
        rec.iter = state.iteration;
        rec.fwd_evals = info.fwd_evals;
        rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        rec.opt_err = system.optimization_error(info.g_pred, state.belief.mean);
        if (reference) {
            rec.mean_rel_err = relative_error(state.belief.mean, reference->mean);
            rec.cov_rel_err = relative_error(state.belief.cov, reference->cov);
        } else {
            rec.mean_rel_err = std::numeric_limits<double>::quiet_NaN();
            rec.cov_rel_err = std::numeric_limits<double>::quiet_NaN();
        }
        state.history.push_back(rec);

        if (!state_is_finite(state) ||
            state.belief.mean.norm() > config.divergence_factor * initial_norm) {
            state.diverged = true;
            break;
        }
    }
    return state;
}

MethodState run(Method method, const InverseProblem& problem, const RunConfig& config,
                const GaussianBelief* reference) {
    return run(method, build_augmented(problem, config.gamma), config, reference);
}

} // namespace kinv
