#pragma once

#include "kinv/methods.hpp"

namespace kinv {

/// Homotopy filters that deform the prior into the posterior over N = 1/dt
/// analysis steps on the plain observation y, with noise scaled by 1/dt and
/// no covariance inflation in between.
enum class TransportVariant { Iukf1, Iukf2, Ienkf, Ieakf, Ietkf };

const char* transport_name(TransportVariant v);
bool transport_uses_ensemble(TransportVariant v);

struct TransportConfig {
    int steps = 30;         // N; dt = 1/N exactly
    int ensemble_size = 10; // J for particle variants
    std::uint64_t seed = 0;
    bool exact_init = true; // moment-correct the initial ensemble
    double init_perturbation = 0.0; // relative offset applied to the starting moments
    int jobs = 1;

    double dt() const { return 1.0 / static_cast<double>(steps); }
};

/// Rescales an i.i.d. sample so its empirical mean and covariance match the
/// target exactly. Requires J >= N_theta + 1 and a full-rank sample spread.
Ensemble gaussian_init_correction(const Ensemble& samples, const GaussianBelief& target);

/// One analysis step of the homotopy filter. `rng` is only consulted by the
/// stochastic variant.
StepInfo transport_step(MethodState& state, const InverseProblem& problem, double dt,
                        TransportVariant variant, Rng* rng, int jobs = 1);

/// Runs exactly N steps from the prior, recording the same diagnostics as the
/// mean-field driver.
MethodState run_transport(TransportVariant variant, const InverseProblem& problem,
                          const TransportConfig& config,
                          const GaussianBelief* reference = nullptr);

} // namespace kinv
