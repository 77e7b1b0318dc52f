#pragma once

#include <optional>
#include <vector>

#include "kinv/meanfield.hpp"
#include "kinv/sigma_points.hpp"

namespace kinv {

enum class Method { Uki1, Uki2, Eki, Eaki, Etki };

bool is_sigma_point_method(Method m);
const char* method_name(Method m);

/// Per-iteration diagnostics. Error columns are NaN when no reference
/// distribution was supplied.
struct IterationRecord {
    int iter = 0;
    double mean_rel_err = 0.0;
    double cov_rel_err = 0.0;
    double opt_err = 0.0;
    long fwd_evals = 0;
    double wall_ms = 0.0;
};

/// Evolving state of one inversion run. Sigma-point methods maintain the
/// belief directly; particle methods maintain the ensemble and refresh the
/// belief to its empirical moments after every step.
struct MethodState {
    Method method = Method::Uki2;
    GaussianBelief belief;
    Ensemble ensemble;
    int iteration = 0;
    bool diverged = false;
    std::vector<IterationRecord> history;

    bool uses_ensemble() const { return !is_sigma_point_method(method); }
};

/// What a single step reports back to the driver.
struct StepInfo {
    Vector g_pred;   // predicted observation used in the analysis
    long fwd_evals = 0;
};

StepInfo uki_step(MethodState& state, const AugmentedSystem& system, UkiVariant variant,
                  int jobs = 1);
StepInfo eki_step(MethodState& state, const AugmentedSystem& system, Rng& rng, int jobs = 1);
StepInfo eaki_step(MethodState& state, const AugmentedSystem& system, int jobs = 1);
StepInfo etki_step(MethodState& state, const AugmentedSystem& system, int jobs = 1);

struct RunConfig {
    double gamma = 1.0;
    int iterations = 30;
    int ensemble_size = 10; // J for particle methods
    std::uint64_t seed = 0;
    bool exact_init = true; // moment-correct the initial ensemble
    int jobs = 1;
    double divergence_factor = 1e8; // halt when ||m|| grows past this multiple
};

/// Initial state at the prior: the belief for sigma-point methods, J prior
/// samples (optionally moment-corrected) for particle methods.
MethodState initial_state(Method method, const AugmentedSystem& system, const RunConfig& config,
                          Rng& rng);

/// Advances `state` by one step of its own method.
StepInfo method_step(MethodState& state, const AugmentedSystem& system, const RunConfig& config,
                     Rng& rng);

/// Full run from the prior: iterates, records per-iteration diagnostics, and
/// halts early (flagging the state) when iterates stop being finite.
MethodState run(Method method, const AugmentedSystem& system, const RunConfig& config,
                const GaussianBelief* reference = nullptr);

MethodState run(Method method, const InverseProblem& problem, const RunConfig& config,
                const GaussianBelief* reference = nullptr);

} // namespace kinv
