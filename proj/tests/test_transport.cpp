#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kinv/problems.hpp"
#include "kinv/transport.hpp"
#include "test_support.hpp"

using namespace kinv;

TEST_CASE("moment correction matches the target exactly") {
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 5;
        const GaussianBelief target{test::random_vector(gen, n), test::random_spd(gen, n)};

        Ensemble samples;
        samples.particles = test::random_matrix(gen, n, 10);
        const auto corrected = gaussian_init_correction(samples, target);
        CHECK(corrected.size() == samples.size());

        auto [mean, cov] = ensemble_moments(corrected);
        CHECK(relative_error(mean, target.mean) < 1e-10);
        CHECK(relative_error(cov, target.cov) < 1e-10);
    }
}

TEST_CASE("moment correction is idempotent on the moments") {
    std::mt19937_64 gen(5);
    Ensemble samples;
    samples.particles = test::random_matrix(gen, 3, 8);
    auto [mean, cov] = ensemble_moments(samples);

    const auto corrected = gaussian_init_correction(samples, {mean, cov});
    auto [mean2, cov2] = ensemble_moments(corrected);
    CHECK(relative_error(mean2, mean) < 1e-10);
    CHECK(relative_error(cov2, cov) < 1e-10);
}

TEST_CASE("moment correction hits an identity target") {
    std::mt19937_64 gen(7);
    Ensemble samples;
    samples.particles = test::random_matrix(gen, 4, 9);
    const auto corrected =
        gaussian_init_correction(samples, {Vector::Zero(4), Matrix::Identity(4, 4)});
    auto [mean, cov] = ensemble_moments(corrected);
    CHECK(mean.norm() < 1e-10);
    CHECK((cov - Matrix::Identity(4, 4)).norm() < 1e-10);
}

TEST_CASE("moment correction needs full-rank spreads") {
    std::mt19937_64 gen(9);
    Ensemble too_few;
    too_few.particles = test::random_matrix(gen, 5, 5); // J = N_theta
    CHECK_THROWS_AS(
        gaussian_init_correction(too_few, {Vector::Zero(5), Matrix::Identity(5, 5)}),
        RankDeficientError);

    Ensemble collinear;
    collinear.particles = Matrix::Zero(3, 6);
    collinear.particles.row(0) = test::random_vector(gen, 6).transpose(); // rank-1 spread
    CHECK_THROWS_AS(
        gaussian_init_correction(collinear, {Vector::Zero(3), Matrix::Identity(3, 3)}),
        RankDeficientError);
}

TEST_CASE("homotopy quadrature filter lands on the posterior after N steps") {
    for (auto variant : {LinearVariant::OverDetermined, LinearVariant::UnderDetermined}) {
        const auto problem = linear_problem(variant);
        const auto post = gaussian_posterior_linear(linear_forward_matrix(variant), problem);

        for (int steps : {1, 5, 30}) {
            TransportConfig config;
            config.steps = steps;
            const auto state = run_transport(TransportVariant::Iukf2, problem, config, &post);
            CHECK(state.history.back().mean_rel_err < 1e-8);
            CHECK(state.history.back().cov_rel_err < 1e-8);
        }
    }
}

TEST_CASE("homotopy covariance follows the discrete Riccati recursion") {
    const auto problem = linear_problem(LinearVariant::OverDetermined);
    const Matrix g = linear_forward_matrix(LinearVariant::OverDetermined);
    const double dt = 1.0 / 10.0;

    MethodState state;
    state.method = Method::Uki2;
    state.belief = {problem.prior_mean, problem.prior_cov};
    for (int n = 0; n < 10; ++n) {
        const Matrix c = state.belief.cov;
        transport_step(state, problem, dt, TransportVariant::Iukf2, nullptr);
        const Matrix expected =
            c - c * g.transpose() *
                    (g * c * g.transpose() + problem.noise_cov / dt).inverse() * g * c;
        CHECK(relative_error(state.belief.cov, expected) < 1e-10);
    }
}

TEST_CASE("corrected square-root transports reach the posterior exactly") {
    const auto problem = linear_problem(LinearVariant::OverDetermined);
    const auto post = gaussian_posterior_linear(linear_forward_matrix(LinearVariant::OverDetermined),
                                                problem);

    for (auto variant : {TransportVariant::Ieakf, TransportVariant::Ietkf}) {
        for (int steps : {1, 5, 30}) {
            TransportConfig config;
            config.steps = steps;
            config.ensemble_size = 10;
            config.seed = 19;
            const auto state = run_transport(variant, problem, config, &post);
            CHECK(state.history.back().mean_rel_err < 1e-8);
            CHECK(state.history.back().cov_rel_err < 1e-8);
        }
    }
}

TEST_CASE("a perturbed start breaks the finite-step exactness") {
    const auto problem = linear_problem(LinearVariant::OverDetermined);
    const auto post = gaussian_posterior_linear(linear_forward_matrix(LinearVariant::OverDetermined),
                                                problem);

    TransportConfig config;
    config.steps = 30;
    config.init_perturbation = 0.1;
    const auto state = run_transport(TransportVariant::Iukf2, problem, config, &post);
    const double final_err =
        std::max(state.history.back().mean_rel_err, state.history.back().cov_rel_err);
    CHECK(final_err > 1e-3);
}

TEST_CASE("the stochastic homotopy stays noisy") {
    const auto problem = linear_problem(LinearVariant::OverDetermined);
    const auto post = gaussian_posterior_linear(linear_forward_matrix(LinearVariant::OverDetermined),
                                                problem);

    TransportConfig config;
    config.steps = 30;
    config.ensemble_size = 10;
    config.seed = 23;
    const auto state = run_transport(TransportVariant::Ienkf, problem, config, &post);
    CHECK(state.history.back().mean_rel_err > 1e-4);
}

TEST_CASE("single-step transport solves a trivially identifiable problem") {
    InverseProblem p;
    p.y = Vector{{1.0, -2.0}};
    p.noise_cov = 0.25 * Matrix::Identity(2, 2);
    p.prior_mean = Vector::Zero(2);
    p.prior_cov = Matrix::Identity(2, 2);
    p.forward = [](const Vector& t) { return t; };
    const auto post = gaussian_posterior_linear(Matrix::Identity(2, 2), p);

    TransportConfig config;
    config.steps = 1;
    const auto state = run_transport(TransportVariant::Iukf2, p, config, &post);
    CHECK(state.history.back().mean_rel_err < 1e-10);
    CHECK(state.history.back().cov_rel_err < 1e-10);
}

TEST_CASE("transport validates dt and particle counts") {
    const auto problem = linear_problem(LinearVariant::OverDetermined);
    MethodState state;
    state.method = Method::Uki2;
    state.belief = {problem.prior_mean, problem.prior_cov};
    CHECK_THROWS(transport_step(state, problem, 0.0, TransportVariant::Iukf2, nullptr));
    CHECK_THROWS(transport_step(state, problem, 1.5, TransportVariant::Iukf2, nullptr));

    TransportConfig config;
    config.ensemble_size = 1;
    CHECK_THROWS_AS(run_transport(TransportVariant::Ienkf, problem, config),
                    DegenerateEnsembleError);
}
