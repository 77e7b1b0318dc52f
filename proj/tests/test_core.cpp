#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "kinv/core.hpp"
#include "test_support.hpp"

using namespace kinv;

TEST_CASE("spd_sqrt handles identity and diagonal matrices") {
    CHECK(spd_sqrt(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3), 1e-14));

    Matrix d = Vector{{4.0, 9.0}}.asDiagonal();
    Matrix expected = Vector{{2.0, 3.0}}.asDiagonal();
    CHECK(spd_sqrt(d).isApprox(expected, 1e-14));
}

TEST_CASE("spd_sqrt factor reproduces the input") {
    Matrix c(2, 2);
    c << 2, 1, 1, 2;
    const Matrix l = spd_sqrt(c);
    CHECK((l * l.transpose() - c).norm() <= 1e-12 * c.norm());
    CHECK(l.isLowerTriangular());
}

TEST_CASE("spd_sqrt round-trips random SPD matrices") {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 30; ++trial) {
        const Index n = 1 + static_cast<Index>(gen() % 8);
        const Matrix c = test::random_spd(gen, n);
        const Matrix l = spd_sqrt(c);
        CHECK((l * l.transpose() - c).norm() <= 1e-10 * c.norm());
    }
}

TEST_CASE("spd_sqrt recovers rank-deficient input via jitter") {
    Vector v{{1.0, 2.0, 3.0}};
    const Matrix c = v * v.transpose(); // PSD, rank 1
    const Matrix l = spd_sqrt(c);
    CHECK((l * l.transpose() - c).norm() <= 1e-8 * c.norm());
}

TEST_CASE("spd_sqrt rejects indefinite and asymmetric input") {
    Matrix indefinite(2, 2);
    indefinite << 1, 0, 0, -1;
    CHECK_THROWS_AS(spd_sqrt(indefinite), NotSpdError);

    Matrix asym(2, 2);
    asym << 1, 0.5, 0, 1;
    CHECK_THROWS_AS(spd_sqrt(asym), NotSpdError);
}

TEST_CASE("ensemble moments use the 1/(J-1) convention") {
    Ensemble two;
    two.particles.resize(1, 2);
    two.particles << 0, 2;
    auto [m2, c2] = ensemble_moments(two);
    CHECK(m2(0) == doctest::Approx(1.0));
    CHECK(c2(0, 0) == doctest::Approx(2.0));

    Ensemble three;
    three.particles.resize(1, 3);
    three.particles << 0, 1, 2;
    auto [m3, c3] = ensemble_moments(three);
    CHECK(m3(0) == doctest::Approx(1.0));
    CHECK(c3(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("identical particles have zero covariance") {
    Ensemble e;
    e.particles = Matrix::Constant(3, 5, 1.25);
    auto [mean, cov] = ensemble_moments(e);
    CHECK(mean.isApprox(Vector::Constant(3, 1.25)));
    CHECK(cov.norm() == doctest::Approx(0.0));
}

TEST_CASE("ensemble moments are invariant under column permutation") {
    std::mt19937_64 gen(11);
    Ensemble e;
    e.particles = test::random_matrix(gen, 4, 9);

    std::vector<Index> perm(9);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);

    Ensemble shuffled;
    shuffled.particles.resize(4, 9);
    for (Index j = 0; j < 9; ++j) shuffled.particles.col(j) = e.particles.col(perm[j]);

    auto [m1, c1] = ensemble_moments(e);
    auto [m2, c2] = ensemble_moments(shuffled);
    CHECK(m1.isApprox(m2, 1e-12));
    CHECK(c1.isApprox(c2, 1e-12));
}

TEST_CASE("single-particle ensembles are rejected") {
    Ensemble e;
    e.particles = Matrix::Zero(2, 1);
    CHECK_THROWS_AS(ensemble_moments(e), DegenerateEnsembleError);
}

TEST_CASE("ensemble square root reproduces the covariance exactly") {
    std::mt19937_64 gen(13);
    Ensemble e;
    e.particles = test::random_matrix(gen, 3, 7);
    const Matrix z = ensemble_sqrt(e);
    auto [mean, cov] = ensemble_moments(e);
    CHECK((z * z.transpose() - cov).norm() <= 1e-14 * std::max(cov.norm(), 1.0));
}

TEST_CASE("linear posterior: symmetric equal-precision case") {
    InverseProblem p;
    p.y = Vector::Zero(2);
    p.noise_cov = Matrix::Identity(2, 2);
    p.prior_mean = Vector::Zero(2);
    p.prior_cov = Matrix::Identity(2, 2);
    p.forward = [](const Vector& t) { return t; };

    const auto post = gaussian_posterior_linear(Matrix::Identity(2, 2), p);
    CHECK(post.mean.norm() == doctest::Approx(0.0));
    CHECK(post.cov.isApprox(0.5 * Matrix::Identity(2, 2), 1e-12));
}

// dense one-shot evaluation of the closed-form posterior, kept independent of
// the library's solve-based path
static GaussianBelief dense_posterior(const Matrix& g, const InverseProblem& p) {
    const Matrix precision = g.transpose() * p.noise_cov.inverse() * g + p.prior_cov.inverse();
    GaussianBelief post;
    post.cov = precision.inverse();
    post.mean = p.prior_mean +
                post.cov * g.transpose() * p.noise_cov.inverse() * (p.y - g * p.prior_mean);
    return post;
}

TEST_CASE("linear posterior matches dense evaluation on the benchmark problems") {
    InverseProblem over;
    Matrix g_over(3, 2);
    g_over << 1, 2, 3, 4, 5, 6;
    over.y = Vector{{3.0, 7.0, 10.0}};
    over.noise_cov = 0.01 * Matrix::Identity(3, 3);
    over.prior_mean = Vector::Zero(2);
    over.prior_cov = Matrix::Identity(2, 2);
    over.forward = [g_over](const Vector& t) -> Vector { return g_over * t; };

    const auto post = gaussian_posterior_linear(g_over, over);
    const auto oracle = dense_posterior(g_over, over);
    CHECK(relative_error(post.mean, oracle.mean) < 1e-10);
    CHECK(relative_error(post.cov, oracle.cov) < 1e-10);

    // golden values from the rational closed form: precision
    // [[3501,4400],[4400,5601]], det 249101
    CHECK(post.mean(0) == doctest::Approx(87400.0 / 249101.0).epsilon(1e-12));
    CHECK(post.mean(1) == doctest::Approx(349400.0 / 249101.0).epsilon(1e-12));
    CHECK(post.cov(0, 0) == doctest::Approx(5601.0 / 249101.0).epsilon(1e-12));
    CHECK(post.cov(0, 1) == doctest::Approx(-4400.0 / 249101.0).epsilon(1e-12));
    CHECK(post.cov(1, 1) == doctest::Approx(3501.0 / 249101.0).epsilon(1e-12));

    InverseProblem under = over;
    Matrix g_under(1, 2);
    g_under << 1, 2;
    under.y = Vector{{3.0}};
    under.noise_cov = 0.01 * Matrix::Identity(1, 1);
    under.forward = [g_under](const Vector& t) -> Vector { return g_under * t; };

    const auto post_u = gaussian_posterior_linear(g_under, under);
    const auto oracle_u = dense_posterior(g_under, under);
    CHECK(relative_error(post_u.mean, oracle_u.mean) < 1e-10);
    CHECK(relative_error(post_u.cov, oracle_u.cov) < 1e-10);
    CHECK(post_u.mean(0) == doctest::Approx(300.0 / 501.0).epsilon(1e-12));
    CHECK(post_u.mean(1) == doctest::Approx(600.0 / 501.0).epsilon(1e-12));
}

TEST_CASE("linear posterior satisfies the normal equations") {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto rl = test::random_linear_problem(gen, 4, 3);
        const auto post = gaussian_posterior_linear(rl.g, rl.problem);
        const Vector residual =
            rl.g.transpose() * rl.problem.noise_cov.inverse() * (rl.problem.y - rl.g * post.mean) -
            rl.problem.prior_cov.inverse() * (post.mean - rl.problem.prior_mean);
        CHECK(residual.norm() <= 1e-10 * std::max(1.0, post.mean.norm()));
    }
}

TEST_CASE("near-singular precision is reported") {
    InverseProblem p;
    p.y = Vector::Zero(1);
    p.noise_cov = Matrix::Identity(1, 1);
    p.prior_mean = Vector::Zero(2);
    p.prior_cov = Vector{{1.0, 1e-16}}.asDiagonal();
    p.forward = [](const Vector&) { return Vector::Zero(1); };
    CHECK_THROWS_AS(gaussian_posterior_linear(Matrix::Zero(1, 2), p), SingularPrecisionError);
}

TEST_CASE("problem validation checks covariance factorizations") {
    InverseProblem p;
    p.y = Vector::Zero(1);
    p.noise_cov = -Matrix::Identity(1, 1);
    p.prior_mean = Vector::Zero(1);
    p.prior_cov = Matrix::Identity(1, 1);
    p.forward = [](const Vector& t) { return t; };
    CHECK_THROWS_AS(p.validate(), NotSpdError);
}
