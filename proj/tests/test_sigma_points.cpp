#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kinv/sigma_points.hpp"
#include "test_support.hpp"

using namespace kinv;

namespace {

Matrix weighted_spread_covariance(const SigmaPoints& sp, const Vector& mean) {
    const Matrix d = sp.points.rightCols(sp.size() - 1).colwise() - mean;
    return sp.weight * d * d.transpose();
}

} // namespace

TEST_CASE("simplex nodes in one dimension are {0, -2, 2}") {
    const auto sp = sigma_points_uki1(Vector::Zero(1), Matrix::Identity(1, 1));
    CHECK(sp.weight == doctest::Approx(1.0 / 8.0));
    REQUIRE(sp.size() == 3);
    CHECK(sp.points(0, 0) == doctest::Approx(0.0));
    CHECK(sp.points(0, 1) == doctest::Approx(-2.0));
    CHECK(sp.points(0, 2) == doctest::Approx(2.0));
}

TEST_CASE("simplex frame in two dimensions follows the recursion") {
    const auto sp = sigma_points_uki1(Vector::Zero(2), Matrix::Identity(2, 2));
    CHECK(sp.weight == doctest::Approx(1.0 / 6.0));
    REQUIRE(sp.size() == 4);

    const double s = std::sqrt(3.0);
    Matrix expected(2, 4);
    expected << 0, -s, s, 0,
                0, 1, 1, -2;
    CHECK(sp.points.isApprox(expected, 1e-12));
    CHECK(weighted_spread_covariance(sp, Vector::Zero(2)).isApprox(Matrix::Identity(2, 2), 1e-12));
}

TEST_CASE("symmetric nodes in one dimension sit one standard deviation out") {
    const Vector m = Vector::Constant(1, 3.0);
    const Matrix c = Matrix::Constant(1, 1, 4.0);
    const auto sp = sigma_points_uki2(m, c);
    CHECK(sp.weight == doctest::Approx(0.5));
    REQUIRE(sp.size() == 3);
    CHECK(sp.points(0, 0) == doctest::Approx(3.0));
    CHECK(sp.points(0, 1) == doctest::Approx(5.0));
    CHECK(sp.points(0, 2) == doctest::Approx(1.0));
}

TEST_CASE("symmetric nodes in four dimensions use offsets of twice the root") {
    const auto sp = sigma_points_uki2(Vector::Zero(4), Matrix::Identity(4, 4));
    CHECK(sp.weight == doctest::Approx(1.0 / 8.0));
    REQUIRE(sp.size() == 9);
    for (Index i = 0; i < 4; ++i) {
        CHECK(sp.points.col(1 + i).isApprox(2.0 * Vector::Unit(4, i), 1e-12));
        CHECK(sp.points.col(5 + i).isApprox(-2.0 * Vector::Unit(4, i), 1e-12));
    }
}

TEST_CASE("both variants reproduce the generating moments") {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 1 + static_cast<Index>(gen() % 6);
        const Vector m = test::random_vector(gen, n);
        const Matrix c = test::random_spd(gen, n);

        for (auto variant : {UkiVariant::Simplex, UkiVariant::Symmetric}) {
            const auto sp = make_sigma_points(variant, m, c);
            CHECK(sp.size() == sigma_point_count(variant, n));
            CHECK(sp.points.col(0) == m);
            const Matrix cov = weighted_spread_covariance(sp, m);
            CHECK((cov - c).norm() <= 1e-10 * c.norm());
        }
    }
}

TEST_CASE("sigma point generation propagates factorization failures") {
    Matrix indefinite(2, 2);
    indefinite << 1, 0, 0, -1;
    CHECK_THROWS_AS(sigma_points_uki2(Vector::Zero(2), indefinite), NotSpdError);
}
