#include "kinv/problems.hpp"

#include <cmath>

namespace kinv {

Matrix linear_forward_matrix(LinearVariant variant) {
    if (variant == LinearVariant::OverDetermined) {
        Matrix g(3, 2);
        g << 1, 2, 3, 4, 5, 6;
        return g;
    }
    Matrix g(1, 2);
    g << 1, 2;
    return g;
}

InverseProblem linear_problem(LinearVariant variant) {
    const Matrix g = linear_forward_matrix(variant);

    InverseProblem p;
    if (variant == LinearVariant::OverDetermined) {
        p.y = Vector{{3.0, 7.0, 10.0}};
    } else {
        p.y = Vector{{3.0}};
    }
    p.noise_cov = 0.01 * Matrix::Identity(g.rows(), g.rows());
    p.prior_mean = Vector::Zero(2);
    p.prior_cov = Matrix::Identity(2, 2);
    p.forward = [g](const Vector& theta) -> Vector { return g * theta; };
    return p;
}

double elliptic_pressure(double x, double theta1, double theta2) {
    return theta2 * x + std::exp(-theta1) * (-0.5 * x * x + 0.5 * x);
}

InverseProblem elliptic_problem(EllipticVariant variant) {
    InverseProblem p;
    p.prior_mean = Vector{{0.0, 100.0}};
    p.prior_cov = Matrix::Identity(2, 2);

    if (variant == EllipticVariant::WellDetermined) {
        p.y = Vector{{27.5, 79.7}};
        p.noise_cov = 0.01 * Matrix::Identity(2, 2);
        p.forward = [](const Vector& theta) -> Vector {
            return Vector{{elliptic_pressure(0.25, theta(0), theta(1)),
                           elliptic_pressure(0.75, theta(0), theta(1))}};
        };
    } else {
        p.y = Vector{{27.5}};
        p.noise_cov = 0.01 * Matrix::Identity(1, 1);
        p.forward = [](const Vector& theta) -> Vector {
            return Vector{{elliptic_pressure(0.25, theta(0), theta(1))}};
        };
    }
    return p;
}

Matrix hilbert_matrix(Index n) {
    Matrix g(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            g(i, j) = 1.0 / static_cast<double>(i + j + 1);
    return g;
}

InverseProblem hilbert_problem(Index n) {
    if (n < 1) throw Error("Hilbert dimension must be positive");
    const Matrix g = hilbert_matrix(n);

    InverseProblem p;
    p.y = g * Vector::Ones(n);
    p.noise_cov = 0.01 * Matrix::Identity(n, n);
    p.prior_mean = Vector::Zero(n);
    p.prior_cov = Matrix::Identity(n, n);
    p.forward = [g](const Vector& theta) -> Vector { return g * theta; };
    return p;
}

} // namespace kinv
