#include "kinv/sigma_points.hpp"

#include <cmath>

namespace kinv {

Index sigma_point_count(UkiVariant v, Index n_theta) {
    return v == UkiVariant::Simplex ? n_theta + 2 : 2 * n_theta + 1;
}

double sigma_point_weight(UkiVariant v, Index n_theta) {
    const double n = static_cast<double>(n_theta);
    if (v == UkiVariant::Simplex) return n / (4.0 * (n + 1.0));
    return std::max(0.125, 1.0 / (2.0 * n));
}

Matrix sigma_point_directions(UkiVariant v, Index n_theta) {
    const double a = sigma_point_weight(v, n_theta);

    if (v == UkiVariant::Symmetric) {
        const double s = 1.0 / std::sqrt(2.0 * a);
        Matrix dirs(n_theta, 2 * n_theta);
        dirs << s * Matrix::Identity(n_theta, n_theta),
            -s * Matrix::Identity(n_theta, n_theta);
        return dirs;
    }

    // simplex frame, built up one dimension at a time: each extension keeps
    // zero row sums and the weighted unit covariance
    Matrix dirs(1, 2);
    const double s1 = 1.0 / std::sqrt(2.0 * a);
    dirs << -s1, s1;
    for (Index d = 2; d <= n_theta; ++d) {
        Matrix next = Matrix::Zero(d, d + 1);
        next.topLeftCorner(d - 1, d) = dirs;
        const double dd = static_cast<double>(d);
        const double base = 1.0 / std::sqrt(a * dd * (dd + 1.0));
        next.row(d - 1).head(d).setConstant(base);
        next(d - 1, d) = -dd * base;
        dirs = next;
    }
    return dirs;
}

SigmaPoints make_sigma_points(UkiVariant v, const Vector& mean, const Matrix& cov) {
    const Index n = mean.size();
    const Matrix root = spd_sqrt(cov);
    const Matrix dirs = sigma_point_directions(v, n);

    SigmaPoints sp;
    sp.variant = v;
    sp.weight = sigma_point_weight(v, n);
    sp.points.resize(n, dirs.cols() + 1);
    sp.points.col(0) = mean;
    sp.points.rightCols(dirs.cols()) = (root * dirs).colwise() + mean;
    return sp;
}

SigmaPoints sigma_points_uki1(const Vector& mean, const Matrix& cov) {
    return make_sigma_points(UkiVariant::Simplex, mean, cov);
}

SigmaPoints sigma_points_uki2(const Vector& mean, const Matrix& cov) {
    return make_sigma_points(UkiVariant::Symmetric, mean, cov);
}

} // namespace kinv
