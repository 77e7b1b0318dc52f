#include "kinv/square_root.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace kinv {

Matrix kalman_gain(const Matrix& cxy, const Matrix& cyy) {
    Eigen::LDLT<Matrix> ldlt(symmetrize(cyy));
    if (ldlt.info() != Eigen::Success)
        throw SingularInnovationError("innovation covariance factorization failed");
    return ldlt.solve(cxy.transpose()).transpose();
}

Matrix adjustment_multiplier(const Matrix& zhat, const Matrix& yhat,
                             const Eigen::LLT<Matrix>& noise) {
    const Index j = zhat.cols();

    Eigen::JacobiSVD<Matrix> svd(zhat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    Index rank = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-12 * smax) ++rank;
    if (rank == 0) throw RankDeficientError("ensemble square root has rank zero");

    const Matrix p = svd.matrixU().leftCols(rank);
    const Vector dhat_sqrt = svd.singularValues().head(rank);
    const Matrix v = svd.matrixV().leftCols(rank);

    // M = V^T (I + Yhat^T S^-1 Yhat)^-1 V, inverted through its own Cholesky
    Matrix inner = Matrix::Identity(j, j) + yhat.transpose() * noise.solve(yhat);
    Eigen::LLT<Matrix> inner_llt(symmetrize(inner));
    if (inner_llt.info() != Eigen::Success)
        throw SingularInnovationError("whitened observation Gram matrix not SPD");
    const Matrix m = symmetrize(v.transpose() * inner_llt.solve(v));

    Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
    const Vector d = eig.eigenvalues().cwiseMax(0.0);
    const Matrix u = eig.eigenvectors();

    return p * dhat_sqrt.asDiagonal() * u * d.cwiseSqrt().asDiagonal() *
           dhat_sqrt.cwiseInverse().asDiagonal() * p.transpose();
}

Matrix transform_multiplier(const Matrix& yhat, const Eigen::LLT<Matrix>& noise) {
    const Matrix gram = symmetrize(yhat.transpose() * noise.solve(yhat));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
    const Vector gamma = eig.eigenvalues().cwiseMax(0.0);
    const Matrix p = eig.eigenvectors();
    const Vector scale = (gamma.array() + 1.0).rsqrt();
    return p * scale.asDiagonal() * p.transpose();
}

} // namespace kinv
