#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace spdc {

// Singular values of a dense (real or complex) matrix, descending.
//
// Formed via a self-adjoint eigensolve of the smaller Gram matrix
// (A* A or A A*), which is much faster than a full SVD when only the
// spectrum is needed; eigenvalues are clamped at zero before the square
// root to absorb round-off on the trailing values.
template <typename Derived>
Eigen::VectorXd singular_values(const Eigen::MatrixBase<Derived>& a) {
    using Scalar = typename Derived::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    Mat gram;
    if (a.rows() >= a.cols())
        gram = a.adjoint() * a;
    else
        gram = a * a.adjoint();

    Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = es.eigenvalues(); // ascending, real for self-adjoint

    Eigen::VectorXd sv(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const double lam = std::max(ev[ev.size() - 1 - i], 0.0);
        sv[i] = std::sqrt(lam);
    }
    return sv;
}

} // namespace spdc
