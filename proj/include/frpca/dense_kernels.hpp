#pragma once

#include "frpca/types.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace frpca {

/// Seeded i.i.d. standard-normal matrix. Entries are drawn in column-major
/// order, so a given (rows, cols, seed) always yields the same matrix.
template <typename Scalar>
Matrix<Scalar> gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
    detail::require(rows >= 1 && cols >= 1, "gaussian_matrix: dimensions must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<Scalar> normal(Scalar(0), Scalar(1));
    Matrix<Scalar> G(rows, cols);
    Scalar* data = G.data();
    const Index count = rows * cols;
    for (Index i = 0; i < count; ++i) data[i] = normal(rng);
    return G;
}

/// Orthonormal basis of range(M) for tall M, via Householder QR.
/// Rank deficiency (a triangular diagonal entry below cols * eps * max)
/// is an error rather than a silently shrunk basis.
template <typename Derived>
Matrix<typename Derived::Scalar> orth(const Eigen::MatrixBase<Derived>& M) {
    using Scalar = typename Derived::Scalar;
    const Index m = M.rows();
    const Index l = M.cols();
    detail::require(m >= l && l >= 1, "orth: input must be tall (rows >= cols >= 1)");

    Eigen::HouseholderQR<Matrix<Scalar>> qr(M);
    const auto diag = qr.matrixQR().diagonal().head(l);
    const Scalar max_diag = diag.cwiseAbs().maxCoeff();
    const Scalar tol = static_cast<Scalar>(m) * std::numeric_limits<Scalar>::epsilon() * max_diag;
    if (max_diag == Scalar(0) || (diag.cwiseAbs().array() <= tol).any())
        throw NumericalError("orth: numerically rank-deficient input");

    return qr.householderQ() * Matrix<Scalar>::Identity(m, l);
}

/// Basis of range(M) from row-pivoted LU: returns P^T L, the unit
/// lower-triangular factor with its rows permuted back. Cheaper than QR and
/// well scaled, but not orthonormal. Blocked right-looking elimination.
template <typename Derived>
Matrix<typename Derived::Scalar> lu_basis(const Eigen::MatrixBase<Derived>& M) {
    using Scalar = typename Derived::Scalar;
    const Index m = M.rows();
    const Index l = M.cols();
    detail::require(m >= l && l >= 1, "lu_basis: input must be tall (rows >= cols >= 1)");

    Matrix<Scalar> W = M;
    std::vector<Index> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), Index(0));

    const Scalar tol =
        static_cast<Scalar>(l) * std::numeric_limits<Scalar>::epsilon() * W.cwiseAbs().maxCoeff();

    const Index nb = 32;
    for (Index jb = 0; jb < l; jb += nb) {
        const Index bw = std::min(nb, l - jb);
        // Unblocked panel factorization.
        for (Index j = jb; j < jb + bw; ++j) {
            Index piv = j;
            Scalar best = std::abs(W(j, j));
            for (Index i = j + 1; i < m; ++i) {
                const Scalar v = std::abs(W(i, j));
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
            if (best <= tol) throw NumericalError("lu_basis: zero pivot, input is rank-deficient");
            if (piv != j) {
                W.row(j).swap(W.row(piv));
                std::swap(perm[j], perm[piv]);
            }
            const Index below = m - j - 1;
            if (below > 0) {
                W.col(j).tail(below) /= W(j, j);
                const Index pcols = jb + bw - j - 1;
                if (pcols > 0)
                    W.block(j + 1, j + 1, below, pcols).noalias() -=
                        W.col(j).tail(below) * W.row(j).segment(j + 1, pcols);
            }
        }
        // Blocked update of the trailing columns.
        const Index tcols = l - jb - bw;
        if (tcols > 0) {
            auto L11 = W.block(jb, jb, bw, bw);
            W.block(jb, jb + bw, bw, tcols) =
                L11.template triangularView<Eigen::UnitLower>().solve(W.block(jb, jb + bw, bw, tcols));
            const Index below = m - jb - bw;
            if (below > 0)
                W.block(jb + bw, jb + bw, below, tcols).noalias() -=
                    W.block(jb + bw, jb, below, bw) * W.block(jb, jb + bw, bw, tcols);
        }
    }

    // Assemble P^T L: working row i goes back to original row perm[i].
    Matrix<Scalar> X = Matrix<Scalar>::Zero(m, l);
    for (Index i = 0; i < m; ++i) {
        const Index r = perm[i];
        const Index ncols = std::min(i + 1, l);
        for (Index j = 0; j < ncols; ++j) X(r, j) = (j == i) ? Scalar(1) : W(i, j);
    }
    return X;
}

/// Eigendecomposition of a symmetric matrix: B = V diag(D) V^T with D in
/// ascending order.
template <typename Derived>
std::pair<Matrix<typename Derived::Scalar>, Vector<typename Derived::Scalar>> eig_sym(
    const Eigen::MatrixBase<Derived>& B) {
    using Scalar = typename Derived::Scalar;
    detail::require(B.rows() == B.cols() && B.rows() >= 1, "eig_sym: input must be square");
    const Scalar scale = B.cwiseAbs().maxCoeff();
    const Scalar asym = (B - B.transpose()).cwiseAbs().maxCoeff();
    if (scale > Scalar(0) && asym > Scalar(1e-12) * scale)
        throw std::invalid_argument("eig_sym: input is not symmetric within tolerance");

    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(B);
    if (es.info() != Eigen::Success)
        throw NumericalError("eig_sym: eigendecomposition failed to converge");
    return {es.eigenvectors(), es.eigenvalues()};
}

/// Economic SVD outputs with the singular values in ascending order,
/// the natural order of the Gram-eigendecomposition route that produces them.
template <typename Scalar>
struct EigSvdResult {
    Matrix<Scalar> U;  // m x n
    Vector<Scalar> S;  // length n, ascending
    Matrix<Scalar> V;  // n x n
};

/// Economic SVD of a tall full-column-rank matrix via the n x n Gram matrix:
/// form A^T A, eigendecompose, recover U = A V diag(S)^-1. Much faster than a
/// direct SVD when m >> n, but inapplicable to rank-deficient input: an
/// eigenvalue at or below n * eps * lambda_max raises an error.
template <typename Derived>
EigSvdResult<typename Derived::Scalar> eig_svd(const Eigen::MatrixBase<Derived>& A) {
    using Scalar = typename Derived::Scalar;
    const Index m = A.rows();
    const Index n = A.cols();
    detail::require(m >= n && n >= 1, "eig_svd: input must be tall (rows >= cols >= 1)");

    Matrix<Scalar> B = Matrix<Scalar>::Zero(n, n);
    B.template selfadjointView<Eigen::Lower>().rankUpdate(A.adjoint());

    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(B);
    if (es.info() != Eigen::Success)
        throw NumericalError("eig_svd: eigendecomposition failed to converge");

    const Vector<Scalar>& D = es.eigenvalues();
    const Scalar lambda_max = D(n - 1);
    if (lambda_max <= Scalar(0) ||
        D(0) <= static_cast<Scalar>(n) * std::numeric_limits<Scalar>::epsilon() * lambda_max)
        throw NumericalError("eig_svd: input does not have full numerical column rank");

    EigSvdResult<Scalar> out;
    out.S = D.cwiseSqrt();
    out.V = es.eigenvectors();
    out.U.noalias() = A * (out.V * out.S.cwiseInverse().asDiagonal());
    return out;
}

/// Economic SVD of a short-and-fat full-row-rank matrix B (l x n, l <= n),
/// with descending singular values: run eig_svd on B^T and flip the order.
template <typename Derived>
SvdResult<typename Derived::Scalar> economic_svd_short_fat(const Eigen::MatrixBase<Derived>& B) {
    using Scalar = typename Derived::Scalar;
    detail::require(B.rows() <= B.cols() && B.rows() >= 1,
                    "economic_svd_short_fat: input must have rows <= cols");
    EigSvdResult<Scalar> t = eig_svd(B.transpose());

    SvdResult<Scalar> out;
    out.U = t.V.rowwise().reverse();  // l x l
    out.S = t.S.reverse();
    out.V = t.U.rowwise().reverse();  // n x l
    return out;
}

}  // namespace frpca
