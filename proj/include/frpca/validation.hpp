#pragma once

#include "frpca/dense_kernels.hpp"
#include "frpca/sparse_matrix.hpp"
#include "frpca/types.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace frpca {

enum class ErrorNorm { Frobenius, Spectral };

template <typename Scalar>
struct OracleSvd {
    Matrix<Scalar> U;  // m x min(m, n)
    Vector<Scalar> S;  // descending
    Matrix<Scalar> V;  // n x min(m, n)
};

constexpr std::uint64_t kDefaultOracleEntryLimit = 4'000'000;

namespace detail {

// Hestenes one-sided Jacobi on the columns of W, accumulating the applied
// rotations in V. Deliberately shares no code with the Gram-matrix route in
// eig_svd so the two can check each other.
template <typename Scalar>
void one_sided_jacobi(Matrix<Scalar>& W, Matrix<Scalar>& V) {
    const Index n = W.cols();
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    const int max_sweeps = 60;

    Vector<Scalar> sqn(n);
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        for (Index j = 0; j < n; ++j) sqn(j) = W.col(j).squaredNorm();
        bool rotated = false;
        for (Index p = 0; p < n - 1; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const Scalar a = sqn(p);
                const Scalar b = sqn(q);
                const Scalar gamma = W.col(p).dot(W.col(q));
                if (std::abs(gamma) <= eps * std::sqrt(a * b) || gamma == Scalar(0)) continue;
                rotated = true;

                const Scalar tau = (b - a) / (2 * gamma);
                const Scalar t = (tau >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                                 (std::abs(tau) + std::sqrt(1 + tau * tau));
                const Scalar c = Scalar(1) / std::sqrt(1 + t * t);
                const Scalar s = c * t;

                Vector<Scalar> wp = W.col(p);
                W.col(p) = c * wp - s * W.col(q);
                W.col(q) = s * wp + c * W.col(q);
                Vector<Scalar> vp = V.col(p);
                V.col(p) = c * vp - s * V.col(q);
                V.col(q) = s * vp + c * V.col(q);

                sqn(p) = c * c * a - 2 * c * s * gamma + s * s * b;
                sqn(q) = s * s * a + 2 * c * s * gamma + c * c * b;
            }
        }
        if (!rotated) return;
    }
    throw NumericalError("oracle_svd: Jacobi sweeps did not converge");
}

}  // namespace detail

/// Full economic SVD by one-sided Jacobi rotations, descending order.
/// Independent of the library's Gram/QR-based kernels; intended as ground
/// truth at desk scale, hence the entry-count guard.
template <typename Derived>
OracleSvd<typename Derived::Scalar> oracle_svd(const Eigen::MatrixBase<Derived>& A,
                                               std::uint64_t entry_limit = kDefaultOracleEntryLimit) {
    using Scalar = typename Derived::Scalar;
    const std::uint64_t entries =
        static_cast<std::uint64_t>(A.rows()) * static_cast<std::uint64_t>(A.cols());
    if (entries > entry_limit)
        throw NumericalError("oracle_svd: size guard exceeded (" + std::to_string(entries) +
                             " entries > " + std::to_string(entry_limit) + ")");
    detail::require(A.rows() >= 1 && A.cols() >= 1, "oracle_svd: empty matrix");

    const bool transposed = A.rows() < A.cols();
    Matrix<Scalar> W;
    if (transposed)
        W = A.transpose();
    else
        W = A;
    const Index n = W.cols();
    Matrix<Scalar> V = Matrix<Scalar>::Identity(n, n);
    detail::one_sided_jacobi(W, V);

    Vector<Scalar> S(n);
    for (Index j = 0; j < n; ++j) S(j) = W.col(j).norm();

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index(0));
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return S(a) > S(b); });

    OracleSvd<Scalar> out;
    out.S.resize(n);
    out.U.resize(W.rows(), n);
    out.V.resize(n, n);
    for (Index j = 0; j < n; ++j) {
        const Index src = order[j];
        out.S(j) = S(src);
        out.V.col(j) = V.col(src);
        if (S(src) > Scalar(0))
            out.U.col(j) = W.col(src) / S(src);
        else
            out.U.col(j).setZero();
    }
    if (transposed) std::swap(out.U, out.V);
    return out;
}

namespace detail {

// Residual operator R = A - U diag(S) V^T, applied matrix-free.
template <typename Scalar>
struct ResidualOp {
    const SparseMatrixCsr<Scalar>& A;
    const SvdResult<Scalar>& r;

    Vector<Scalar> apply(const Vector<Scalar>& x) const {
        Vector<Scalar> y = spmm(A, x);
        y.noalias() -= r.U * (r.S.asDiagonal() * (r.V.transpose() * x));
        return y;
    }
    Vector<Scalar> apply_transpose(const Vector<Scalar>& y) const {
        Vector<Scalar> x = spmm_transpose(A, y);
        x.noalias() -= r.V * (r.S.asDiagonal() * (r.U.transpose() * y));
        return x;
    }
};

// Largest singular value of a matrix-free operator, by power iteration on
// Op^T Op with a Rayleigh-quotient stopping test.
template <typename Scalar, typename Op>
Scalar operator_two_norm(const Op& op, Index ncols, std::uint64_t seed, int max_iters = 2000,
                         Scalar rel_tol = Scalar(1e-12)) {
    Vector<Scalar> v = gaussian_matrix<Scalar>(ncols, 1, seed);
    v.normalize();
    Scalar lambda_prev = Scalar(0);
    for (int it = 0; it < max_iters; ++it) {
        Vector<Scalar> u = op.apply_transpose(op.apply(v));
        const Scalar lambda = v.dot(u);
        const Scalar norm_u = u.norm();
        if (norm_u == Scalar(0)) return Scalar(0);
        v = u / norm_u;
        if (it > 0 && std::abs(lambda - lambda_prev) <= rel_tol * std::abs(lambda)) {
            lambda_prev = lambda;
            break;
        }
        lambda_prev = lambda;
    }
    return std::sqrt(std::max(lambda_prev, Scalar(0)));
}

}  // namespace detail

/// | A - U diag(S) V^T | in the requested norm. The Frobenius norm uses an
/// explicit dense residual below entry_limit and a cross-term identity above
/// it (no densification); the spectral norm is matrix-free power iteration.
template <typename Scalar>
Scalar low_rank_error(const SparseMatrixCsr<Scalar>& A, const SvdResult<Scalar>& r, ErrorNorm norm,
                      std::uint64_t entry_limit = kDefaultOracleEntryLimit) {
    detail::require(r.U.rows() == A.rows() && r.V.rows() == A.cols(), "low_rank_error: shape mismatch");
    detail::require(r.U.cols() == r.S.size() && r.V.cols() == r.S.size(),
                    "low_rank_error: inconsistent factor widths");

    if (norm == ErrorNorm::Spectral) {
        detail::ResidualOp<Scalar> op{A, r};
        return detail::operator_two_norm<Scalar>(op, A.cols(), /*seed=*/0x9e3779b9u);
    }

    const std::uint64_t entries =
        static_cast<std::uint64_t>(A.rows()) * static_cast<std::uint64_t>(A.cols());
    if (entries <= entry_limit) {
        Matrix<Scalar> R = A.toDense();
        R.noalias() -= r.U * r.S.asDiagonal() * r.V.transpose();
        return R.norm();
    }
    // |A - M|^2 = |A|^2 - 2 <A, M> + |M|^2 with M = U S V^T, all terms sparse
    // or k x k. Accurate only away from zero residual; documented trade-off of
    // the non-densifying path.
    Matrix<Scalar> W = spmm(A, r.V);  // m x k
    Scalar cross = Scalar(0);
    for (Index i = 0; i < r.S.size(); ++i) cross += r.S(i) * r.U.col(i).dot(W.col(i));
    Matrix<Scalar> gu = r.U.transpose() * r.U;
    Matrix<Scalar> gv = r.V.transpose() * r.V;
    Scalar m2 = Scalar(0);
    for (Index i = 0; i < r.S.size(); ++i)
        for (Index j = 0; j < r.S.size(); ++j) m2 += r.S(i) * r.S(j) * gu(i, j) * gv(i, j);
    const Scalar sq = A.squaredFrobeniusNorm() - 2 * cross + m2;
    return std::sqrt(std::max(sq, Scalar(0)));
}

/// | A - A_k | from the oracle's singular values: sigma_{k+1} in the spectral
/// norm, the root of the tail sum of squares in Frobenius.
template <typename Scalar>
Scalar best_rank_k_error(const Vector<Scalar>& singular_values, Index k, ErrorNorm norm) {
    detail::require(k >= 0, "best_rank_k_error: negative k");
    const Index n = singular_values.size();
    if (k >= n) return Scalar(0);
    if (norm == ErrorNorm::Spectral) return singular_values(k);
    return std::sqrt(singular_values.tail(n - k).squaredNorm());
}

template <typename Scalar>
Scalar best_rank_k_error(const SparseMatrixCsr<Scalar>& A, Index k, ErrorNorm norm,
                         std::uint64_t entry_limit = kDefaultOracleEntryLimit) {
    Matrix<Scalar> dense = A.toDense();
    OracleSvd<Scalar> o = oracle_svd(dense, entry_limit);
    return best_rank_k_error(o.S, k, norm);
}

/// Per-column absolute Pearson correlation between two sets of principal
/// components; the absolute value makes the metric invariant to the sign
/// ambiguity of singular vectors.
template <typename DerivedA, typename DerivedB>
Vector<typename DerivedA::Scalar> pc_correlation(const Eigen::MatrixBase<DerivedA>& U_test,
                                                 const Eigen::MatrixBase<DerivedB>& U_ref) {
    using Scalar = typename DerivedA::Scalar;
    detail::require(U_test.rows() == U_ref.rows() && U_test.cols() == U_ref.cols(),
                    "pc_correlation: shape mismatch");
    detail::require(U_test.rows() >= 2, "pc_correlation: need at least two samples");

    const Index k = U_test.cols();
    Vector<Scalar> corr(k);
    for (Index j = 0; j < k; ++j) {
        Vector<Scalar> x = U_test.col(j).array() - U_test.col(j).mean();
        Vector<Scalar> y = U_ref.col(j).array() - U_ref.col(j).mean();
        const Scalar denom = x.norm() * y.norm();
        if (denom == Scalar(0))
            throw std::invalid_argument("pc_correlation: zero-variance column " + std::to_string(j));
        corr(j) = std::abs(x.dot(y) / denom);
    }
    return corr;
}

namespace detail {

template <typename Scalar>
struct ProjectorDiffOp {
    Eigen::Ref<const Matrix<Scalar>> Q1;
    Eigen::Ref<const Matrix<Scalar>> Q2;
    Vector<Scalar> apply(const Vector<Scalar>& x) const {
        return Q1 * (Q1.transpose() * x) - Q2 * (Q2.transpose() * x);
    }
    Vector<Scalar> apply_transpose(const Vector<Scalar>& x) const { return apply(x); }
};

}  // namespace detail

/// Spectral-norm distance | Q1 Q1^T - Q2 Q2^T |_2 between the orthogonal
/// projectors spanned by two orthonormal bases, computed matrix-free.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar projector_distance(const Eigen::MatrixBase<DerivedA>& Q1,
                                             const Eigen::MatrixBase<DerivedB>& Q2) {
    using Scalar = typename DerivedA::Scalar;
    detail::require(Q1.rows() == Q2.rows(), "projector_distance: row mismatch");
    auto check_orthonormal = [](const auto& Q, const char* which) {
        Matrix<Scalar> G = Q.transpose() * Q;
        G.diagonal().array() -= Scalar(1);
        if (G.cwiseAbs().maxCoeff() > Scalar(1e-8))
            throw std::invalid_argument(std::string("projector_distance: ") + which +
                                        " is not orthonormal within 1e-8");
    };
    check_orthonormal(Q1, "first basis");
    check_orthonormal(Q2, "second basis");

    detail::ProjectorDiffOp<Scalar> op{Eigen::Ref<const Matrix<Scalar>>(Q1.derived()),
                                       Eigen::Ref<const Matrix<Scalar>>(Q2.derived())};
    return detail::operator_two_norm<Scalar>(op, Q1.rows(), /*seed=*/0x51f15eedu);
}

/// Accuracy summary of a truncated factorization against oracle ground truth.
/// best_rank_k_err and eps_equivalent are in the spectral norm; the
/// reconstruction error is reported in both norms.
struct AccuracyReport {
    std::vector<double> singular_value_rel_err;
    double recon_err_frobenius = 0.0;
    double recon_err_spectral = 0.0;
    double best_rank_k_err = 0.0;
    double eps_equivalent = 0.0;
    std::vector<double> pc_correlations;
};

template <typename Scalar>
AccuracyReport make_accuracy_report(const SparseMatrixCsr<Scalar>& A, const SvdResult<Scalar>& r,
                                    const OracleSvd<Scalar>& oracle) {
    const Index k = r.S.size();
    detail::require(oracle.S.size() >= k, "make_accuracy_report: oracle has fewer values than k");

    AccuracyReport rep;
    rep.singular_value_rel_err.resize(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) {
        const double ref = static_cast<double>(oracle.S(i));
        rep.singular_value_rel_err[static_cast<std::size_t>(i)] =
            ref == 0.0 ? std::abs(static_cast<double>(r.S(i)))
                       : std::abs(static_cast<double>(r.S(i)) - ref) / ref;
    }
    rep.recon_err_frobenius = static_cast<double>(low_rank_error(A, r, ErrorNorm::Frobenius));
    rep.recon_err_spectral = static_cast<double>(low_rank_error(A, r, ErrorNorm::Spectral));
    rep.best_rank_k_err = static_cast<double>(best_rank_k_error(oracle.S, k, ErrorNorm::Spectral));
    rep.eps_equivalent = rep.best_rank_k_err == 0.0
                             ? 0.0
                             : rep.recon_err_spectral / rep.best_rank_k_err - 1.0;
    Vector<Scalar> corr = pc_correlation(r.U, oracle.U.leftCols(k));
    rep.pc_correlations.assign(corr.data(), corr.data() + corr.size());
    return rep;
}

inline nlohmann::ordered_json to_json(const AccuracyReport& rep) {
    nlohmann::ordered_json j;
    j["singular_value_rel_err"] = rep.singular_value_rel_err;
    j["recon_err_frobenius"] = rep.recon_err_frobenius;
    j["recon_err_spectral"] = rep.recon_err_spectral;
    j["best_rank_k_err"] = rep.best_rank_k_err;
    j["eps_equivalent"] = rep.eps_equivalent;
    j["pc_correlations"] = rep.pc_correlations;
    return j;
}

}  // namespace frpca
