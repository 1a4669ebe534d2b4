#pragma once

#include "frpca/dense_kernels.hpp"
#include "frpca/sparse_matrix.hpp"
#include "frpca/types.hpp"

#include <chrono>
#include <type_traits>
#include <cstdint>
#include <string>

namespace frpca {

enum class PcaAlgorithm { BasicRpca, BasicRpcat, EigSvds, Frpca, Frpcat, Auto };

inline const char* algorithm_name(PcaAlgorithm a) {
    switch (a) {
        case PcaAlgorithm::BasicRpca: return "basic";
        case PcaAlgorithm::BasicRpcat: return "basict";
        case PcaAlgorithm::EigSvds: return "eigsvds";
        case PcaAlgorithm::Frpca: return "frpca";
        case PcaAlgorithm::Frpcat: return "frpcat";
        case PcaAlgorithm::Auto: return "auto";
    }
    return "unknown";
}

/// Shared configuration for all PCA algorithms. `passes` (q >= 2, total
/// passes over the matrix) drives the fast algorithms; `power` (p >= 0)
/// drives the baselines. The two coincide for q = 2p + 2.
struct PcaConfig {
    Index k = 0;
    Index oversample = 5;
    Index passes = 2;
    Index power = 0;
    std::uint64_t seed = 0;
    bool deterministic = false;

    Index sketch_width() const { return k + oversample; }
};

/// Per-run instrumentation, filled when a non-null pointer is passed to an
/// algorithm. `basis` receives the final orthonormal range basis when
/// capture_basis is set (used by the projector-equivalence checks).
template <typename Scalar>
struct RunStats {
    double sketch_seconds = 0.0;
    double power_seconds = 0.0;
    double finalize_seconds = 0.0;
    std::uint64_t passes_over_matrix = 0;
    bool capture_basis = false;
    Matrix<Scalar> basis;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr std::uint64_t kSketchStreamTag = 0xA11CEull;

// The sketch stream depends only on the root seed, so a fast algorithm and
// its baseline counterpart draw the same Gaussian matrix for equal shapes.
template <typename Scalar>
Matrix<Scalar> sketch_matrix(Index rows, Index cols, const PcaConfig& cfg,
                             const Matrix<Scalar>* injected) {
    if (injected != nullptr) {
        require(injected->rows() == rows && injected->cols() == cols,
                "injected sketch has the wrong shape");
        return *injected;
    }
    return gaussian_matrix<Scalar>(rows, cols, mix_seed(cfg.seed, kSketchStreamTag));
}

inline void check_common(const PcaConfig& cfg) {
    require(cfg.k >= 1, "config: rank k must be >= 1");
    require(cfg.oversample >= 0, "config: oversampling must be >= 0");
}

template <typename Scalar>
SvdResult<Scalar> truncate_descending(const Matrix<Scalar>& U_full, const Vector<Scalar>& S_full,
                                      const Matrix<Scalar>& V_full, Index k) {
    SvdResult<Scalar> out;
    out.U = U_full.leftCols(k);
    out.S = S_full.head(k);
    out.V = V_full.leftCols(k);
    return out;
}

}  // namespace detail

/// Baseline randomized PCA: Gaussian sketch on the right, QR
/// re-orthonormalization after every multiplication in the power loop, small
/// SVD of B = Q^T A. Costs 2p + 2 passes over the matrix.
template <typename Scalar>
SvdResult<Scalar> basic_rpca(const SparseMatrixCsr<Scalar>& A, const PcaConfig& cfg,
                             std::type_identity_t<RunStats<Scalar>>* stats = nullptr,
                             const std::type_identity_t<Matrix<Scalar>>* omega = nullptr) {
    detail::check_common(cfg);
    detail::require(cfg.power >= 0, "basic_rpca: power p must be >= 0");
    const Index l = cfg.sketch_width();
    detail::require(l <= std::min(A.rows(), A.cols()),
                    "basic_rpca: k + oversample must be <= min(rows, cols)");

    const std::uint64_t passes0 = A.passCount();
    auto t0 = detail::Clock::now();
    Matrix<Scalar> Omega = detail::sketch_matrix<Scalar>(A.cols(), l, cfg, omega);
    Matrix<Scalar> Q = orth(spmm(A, Omega));
    const double t_sketch = detail::seconds_since(t0);

    t0 = detail::Clock::now();
    for (Index i = 0; i < cfg.power; ++i) {
        Matrix<Scalar> G = orth(spmm_transpose(A, Q));
        Q = orth(spmm(A, G));
    }
    const double t_power = detail::seconds_since(t0);

    t0 = detail::Clock::now();
    Matrix<Scalar> B = spmm_transpose(A, Q).transpose();  // Q^T A, l x n
    SvdResult<Scalar> svd = economic_svd_short_fat(B);
    Matrix<Scalar> U_full = Q * svd.U;
    SvdResult<Scalar> out = detail::truncate_descending(U_full, svd.S, svd.V, cfg.k);
    if (stats != nullptr) {
        stats->sketch_seconds = t_sketch;
        stats->power_seconds = t_power;
        stats->finalize_seconds = detail::seconds_since(t0);
        stats->passes_over_matrix = A.passCount() - passes0;
        if (stats->capture_basis) stats->basis = Q;
    }
    return out;
}

/// Baseline with the sketch applied on the left, for matrices with more
/// columns than rows: the small SVD runs on (A Q)^T instead of Q^T A.
template <typename Scalar>
SvdResult<Scalar> basic_rpcat(const SparseMatrixCsr<Scalar>& A, const PcaConfig& cfg,
                              std::type_identity_t<RunStats<Scalar>>* stats = nullptr,
                              const std::type_identity_t<Matrix<Scalar>>* omega = nullptr) {
    detail::check_common(cfg);
    detail::require(cfg.power >= 0, "basic_rpcat: power p must be >= 0");
    const Index l = cfg.sketch_width();
    detail::require(l <= std::min(A.rows(), A.cols()),
                    "basic_rpcat: k + oversample must be <= min(rows, cols)");

    const std::uint64_t passes0 = A.passCount();
    auto t0 = detail::Clock::now();
    Matrix<Scalar> Omega = detail::sketch_matrix<Scalar>(l, A.rows(), cfg, omega);
    // (Omega A)^T = A^T Omega^T, computed without forming A^T.
    Matrix<Scalar> Q = orth(spmm_transpose(A, Omega.transpose()));
    const double t_sketch = detail::seconds_since(t0);

    t0 = detail::Clock::now();
    for (Index i = 0; i < cfg.power; ++i) {
        Matrix<Scalar> G = orth(spmm(A, Q));
        Q = orth(spmm_transpose(A, G));
    }
    const double t_power = detail::seconds_since(t0);

    t0 = detail::Clock::now();
    Matrix<Scalar> B = spmm(A, Q).transpose();  // (A Q)^T, l x m
    SvdResult<Scalar> svd = economic_svd_short_fat(B);
    Matrix<Scalar> V_full = Q * svd.U;
    SvdResult<Scalar> out = detail::truncate_descending(svd.V, svd.S, V_full, cfg.k);
    if (stats != nullptr) {
        stats->sketch_seconds = t_sketch;
        stats->power_seconds = t_power;
        stats->finalize_seconds = detail::seconds_since(t0);
        stats->passes_over_matrix = A.passCount() - passes0;
        if (stats->capture_basis) stats->basis = Q;
    }
    return out;
}

/// Deterministic truncated SVD through the dense n x n Gram matrix. Exact up
/// to eigensolver tolerance, but only viable for modest column counts; the
/// guard makes the quadratic-memory failure mode an explicit error.
template <typename Scalar>
SvdResult<Scalar> eig_svds(const SparseMatrixCsr<Scalar>& A, Index k, Index gram_limit = 20000) {
    detail::require(A.rows() >= A.cols(), "eig_svds: requires rows >= cols");
    detail::require(k >= 1 && k <= A.cols(), "eig_svds: k must be in [1, cols]");
    if (A.cols() > gram_limit)
        throw NumericalError("eig_svds: memory guard: Gram matrix would be " +
                             std::to_string(A.cols()) + "^2, limit " + std::to_string(gram_limit));

    const Index n = A.cols();
    Matrix<Scalar> B = Matrix<Scalar>::Zero(n, n);
    const auto& row_ptr = A.rowPtr();
    const auto& col_idx = A.colIdx();
    const auto& values = A.values();
    for (Index i = 0; i < A.rows(); ++i) {
        for (Index p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            const Scalar v = values[p];
            const Index c = col_idx[p];
            for (Index q = row_ptr[i]; q < row_ptr[i + 1]; ++q)
                B(col_idx[q], c) += values[q] * v;
        }
    }
    A.recordPass();

    Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(B);
    if (es.info() != Eigen::Success)
        throw NumericalError("eig_svds: eigendecomposition failed to converge");

    const Vector<Scalar>& D = es.eigenvalues();  // ascending
    const Scalar lambda_max = D(n - 1);
    const Scalar tol = static_cast<Scalar>(n) * std::numeric_limits<Scalar>::epsilon() * lambda_max;
    if (lambda_max <= Scalar(0) || D(n - k) <= tol)
        throw NumericalError("eig_svds: matrix has numerical rank below k");

    SvdResult<Scalar> out;
    out.S.resize(k);
    out.V.resize(n, k);
    for (Index j = 0; j < k; ++j) {
        out.S(j) = std::sqrt(D(n - 1 - j));
        out.V.col(j) = es.eigenvectors().col(n - 1 - j);
    }
    out.U.noalias() = spmm(A, out.V) * out.S.cwiseInverse().asDiagonal();
    return out;
}

/// Fast randomized PCA for matrices with more columns than rows (m <= n).
/// The pass parameter q counts every traversal of the sparse matrix and may
/// be odd; LU extraction replaces QR inside the power loop and a Gram-based
/// economic SVD both orthonormalizes the final basis and factors the
/// projected matrix. Equivalent to basic_rpca with p = (q - 2) / 2.
template <typename Scalar>
SvdResult<Scalar> frpca(const SparseMatrixCsr<Scalar>& A, const PcaConfig& cfg,
                        std::type_identity_t<RunStats<Scalar>>* stats = nullptr,
                        const std::type_identity_t<Matrix<Scalar>>* omega = nullptr) {
    detail::check_common(cfg);
    detail::require(A.rows() <= A.cols(), "frpca: requires rows <= cols (use frpcat otherwise)");
    detail::require(cfg.passes >= 2, "frpca: pass count q must be >= 2");
    const Index l = cfg.sketch_width();
    detail::require(l <= A.rows(), "frpca: k + oversample must be <= rows");

    const Index q = cfg.passes;
    const Index loops = (q - 1) / 2;
    const std::uint64_t passes0 = A.passCount();

    auto t0 = detail::Clock::now();
    Matrix<Scalar> Q;
    if (q % 2 == 0) {
        Matrix<Scalar> Omega = detail::sketch_matrix<Scalar>(A.cols(), l, cfg, omega);
        Matrix<Scalar> Y = spmm(A, Omega);
        Q = (q > 2) ? lu_basis(Y) : eig_svd(Y).U;
    } else {
        Q = detail::sketch_matrix<Scalar>(A.rows(), l, cfg, omega);
    }
    const double t_sketch = detail::seconds_since(t0);

    t0 = detail::Clock::now();
    for (Index i = 1; i <= loops; ++i) {
        Matrix<Scalar> Y = spmm(A, spmm_transpose(A, Q));
        Q = (i == loops) ? eig_svd(Y).U : lu_basis(Y);
    }
    const double t_power = detail::seconds_since(t0);

    t0 = detail::Clock::now();
    EigSvdResult<Scalar> f = eig_svd(spmm_transpose(A, Q));  // A^T Q, n x l
    const Index s = cfg.oversample;
    SvdResult<Scalar> out;
    out.U.noalias() = Q * f.V.middleCols(s, cfg.k).rowwise().reverse();
    out.V = f.U.middleCols(s, cfg.k).rowwise().reverse();
    out.S = f.S.segment(s, cfg.k).reverse();
    if (stats != nullptr) {
        stats->sketch_seconds = t_sketch;
        stats->power_seconds = t_power;
        stats->finalize_seconds = detail::seconds_since(t0);
        stats->passes_over_matrix = A.passCount() - passes0;
        if (stats->capture_basis) stats->basis = Q;
    }
    return out;
}

/// Mirror of frpca for matrices with more rows than columns (m >= n): the
/// sketch is applied on the left and the final economic SVD runs on A Q.
/// Equivalent to basic_rpcat with p = (q - 2) / 2.
template <typename Scalar>
SvdResult<Scalar> frpcat(const SparseMatrixCsr<Scalar>& A, const PcaConfig& cfg,
                         std::type_identity_t<RunStats<Scalar>>* stats = nullptr,
                         const std::type_identity_t<Matrix<Scalar>>* omega = nullptr) {
    detail::check_common(cfg);
    detail::require(A.rows() >= A.cols(), "frpcat: requires rows >= cols (use frpca otherwise)");
    detail::require(cfg.passes >= 2, "frpcat: pass count q must be >= 2");
    const Index l = cfg.sketch_width();
    detail::require(l <= A.cols(), "frpcat: k + oversample must be <= cols");

    const Index q = cfg.passes;
    const Index loops = (q - 1) / 2;
    const std::uint64_t passes0 = A.passCount();

    auto t0 = detail::Clock::now();
    Matrix<Scalar> Q;
    if (q % 2 == 0) {
        Matrix<Scalar> Omega = detail::sketch_matrix<Scalar>(l, A.rows(), cfg, omega);
        Matrix<Scalar> Y = spmm_transpose(A, Omega.transpose());  // (Omega A)^T, n x l
        Q = (q == 2) ? eig_svd(Y).U : lu_basis(Y);
    } else {
        Q = detail::sketch_matrix<Scalar>(A.cols(), l, cfg, omega);
    }
    const double t_sketch = detail::seconds_since(t0);

    t0 = detail::Clock::now();
    for (Index i = 1; i <= loops; ++i) {
        Matrix<Scalar> Y = spmm_transpose(A, spmm(A, Q));
        Q = (i == loops) ? eig_svd(Y).U : lu_basis(Y);
    }
    const double t_power = detail::seconds_since(t0);

    t0 = detail::Clock::now();
    EigSvdResult<Scalar> f = eig_svd(spmm(A, Q));  // A Q, m x l
    const Index s = cfg.oversample;
    SvdResult<Scalar> out;
    out.U = f.U.middleCols(s, cfg.k).rowwise().reverse();
    out.V.noalias() = Q * f.V.middleCols(s, cfg.k).rowwise().reverse();
    out.S = f.S.segment(s, cfg.k).reverse();
    if (stats != nullptr) {
        stats->sketch_seconds = t_sketch;
        stats->power_seconds = t_power;
        stats->finalize_seconds = detail::seconds_since(t0);
        stats->passes_over_matrix = A.passCount() - passes0;
        if (stats->capture_basis) stats->basis = Q;
    }
    return out;
}

template <typename Scalar>
struct AutoPcaResult {
    SvdResult<Scalar> svd;
    PcaAlgorithm dispatched = PcaAlgorithm::Auto;
};

/// Shape-aware dispatch: frpca when the matrix has more columns, frpcat when
/// it has more rows. Square matrices go to frpcat, whose final economic SVD
/// acts on the taller block.
template <typename Scalar>
AutoPcaResult<Scalar> auto_pca(const SparseMatrixCsr<Scalar>& A, const PcaConfig& cfg,
                               std::type_identity_t<RunStats<Scalar>>* stats = nullptr) {
    AutoPcaResult<Scalar> out;
    if (A.rows() < A.cols()) {
        out.dispatched = PcaAlgorithm::Frpca;
        out.svd = frpca(A, cfg, stats);
    } else {
        out.dispatched = PcaAlgorithm::Frpcat;
        out.svd = frpcat(A, cfg, stats);
    }
    return out;
}

}  // namespace frpca
