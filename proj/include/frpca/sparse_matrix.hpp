#pragma once

#include "frpca/types.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <random>
#include <type_traits>
#include <utility>
#include <vector>

namespace frpca {

/// Compressed-sparse-row matrix. Immutable after construction; the only
/// mutable piece is an atomic counter of passes over the stored data, used
/// by the instrumented multiplication kernels.
template <typename Scalar>
class SparseMatrixCsr {
public:
    struct Triplet {
        Index row;
        Index col;
        Scalar value;
    };

    SparseMatrixCsr() : rows_(0), cols_(0), row_ptr_{0} {}

    SparseMatrixCsr(Index rows, Index cols, std::vector<Index> row_ptr,
                    std::vector<Index> col_idx, std::vector<Scalar> values)
        : rows_(rows),
          cols_(cols),
          row_ptr_(std::move(row_ptr)),
          col_idx_(std::move(col_idx)),
          values_(std::move(values)) {
        validate();
    }

    SparseMatrixCsr(const SparseMatrixCsr& other)
        : rows_(other.rows_),
          cols_(other.cols_),
          row_ptr_(other.row_ptr_),
          col_idx_(other.col_idx_),
          values_(other.values_) {}

    SparseMatrixCsr& operator=(const SparseMatrixCsr& other) {
        rows_ = other.rows_;
        cols_ = other.cols_;
        row_ptr_ = other.row_ptr_;
        col_idx_ = other.col_idx_;
        values_ = other.values_;
        return *this;
    }

    SparseMatrixCsr(SparseMatrixCsr&&) noexcept = default;
    SparseMatrixCsr& operator=(SparseMatrixCsr&&) noexcept = default;

    /// Builds a CSR matrix from unordered coordinate entries. Entries are
    /// sorted, duplicates at the same (row, col) are summed, and entries that
    /// end up exactly zero are dropped.
    static SparseMatrixCsr from_triplets(Index rows, Index cols, std::vector<Triplet> entries) {
        detail::require(rows >= 0 && cols >= 0, "from_triplets: negative dimension");
        for (const Triplet& t : entries) {
            detail::require(t.row >= 0 && t.row < rows && t.col >= 0 && t.col < cols,
                            "from_triplets: entry out of bounds");
        }
        std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });

        std::vector<Index> row_ptr(static_cast<std::size_t>(rows) + 1, 0);
        std::vector<Index> col_idx;
        std::vector<Scalar> values;
        col_idx.reserve(entries.size());
        values.reserve(entries.size());

        std::size_t i = 0;
        while (i < entries.size()) {
            const Index r = entries[i].row;
            const Index c = entries[i].col;
            Scalar sum = Scalar(0);
            while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
                sum += entries[i].value;
                ++i;
            }
            if (sum != Scalar(0)) {
                col_idx.push_back(c);
                values.push_back(sum);
                ++row_ptr[static_cast<std::size_t>(r) + 1];
            }
        }
        for (Index r = 0; r < rows; ++r) row_ptr[r + 1] += row_ptr[r];
        return SparseMatrixCsr(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
    }

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index nonZeros() const { return static_cast<Index>(values_.size()); }

    const std::vector<Index>& rowPtr() const { return row_ptr_; }
    const std::vector<Index>& colIdx() const { return col_idx_; }
    const std::vector<Scalar>& values() const { return values_; }

    Matrix<Scalar> toDense() const {
        Matrix<Scalar> dense = Matrix<Scalar>::Zero(rows_, cols_);
        for (Index i = 0; i < rows_; ++i)
            for (Index p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
                dense(i, col_idx_[p]) = values_[p];
        return dense;
    }

    Scalar squaredFrobeniusNorm() const {
        Scalar acc = Scalar(0);
        for (const Scalar& v : values_) acc += v * v;
        return acc;
    }

    /// Number of kernel passes over the stored data since the last reset.
    std::uint64_t passCount() const { return passes_.load(std::memory_order_relaxed); }
    void resetPassCount() const { passes_.store(0, std::memory_order_relaxed); }
    void recordPass() const { passes_.fetch_add(1, std::memory_order_relaxed); }

private:
    void validate() const {
        detail::require(rows_ >= 0 && cols_ >= 0, "csr: negative dimension");
        detail::require(row_ptr_.size() == static_cast<std::size_t>(rows_) + 1,
                        "csr: row_ptr length must be rows + 1");
        detail::require(row_ptr_.front() == 0, "csr: row_ptr[0] must be 0");
        detail::require(row_ptr_.back() == static_cast<Index>(values_.size()),
                        "csr: row_ptr[rows] must equal nnz");
        detail::require(col_idx_.size() == values_.size(), "csr: col_idx/values length mismatch");
        for (Index i = 0; i < rows_; ++i) {
            detail::require(row_ptr_[i] <= row_ptr_[i + 1], "csr: row_ptr must be non-decreasing");
            for (Index p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
                detail::require(col_idx_[p] >= 0 && col_idx_[p] < cols_, "csr: column index out of range");
                if (p > row_ptr_[i])
                    detail::require(col_idx_[p - 1] < col_idx_[p],
                                    "csr: column indices must be strictly increasing within a row");
            }
        }
    }

    Index rows_;
    Index cols_;
    std::vector<Index> row_ptr_;
    std::vector<Index> col_idx_;
    std::vector<Scalar> values_;
    mutable std::atomic<std::uint64_t> passes_{0};
};

/// Sparsity summary used by the speedup model: t = nnz / rows (average
/// nonzeros per row), alpha = t / l for sketch width l, beta = cols / rows.
struct SparsityStats {
    std::uint64_t nnz = 0;
    double t = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

inline SparsityStats make_sparsity_stats(Index rows, Index cols, std::uint64_t nnz, Index l) {
    detail::require(rows >= 1 && cols >= 1, "sparsity stats: empty matrix");
    detail::require(l >= 1, "sparsity stats: sketch width l must be >= 1");
    SparsityStats s;
    s.nnz = nnz;
    s.t = static_cast<double>(nnz) / static_cast<double>(rows);
    s.alpha = s.t / static_cast<double>(l);
    s.beta = static_cast<double>(cols) / static_cast<double>(rows);
    return s;
}

template <typename Scalar>
SparsityStats nnz_stats(const SparseMatrixCsr<Scalar>& A, Index l) {
    return make_sparsity_stats(A.rows(), A.cols(), static_cast<std::uint64_t>(A.nonZeros()), l);
}

/// Dense result of A * X. One pass over A.
template <typename Scalar, typename Derived>
Matrix<Scalar> spmm(const SparseMatrixCsr<Scalar>& A, const Eigen::MatrixBase<Derived>& X_expr) {
    static_assert(std::is_same_v<typename Derived::Scalar, Scalar>,
                  "spmm: scalar types must match");
    Eigen::Ref<const Matrix<Scalar>> X(X_expr.derived());
    detail::require(X.rows() == A.cols(), "spmm: inner dimensions do not match");
    const Index m = A.rows();
    const Index ncols = X.cols();
    const auto& row_ptr = A.rowPtr();
    const auto& col_idx = A.colIdx();
    const auto& values = A.values();

    Matrix<Scalar> Y(m, ncols);
    if (m == 0 || ncols == 0) {
        A.recordPass();
        return Y;
    }
    for (Index c = 0; c < ncols; ++c) {
        const Scalar* x = X.data() + c * X.outerStride();
        Scalar* y = Y.data() + c * m;
        for (Index i = 0; i < m; ++i) {
            Scalar acc = Scalar(0);
            for (Index p = row_ptr[i]; p < row_ptr[i + 1]; ++p) acc += values[p] * x[col_idx[p]];
            y[i] = acc;
        }
    }
    A.recordPass();
    return Y;
}

/// Dense result of A^T * Y without materializing the transposed structure:
/// rows of A are scattered into the output, column by column. One pass over A.
template <typename Scalar, typename Derived>
Matrix<Scalar> spmm_transpose(const SparseMatrixCsr<Scalar>& A,
                              const Eigen::MatrixBase<Derived>& Y_expr) {
    static_assert(std::is_same_v<typename Derived::Scalar, Scalar>,
                  "spmm_transpose: scalar types must match");
    Eigen::Ref<const Matrix<Scalar>> Y(Y_expr.derived());
    detail::require(Y.rows() == A.rows(), "spmm_transpose: inner dimensions do not match");
    const Index m = A.rows();
    const Index ncols = Y.cols();
    const auto& row_ptr = A.rowPtr();
    const auto& col_idx = A.colIdx();
    const auto& values = A.values();

    Matrix<Scalar> Z = Matrix<Scalar>::Zero(A.cols(), ncols);
    if (m == 0 || ncols == 0) {
        A.recordPass();
        return Z;
    }
    const Index n = A.cols();
    for (Index c = 0; c < ncols; ++c) {
        const Scalar* y = Y.data() + c * Y.outerStride();
        Scalar* z = Z.data() + c * n;
        for (Index i = 0; i < m; ++i) {
            const Scalar yi = y[i];
            if (yi == Scalar(0)) continue;
            for (Index p = row_ptr[i]; p < row_ptr[i + 1]; ++p) z[col_idx[p]] += values[p] * yi;
        }
    }
    A.recordPass();
    return Z;
}

/// Explicitly transposed copy (counting sort over columns). Test and I/O
/// helper; the algorithms themselves never build this.
template <typename Scalar>
SparseMatrixCsr<Scalar> transpose(const SparseMatrixCsr<Scalar>& A) {
    const Index m = A.rows();
    const Index n = A.cols();
    const auto& row_ptr = A.rowPtr();
    const auto& col_idx = A.colIdx();
    const auto& values = A.values();

    std::vector<Index> t_ptr(static_cast<std::size_t>(n) + 1, 0);
    for (Index c : col_idx) ++t_ptr[c + 1];
    for (Index c = 0; c < n; ++c) t_ptr[c + 1] += t_ptr[c];

    std::vector<Index> t_idx(values.size());
    std::vector<Scalar> t_val(values.size());
    std::vector<Index> next(t_ptr.begin(), t_ptr.end() - 1);
    for (Index i = 0; i < m; ++i) {
        for (Index p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            const Index dst = next[col_idx[p]]++;
            t_idx[dst] = i;
            t_val[dst] = values[p];
        }
    }
    return SparseMatrixCsr<Scalar>(n, m, std::move(t_ptr), std::move(t_idx), std::move(t_val));
}

/// Keeps each stored entry independently with probability keep_fraction and
/// re-compacts. keep_fraction = 1 reproduces the input exactly.
template <typename Scalar>
SparseMatrixCsr<Scalar> sparsify(const SparseMatrixCsr<Scalar>& A, double keep_fraction,
                                 std::uint64_t seed) {
    detail::require(keep_fraction > 0.0 && keep_fraction <= 1.0,
                    "sparsify: keep fraction must be in (0, 1]");
    std::mt19937_64 rng(detail::mix_seed(seed, 0x5Au));
    std::bernoulli_distribution keep(keep_fraction);

    const auto& row_ptr = A.rowPtr();
    const auto& col_idx = A.colIdx();
    const auto& values = A.values();

    std::vector<Index> out_ptr(static_cast<std::size_t>(A.rows()) + 1, 0);
    std::vector<Index> out_idx;
    std::vector<Scalar> out_val;
    out_idx.reserve(values.size());
    out_val.reserve(values.size());
    for (Index i = 0; i < A.rows(); ++i) {
        for (Index p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            if (keep(rng)) {
                out_idx.push_back(col_idx[p]);
                out_val.push_back(values[p]);
                ++out_ptr[static_cast<std::size_t>(i) + 1];
            }
        }
    }
    for (Index i = 0; i < A.rows(); ++i) out_ptr[i + 1] += out_ptr[i];
    return SparseMatrixCsr<Scalar>(A.rows(), A.cols(), std::move(out_ptr), std::move(out_idx),
                                   std::move(out_val));
}

}  // namespace frpca
