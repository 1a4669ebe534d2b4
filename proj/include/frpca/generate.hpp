#pragma once

#include "frpca/dense_kernels.hpp"
#include "frpca/sparse_matrix.hpp"
#include "frpca/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace frpca {

enum class SpectrumKind { Geometric, Flat, File };

/// Recipe for a synthetic sparse test matrix with a prescribed spectrum.
/// The matrix is assembled from dense orthogonally-rotated diagonal blocks
/// (so the requested singular values are exact) and then row/column
/// shuffled; the block width sets the average nonzeros per row.
struct GenSpec {
    Index rows = 0;
    Index cols = 0;
    Index nnz_per_row = 0;
    SpectrumKind spectrum = SpectrumKind::Flat;
    double ratio = 0.9;                 // geometric decay factor
    double floor = 1e-8;                // geometric values never decay below this
    std::vector<double> file_values;    // SpectrumKind::File
    std::uint64_t seed = 0;
};

namespace detail {

inline std::vector<double> spectrum_values(const GenSpec& spec, Index count) {
    std::vector<double> sv(static_cast<std::size_t>(count));
    switch (spec.spectrum) {
        case SpectrumKind::Flat:
            std::fill(sv.begin(), sv.end(), 1.0);
            break;
        case SpectrumKind::Geometric: {
            require(spec.ratio > 0.0 && spec.ratio < 1.0, "gen: geometric ratio must be in (0, 1)");
            double v = 1.0;
            for (auto& x : sv) {
                x = std::max(v, spec.floor);
                v *= spec.ratio;
            }
            break;
        }
        case SpectrumKind::File: {
            require(!spec.file_values.empty(), "gen: spectrum file provided no values");
            std::vector<double> given = spec.file_values;
            std::sort(given.begin(), given.end(), std::greater<double>());
            require(given.back() >= 0.0, "gen: singular values must be non-negative");
            for (std::size_t i = 0; i < sv.size(); ++i)
                sv[i] = i < given.size() ? given[i] : given.back();
            break;
        }
    }
    return sv;
}

inline std::vector<Index> chunk_sizes(Index total, Index parts) {
    std::vector<Index> sizes(static_cast<std::size_t>(parts), total / parts);
    for (Index i = 0; i < total % parts; ++i) ++sizes[static_cast<std::size_t>(i)];
    return sizes;
}

}  // namespace detail

template <typename Scalar = double>
SparseMatrixCsr<Scalar> generate_sparse(const GenSpec& spec) {
    detail::require(spec.rows >= 1 && spec.cols >= 1, "gen: dimensions must be >= 1");
    detail::require(spec.nnz_per_row >= 1, "gen: nonzeros per row must be >= 1");

    const Index blocks = std::max<Index>(
        1, std::min({spec.rows, spec.cols,
                     static_cast<Index>(std::llround(static_cast<double>(spec.cols) /
                                                     static_cast<double>(spec.nnz_per_row)))}));
    const std::vector<Index> row_chunk = detail::chunk_sizes(spec.rows, blocks);
    const std::vector<Index> col_chunk = detail::chunk_sizes(spec.cols, blocks);

    Index total_rank = 0;
    std::vector<Index> block_rank(static_cast<std::size_t>(blocks));
    for (Index b = 0; b < blocks; ++b) {
        block_rank[b] = std::min(row_chunk[b], col_chunk[b]);
        total_rank += block_rank[b];
    }

    // Distribute the descending spectrum round-robin across blocks so every
    // block covers the full decay range.
    const std::vector<double> sv = detail::spectrum_values(spec, total_rank);
    std::vector<std::vector<double>> block_sv(static_cast<std::size_t>(blocks));
    {
        Index b = 0;
        for (double v : sv) {
            while (static_cast<Index>(block_sv[b].size()) >= block_rank[b]) b = (b + 1) % blocks;
            block_sv[b].push_back(v);
            b = (b + 1) % blocks;
        }
    }

    std::vector<Index> row_map(static_cast<std::size_t>(spec.rows));
    std::vector<Index> col_map(static_cast<std::size_t>(spec.cols));
    std::iota(row_map.begin(), row_map.end(), Index(0));
    std::iota(col_map.begin(), col_map.end(), Index(0));
    std::mt19937_64 rng(detail::mix_seed(spec.seed, 0x6E6Eu));
    std::shuffle(row_map.begin(), row_map.end(), rng);
    std::shuffle(col_map.begin(), col_map.end(), rng);

    using Triplet = typename SparseMatrixCsr<Scalar>::Triplet;
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(spec.rows) *
                    static_cast<std::size_t>(std::min(spec.nnz_per_row + 1, spec.cols)));

    Index row0 = 0;
    Index col0 = 0;
    for (Index b = 0; b < blocks; ++b) {
        const Index rs = row_chunk[b];
        const Index cs = col_chunk[b];
        const Index r = block_rank[b];
        Matrix<Scalar> P = orth(
            gaussian_matrix<Scalar>(rs, r, detail::mix_seed(spec.seed, 2 * b + 17)));
        Matrix<Scalar> R = orth(
            gaussian_matrix<Scalar>(cs, r, detail::mix_seed(spec.seed, 2 * b + 18)));
        Vector<Scalar> d(r);
        for (Index i = 0; i < r; ++i) d(i) = static_cast<Scalar>(block_sv[b][i]);
        Matrix<Scalar> block = P * d.asDiagonal() * R.transpose();

        for (Index j = 0; j < cs; ++j)
            for (Index i = 0; i < rs; ++i)
                entries.push_back({row_map[row0 + i], col_map[col0 + j], block(i, j)});
        row0 += rs;
        col0 += cs;
    }

    return SparseMatrixCsr<Scalar>::from_triplets(spec.rows, spec.cols, std::move(entries));
}

}  // namespace frpca
