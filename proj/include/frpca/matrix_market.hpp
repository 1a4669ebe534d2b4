#pragma once

#include "frpca/sparse_matrix.hpp"
#include "frpca/types.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace frpca {

namespace detail {

inline std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace detail

/// Reads a Matrix Market coordinate file (real, general or symmetric).
/// Symmetric storage is expanded to full; duplicate coordinates are summed.
template <typename Scalar = double>
SparseMatrixCsr<Scalar> load_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line)) throw IoError(path + ": empty file");

    std::istringstream banner(line);
    std::string tag, object, format, field, symmetry;
    banner >> tag >> object >> format >> field >> symmetry;
    if (tag != "%%MatrixMarket") throw IoError(path + ": missing %%MatrixMarket banner");
    object = detail::lowercase(object);
    format = detail::lowercase(format);
    field = detail::lowercase(field);
    symmetry = detail::lowercase(symmetry);
    if (object != "matrix" || format != "coordinate")
        throw IoError(path + ": only coordinate matrices are supported");
    if (field != "real" && field != "integer")
        throw IoError(path + ": only real-valued matrices are supported");
    if (symmetry != "general" && symmetry != "symmetric")
        throw IoError(path + ": only general or symmetric storage is supported");
    const bool symmetric = symmetry == "symmetric";

    // Skip comments and blank lines up to the size line.
    do {
        if (!std::getline(in, line)) throw IoError(path + ": missing size line");
    } while (line.empty() || line[0] == '%');

    long long rows = -1, cols = -1, nnz = -1;
    {
        std::istringstream sizes(line);
        if (!(sizes >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0)
            throw IoError(path + ": malformed size line '" + line + "'");
    }
    constexpr long long index_max = std::numeric_limits<Index>::max();
    if (rows > index_max || cols > index_max || nnz > index_max)
        throw IoError(path + ": dimensions overflow the index type");
    if (symmetric && rows != cols) throw IoError(path + ": symmetric matrix must be square");

    using Triplet = typename SparseMatrixCsr<Scalar>::Triplet;
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
    for (long long e = 0; e < nnz; ++e) {
        do {
            if (!std::getline(in, line))
                throw IoError(path + ": unexpected end of file after " + std::to_string(e) +
                              " entries");
        } while (line.empty() || line[0] == '%');

        std::istringstream entry(line);
        long long i = 0, j = 0;
        double v = 0.0;
        if (!(entry >> i >> j >> v))
            throw IoError(path + ": malformed entry line '" + line + "'");
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw IoError(path + ": entry (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") outside declared dimensions");
        const Index r = static_cast<Index>(i - 1);
        const Index c = static_cast<Index>(j - 1);
        entries.push_back({r, c, static_cast<Scalar>(v)});
        if (symmetric && r != c) entries.push_back({c, r, static_cast<Scalar>(v)});
    }

    return SparseMatrixCsr<Scalar>::from_triplets(static_cast<Index>(rows),
                                                  static_cast<Index>(cols), std::move(entries));
}

/// Writes general coordinate format with 17 significant digits, enough to
/// round-trip IEEE doubles exactly.
template <typename Scalar>
void write_matrix_market(const std::string& path, const SparseMatrixCsr<Scalar>& A) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");

    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.rows() << " " << A.cols() << " " << A.nonZeros() << "\n";

    const auto& row_ptr = A.rowPtr();
    const auto& col_idx = A.colIdx();
    const auto& values = A.values();
    char buf[64];
    for (Index i = 0; i < A.rows(); ++i) {
        for (Index p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
            std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(values[p]));
            out << (i + 1) << " " << (col_idx[p] + 1) << " " << buf << "\n";
        }
    }
    if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace frpca
