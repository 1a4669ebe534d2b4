#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace frpca {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;


/// Thrown when a file cannot be read/written or is malformed.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on numerical failure: rank-deficient input where full rank is
/// required, solver non-convergence, or a memory/size guard being hit.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Truncated SVD factors. S holds the k largest singular values in
/// descending order; U is m x k, V is n x k.
template <typename Scalar>
struct SvdResult {
    Matrix<Scalar> U;
    Vector<Scalar> S;
    Matrix<Scalar> V;

    Index rank() const { return S.size(); }
};

namespace detail {

inline void require(bool condition, const char* message) {
    if (!condition) throw std::invalid_argument(message);
}

// SplitMix64 step, used to derive independent per-stage RNG streams from one
// root seed. Algorithms that must be able to share a sketch (paired runs)
// derive the sketch stream with the same tag.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

}  // namespace frpca
