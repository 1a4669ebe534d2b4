#pragma once

#include "frpca/types.hpp"

#include <cstdint>
#include <vector>

namespace frpca {

/// Per-operation-class flop constants. Only the QR-to-multiply ratio
/// (c_qr = 5 c_mul) is calibrated; the SVD and eigendecomposition constants
/// are configurable under the constraint that c_svd dominates c_qr and c_mul,
/// which is what makes the short-side SVD placement matter.
struct CostConstants {
    double c_mul = 1.0;
    double c_qr = 5.0;
    double c_lu = 1.0;
    double c_svd = 25.0;
    double c_eig = 25.0;

    void validate() const {
        detail::require(c_mul > 0 && c_qr > 0 && c_lu > 0 && c_svd > 0 && c_eig > 0,
                        "cost constants must be positive");
        detail::require(c_svd > c_qr && c_svd > c_mul,
                        "cost model assumes c_svd larger than c_qr and c_mul");
    }
};

/// Problem-shape inputs to the flop formulas; l = k + s is the sketch width.
/// `power` (p) feeds the baseline formulas, `passes` (q) the fast ones.
struct CostInputs {
    Index m = 0;
    Index n = 0;
    std::uint64_t nnz = 0;
    Index k = 0;
    Index s = 5;
    Index power = 0;
    Index passes = 2;

    double sketch_width() const { return static_cast<double>(k + s); }
};

enum class CostAlgorithm { BasicRpca, EigSvd, BasicRpcat, Frpca, Frpcat };

/// Analytic flop count of one algorithm. The fast-algorithm formulas are the
/// leading-order forms (LU and small-eig terms folded into the multiply
/// constant); an odd pass count evaluates the same expression at the
/// fractional multiplier (q - 2) / 2.
inline double flops(CostAlgorithm algorithm, const CostInputs& in, const CostConstants& c) {
    c.validate();
    detail::require(in.m >= 1 && in.n >= 1, "flops: dimensions must be >= 1");
    detail::require(in.k >= 0 && in.s >= 0, "flops: k and s must be >= 0");

    const double m = static_cast<double>(in.m);
    const double n = static_cast<double>(in.n);
    const double nnz = static_cast<double>(in.nnz);
    const double k = static_cast<double>(in.k);
    const double l = in.sketch_width();
    const double p = static_cast<double>(in.power);
    const double q = static_cast<double>(in.passes);
    const double qh = (q - 2.0) / 2.0;

    switch (algorithm) {
        case CostAlgorithm::BasicRpca:
            detail::require(in.power >= 0, "flops: power must be >= 0");
            return p * c.c_qr * n * l * l + (p + 1) * c.c_qr * m * l * l +
                   (2 * p + 2) * c.c_mul * nnz * l + c.c_mul * m * l * k + c.c_svd * n * l * l;
        case CostAlgorithm::EigSvd:
            return 2 * c.c_mul * m * n * n + c.c_eig * n * n * n;
        case CostAlgorithm::BasicRpcat:
            detail::require(in.power >= 0, "flops: power must be >= 0");
            return p * c.c_qr * m * l * l + (p + 1) * c.c_qr * n * l * l +
                   (2 * p + 2) * c.c_mul * nnz * l + c.c_mul * n * l * k + c.c_svd * m * l * l;
        case CostAlgorithm::Frpca:
            detail::require(in.passes >= 2, "flops: passes must be >= 2");
            return qh * c.c_mul * m * l * l + q * c.c_mul * nnz * l + c.c_mul * m * l * k +
                   2 * c.c_mul * (m + n) * l * l;
        case CostAlgorithm::Frpcat:
            detail::require(in.passes >= 2, "flops: passes must be >= 2");
            return qh * c.c_mul * n * l * l + q * c.c_mul * nnz * l + c.c_mul * n * l * k +
                   2 * c.c_mul * (m + n) * l * l;
    }
    throw std::invalid_argument("flops: unknown algorithm");
}

namespace detail {

inline void check_sp1_args(double alpha, double beta, Index q) {
    require(alpha > 0.0, "speedup model: alpha must be > 0");
    require(beta > 0.0 && beta <= 1.0, "speedup model: beta must be in (0, 1]");
    require(q >= 2, "speedup model: q must be >= 2");
}

}  // namespace detail

/// Predicted speedup of the fast algorithm over the baseline in terms of the
/// sparsity ratio alpha = t / l and shape ratio beta = n / m, keeping every
/// term of the normalized flop ratio.
inline double speedup_sp1(double alpha, double beta, Index q, const CostConstants& c) {
    c.validate();
    detail::check_sp1_args(alpha, beta, q);
    const double qd = static_cast<double>(q);
    const double num = (qd / 2 - 1) * c.c_qr * beta + (qd / 2) * c.c_qr + qd * c.c_mul * alpha +
                       c.c_mul + c.c_svd * beta;
    const double den = (qd / 2 + 1) * c.c_mul * beta + qd * c.c_mul * alpha + c.c_mul * beta +
                       2 * c.c_mul;
    return num / den;
}

/// Large-q simplification of speedup_sp1: the SVD term and the constant
/// terms, which do not grow with q, are dropped.
inline double speedup_sp1_simplified(double alpha, double beta, Index q, const CostConstants& c) {
    c.validate();
    detail::check_sp1_args(alpha, beta, q);
    const double qd = static_cast<double>(q);
    const double num = (qd / 2 - 1) * c.c_qr * beta + (qd / 2) * c.c_qr + qd * c.c_mul * alpha;
    const double den = (qd / 2 + 1) * c.c_mul * beta + qd * c.c_mul * alpha;
    return num / den;
}

/// q -> infinity limit of the speedup ratio; approaches 2 c_qr / c_mul for a
/// very sparse square matrix (alpha -> 0, beta = 1).
inline double sp1_limit(double alpha, double beta, const CostConstants& c) {
    c.validate();
    detail::require(alpha >= 0.0, "sp1_limit: alpha must be >= 0");
    detail::require(beta > 0.0, "sp1_limit: beta must be > 0");
    return (c.c_qr * beta + c.c_qr + 2 * c.c_mul * alpha) / (c.c_mul * beta + 2 * c.c_mul * alpha);
}

/// True iff the predicted speedup is strictly decreasing along an ascending
/// alpha grid (sparser matrices speed up more).
inline bool sp1_monotonicity_check(const std::vector<double>& alpha_grid, double beta, Index q,
                                   const CostConstants& c) {
    for (std::size_t i = 1; i < alpha_grid.size(); ++i)
        detail::require(alpha_grid[i - 1] < alpha_grid[i],
                        "sp1_monotonicity_check: grid must be strictly ascending");
    for (std::size_t i = 1; i < alpha_grid.size(); ++i) {
        if (speedup_sp1(alpha_grid[i], beta, q, c) >= speedup_sp1(alpha_grid[i - 1], beta, q, c))
            return false;
    }
    return true;
}

}  // namespace frpca
