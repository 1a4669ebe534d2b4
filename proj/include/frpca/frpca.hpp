#pragma once

// Umbrella header: randomized truncated PCA/SVD for sparse matrices.

#include "frpca/types.hpp"
#include "frpca/sparse_matrix.hpp"
#include "frpca/matrix_market.hpp"
#include "frpca/dense_kernels.hpp"
#include "frpca/randsvd.hpp"
#include "frpca/flop_model.hpp"
#include "frpca/validation.hpp"
#include "frpca/generate.hpp"
