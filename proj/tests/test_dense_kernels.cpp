#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "frpca/dense_kernels.hpp"
#include "frpca/validation.hpp"
#include "test_support.hpp"

#include <cmath>

using frpca::Index;
using frpca::NumericalError;
using testsupport::Matrix;
using testsupport::Vector;

TEST_CASE("gaussian_matrix: same seed gives bitwise-identical matrices") {
    Matrix a = frpca::gaussian_matrix<double>(17, 9, 123);
    Matrix b = frpca::gaussian_matrix<double>(17, 9, 123);
    Matrix c = frpca::gaussian_matrix<double>(17, 9, 124);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("gaussian_matrix: sample moments near (0, 1)") {
    Matrix g = frpca::gaussian_matrix<double>(10000, 1, 7);
    const double mean = g.mean();
    const double var = (g.array() - mean).square().sum() / (g.size() - 1);
    CHECK(std::abs(mean) < 0.05);
    CHECK(std::abs(var - 1.0) < 0.1);
}

TEST_CASE("gaussian_matrix: tall sample has full column rank") {
    Matrix g = frpca::gaussian_matrix<double>(2000, 50, 11);
    frpca::OracleSvd<double> o = frpca::oracle_svd(g);
    CHECK(o.S(49) > 0.0);
    CHECK(o.S(49) / o.S(0) > 1e-3);  // Gaussian matrices are well conditioned
}

TEST_CASE("orth: orthonormal input stays orthonormal with the same range") {
    Matrix M = Matrix::Identity(5, 3);
    Matrix Q = frpca::orth(M);
    CHECK((Q.transpose() * Q - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(testsupport::projector_gap_dense(Q, M) < 1e-14);
}

TEST_CASE("orth: near-dependent columns still produce the right projector") {
    Matrix M(3, 2);
    M << 1.0, 1.0, 1.0, 1.0 + 1e-3, 0.0, 0.0;
    Matrix Q = frpca::orth(M);
    Matrix Q_ref = testsupport::mgs_orthonormalize(M);
    CHECK((Q.transpose() * Q - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(testsupport::projector_gap_dense(Q, Q_ref) < 1e-10);
}

TEST_CASE("orth: single column is normalized") {
    Matrix M(2, 1);
    M << 3.0, 4.0;
    Matrix Q = frpca::orth(M);
    CHECK(std::abs(std::abs(Q(0, 0)) - 0.6) < 1e-15);
    CHECK(std::abs(std::abs(Q(1, 0)) - 0.8) < 1e-15);
}

TEST_CASE("orth: rank-deficient and wide inputs are rejected") {
    Matrix M(4, 2);
    M.col(0) = Vector::LinSpaced(4, 1.0, 4.0);
    M.col(1) = 2.0 * M.col(0);
    CHECK_THROWS_AS(frpca::orth(M), NumericalError);
    CHECK_THROWS_AS(frpca::orth(Matrix::Random(2, 4)), std::invalid_argument);
    CHECK_THROWS_AS(frpca::orth(Matrix::Zero(4, 2)), NumericalError);
}

TEST_CASE("lu_basis: identity columns come back unchanged") {
    Matrix M = Matrix::Identity(5, 3);
    Matrix X = frpca::lu_basis(M);
    CHECK((X - M).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lu_basis: pivoting case spans the same range as the input") {
    Matrix M(3, 2);
    M << 0.0, 1.0, 1.0, 0.0, 0.0, 0.0;
    Matrix X = frpca::lu_basis(M);
    CHECK(testsupport::projector_gap_dense(frpca::orth(X), frpca::orth(M)) < 1e-14);
}

TEST_CASE("lu_basis: random tall input preserves range") {
    Matrix M = frpca::gaussian_matrix<double>(40, 8, 3);
    Matrix X = frpca::lu_basis(M);
    CHECK(testsupport::projector_gap_dense(frpca::orth(X), frpca::orth(M)) < 1e-12);
}

TEST_CASE("lu_basis: output is a row-permuted unit lower-triangular factor") {
    Matrix M = frpca::gaussian_matrix<double>(20, 6, 9);
    Matrix X = frpca::lu_basis(M);
    // Multipliers are bounded by one under partial pivoting, and the unit
    // diagonal survives the row permutation.
    CHECK(X.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    for (Index j = 0; j < X.cols(); ++j) {
        Index ones = 0;
        for (Index i = 0; i < X.rows(); ++i)
            if (X(i, j) == 1.0) ++ones;
        CHECK(ones >= 1);
    }
}

TEST_CASE("lu_basis: rank deficiency raises") {
    Matrix M(4, 2);
    M.col(0) = Vector::LinSpaced(4, 1.0, 4.0);
    M.col(1) = -3.0 * M.col(0);
    CHECK_THROWS_AS(frpca::lu_basis(M), NumericalError);
}

TEST_CASE("eig_sym: diagonal and 2x2 hand eigenproblems") {
    Matrix D = Matrix::Zero(3, 3);
    D(0, 0) = 1.0;
    D(1, 1) = 4.0;
    D(2, 2) = 9.0;
    auto [V, d] = frpca::eig_sym(D);
    CHECK(d(0) == doctest::Approx(1.0));
    CHECK(d(1) == doctest::Approx(4.0));
    CHECK(d(2) == doctest::Approx(9.0));
    for (Index j = 0; j < 3; ++j) CHECK(V.col(j).cwiseAbs().maxCoeff() == doctest::Approx(1.0));

    Matrix B(2, 2);
    B << 2.0, 1.0, 1.0, 2.0;
    auto [W, e] = frpca::eig_sym(B);
    CHECK(e(0) == doctest::Approx(1.0));
    CHECK(e(1) == doctest::Approx(3.0));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(std::abs(W(0, 0)) - inv_sqrt2) < 1e-14);
    CHECK(W(0, 0) * W(1, 0) < 0);  // eigenvector for 1 is proportional to [1, -1]
    CHECK(W(0, 1) * W(1, 1) > 0);  // eigenvector for 3 is proportional to [1, 1]
}

TEST_CASE("eig_sym: reconstruction on a random symmetric matrix") {
    Matrix R = Matrix::Random(20, 20);
    Matrix B = 0.5 * (R + R.transpose());
    auto [V, d] = frpca::eig_sym(B);
    CHECK((V * d.asDiagonal() * V.transpose() - B).norm() / B.norm() < 1e-12);
    for (Index i = 1; i < d.size(); ++i) CHECK(d(i - 1) <= d(i));
}

TEST_CASE("eig_sym rejects asymmetric input") {
    Matrix B(2, 2);
    B << 1.0, 2.0, 0.5, 1.0;
    CHECK_THROWS_AS(frpca::eig_sym(B), std::invalid_argument);
}

TEST_CASE("eig_svd: identity and anisotropic hand cases") {
    frpca::EigSvdResult<double> r = frpca::eig_svd(Matrix(Matrix::Identity(3, 3)));
    CHECK((r.S - Vector::Ones(3)).cwiseAbs().maxCoeff() < 1e-14);

    Matrix A = Matrix::Zero(4, 2);
    A(0, 0) = 2.0;  // first column 2 e_1
    A(1, 1) = 3.0;  // second column 3 e_2
    frpca::EigSvdResult<double> t = frpca::eig_svd(A);
    CHECK(t.S(0) == doctest::Approx(2.0));
    CHECK(t.S(1) == doctest::Approx(3.0));  // ascending
}

TEST_CASE("eig_svd matches the independent Jacobi oracle") {
    Matrix A = frpca::gaussian_matrix<double>(200, 30, 17);
    frpca::EigSvdResult<double> r = frpca::eig_svd(A);
    frpca::OracleSvd<double> o = frpca::oracle_svd(A);
    for (Index i = 0; i < 30; ++i) CHECK(std::abs(r.S(29 - i) - o.S(i)) / o.S(i) < 1e-10);
    CHECK((A - r.U * r.S.asDiagonal() * r.V.transpose()).norm() / A.norm() < 1e-10);
}

TEST_CASE("eig_svd rejects rank-deficient input") {
    Matrix A(5, 3);
    A.setRandom();
    A.col(2) = A.col(0) + A.col(1);
    CHECK_THROWS_AS(frpca::eig_svd(A), NumericalError);
}

TEST_CASE("property: eig_svd factors are orthonormal, ascending, and reconstruct") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Index n = 2 + static_cast<Index>(seed % 12);
        const Index m = n + static_cast<Index>((seed * 7) % 40);
        Matrix A = frpca::gaussian_matrix<double>(m, n, 1000 + seed);
        frpca::EigSvdResult<double> r = frpca::eig_svd(A);
        CHECK((r.U.transpose() * r.U - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((r.V.transpose() * r.V - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
        for (Index i = 1; i < n; ++i) CHECK(r.S(i - 1) <= r.S(i));
        CHECK(r.S(0) >= 0.0);
        CHECK((A - r.U * r.S.asDiagonal() * r.V.transpose()).norm() / A.norm() < 1e-10);
    }
}

TEST_CASE("property: orth, lu_basis, and eig_svd all preserve the range") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Matrix M = frpca::gaussian_matrix<double>(60 + 5 * seed, 6 + (seed % 5), 500 + seed);
        Matrix Q_ref = testsupport::mgs_orthonormalize(M);
        CHECK(testsupport::projector_gap_dense(frpca::orth(M), Q_ref) < 1e-10);
        CHECK(testsupport::projector_gap_dense(frpca::orth(frpca::lu_basis(M)), Q_ref) < 1e-10);
        CHECK(testsupport::projector_gap_dense(frpca::eig_svd(M).U, Q_ref) < 1e-10);
    }
}

TEST_CASE("economic_svd_short_fat: hand cases with descending values") {
    Matrix B = Matrix::Zero(2, 5);
    B(0, 0) = 3.0;  // first row 3 e_1^T
    B(1, 1) = 4.0;  // second row 4 e_2^T
    frpca::SvdResult<double> r = frpca::economic_svd_short_fat(B);
    CHECK(r.S(0) == doctest::Approx(4.0));
    CHECK(r.S(1) == doctest::Approx(3.0));

    Matrix v(1, 6);
    v << 1, 2, 3, 4, 5, 6;
    frpca::SvdResult<double> rv = frpca::economic_svd_short_fat(v);
    CHECK(rv.S(0) == doctest::Approx(v.norm()));
    CHECK(std::abs(rv.U(0, 0)) == doctest::Approx(1.0));
}

TEST_CASE("economic_svd_short_fat matches the oracle on a random wide matrix") {
    Matrix B = frpca::gaussian_matrix<double>(7, 120, 23);
    frpca::SvdResult<double> r = frpca::economic_svd_short_fat(B);
    frpca::OracleSvd<double> o = frpca::oracle_svd(B);
    for (Index i = 0; i < 7; ++i) CHECK(std::abs(r.S(i) - o.S(i)) / o.S(i) < 1e-10);
    CHECK((B - r.U * r.S.asDiagonal() * r.V.transpose()).norm() / B.norm() < 1e-10);

    // Values are exactly the ascending eig_svd values of B^T, reversed.
    frpca::EigSvdResult<double> t = frpca::eig_svd(Matrix(B.transpose()));
    CHECK((r.S - t.S.reverse()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kernels are generic over the scalar type") {
    using MatrixF = frpca::Matrix<float>;
    MatrixF M = frpca::gaussian_matrix<float>(30, 4, 5);
    MatrixF Q = frpca::orth(M);
    CHECK((Q.transpose() * Q - MatrixF::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-5f);
    frpca::EigSvdResult<float> r = frpca::eig_svd(M);
    CHECK((M - r.U * r.S.asDiagonal() * r.V.transpose()).norm() / M.norm() < 1e-4f);

    frpca::SparseMatrixCsr<float> I(2, 2, {0, 1, 2}, {0, 1}, {1.0f, 1.0f});
    MatrixF X = MatrixF::Random(2, 3);
    CHECK((frpca::spmm(I, X) - X).norm() == 0.0f);
}
