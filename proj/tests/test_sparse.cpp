#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "frpca/matrix_market.hpp"
#include "frpca/sparse_matrix.hpp"
#include "test_support.hpp"

#include <cstdio>
#include <fstream>
#include <string>

using frpca::Index;
using frpca::IoError;
using testsupport::Csr;
using testsupport::Matrix;

namespace {

std::string temp_path(const std::string& name) { return "tmp_sparse_" + name; }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("from_triplets sorts, sums duplicates, and drops zeros") {
    std::vector<Csr::Triplet> entries = {
        {1, 2, 3.0}, {0, 1, 1.0}, {1, 2, -1.0}, {0, 0, 2.0}, {2, 0, 5.0}, {2, 0, -5.0}};
    Csr A = Csr::from_triplets(3, 3, entries);
    CHECK(A.nonZeros() == 3);  // (1,2) summed to 2, (2,0) cancelled away
    CHECK(A.rowPtr() == std::vector<Index>{0, 2, 3, 3});
    CHECK(A.colIdx() == std::vector<Index>{0, 1, 2});
    CHECK(A.values() == std::vector<double>{2.0, 1.0, 2.0});
}

TEST_CASE("constructor rejects malformed CSR arrays") {
    CHECK_THROWS_AS(Csr(2, 2, {0, 1}, {0}, {1.0}), std::invalid_argument);          // row_ptr short
    CHECK_THROWS_AS(Csr(2, 2, {0, 2, 1}, {0, 1}, {1.0, 1.0}), std::invalid_argument);  // decreasing
    CHECK_THROWS_AS(Csr(2, 2, {0, 1, 2}, {0, 5}, {1.0, 1.0}), std::invalid_argument);  // col range
    CHECK_THROWS_AS(Csr(1, 3, {0, 2}, {1, 1}, {1.0, 1.0}), std::invalid_argument);  // non-increasing
    CHECK_THROWS_AS(Csr::from_triplets(2, 2, {{0, 2, 1.0}}), std::invalid_argument);
}

TEST_CASE("spmm: identity leaves X unchanged") {
    Csr I = testsupport::diag_sparse({1, 1, 1}, 3, 3);
    Matrix X = Matrix::Random(3, 2);
    CHECK((spmm(I, X) - X).norm() == doctest::Approx(0.0));
}

TEST_CASE("spmm: hand-checked diagonal product") {
    Csr D = testsupport::diag_sparse({2, 3}, 2, 2);
    Matrix X(2, 1);
    X << 1, 1;
    Matrix Y = spmm(D, X);
    CHECK(Y(0, 0) == 2.0);
    CHECK(Y(1, 0) == 3.0);
}

TEST_CASE("spmm matches the dense triple-loop reference") {
    Csr A = testsupport::random_sparse(50, 40, 0.05, 7);
    Matrix X = Matrix::Random(40, 7);
    Matrix ref = testsupport::ref_multiply(A.toDense(), X);
    CHECK((spmm(A, X) - ref).norm() / ref.norm() < 1e-13);
}

TEST_CASE("spmm_transpose: identity and hand expansion") {
    Csr I = testsupport::diag_sparse({1, 1, 1, 1}, 4, 4);
    Matrix Y = Matrix::Random(4, 3);
    CHECK((spmm_transpose(I, Y) - Y).norm() == doctest::Approx(0.0));

    // A = [[1,0,2],[0,3,0]], y = [1,1] -> A^T y = [1,3,2]
    Csr A = Csr::from_triplets(2, 3, {{0, 0, 1.0}, {0, 2, 2.0}, {1, 1, 3.0}});
    Matrix y(2, 1);
    y << 1, 1;
    Matrix z = spmm_transpose(A, y);
    CHECK(z(0, 0) == 1.0);
    CHECK(z(1, 0) == 3.0);
    CHECK(z(2, 0) == 2.0);
}

TEST_CASE("spmm_transpose matches densify-then-transpose reference") {
    Csr A = testsupport::random_sparse(60, 35, 0.1, 11);
    Matrix Y = Matrix::Random(60, 6);
    Matrix ref = testsupport::ref_multiply(A.toDense().transpose(), Y);
    CHECK((spmm_transpose(A, Y) - ref).norm() / ref.norm() < 1e-13);
}

TEST_CASE("property: transpose kernel agrees with explicit transpose") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Csr A = testsupport::random_sparse(30 + 3 * seed, 25 + 2 * seed, 0.15, seed + 100);
        Csr At = transpose(A);
        Matrix Y = Matrix::Random(A.rows(), 4);
        Matrix a = spmm_transpose(A, Y);
        Matrix b = spmm(At, Y);
        CHECK((a - b).norm() <= 1e-12 * std::max(1.0, a.norm()));
        CHECK((At.toDense() - A.toDense().transpose()).norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("property: spmm equals densified product on random instances") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Csr A = testsupport::random_sparse(20 + seed, 30 - seed, 0.2, seed + 40);
        Matrix X = Matrix::Random(A.cols(), 5);
        Matrix ref = A.toDense() * X;
        CHECK((spmm(A, X) - ref).norm() <= 1e-12 * std::max(1.0, ref.norm()));
    }
}

TEST_CASE("kernel pass counter increments once per call") {
    Csr A = testsupport::random_sparse(20, 20, 0.2, 1);
    A.resetPassCount();
    Matrix X = Matrix::Random(20, 3);
    spmm(A, X);
    spmm_transpose(A, X);
    CHECK(A.passCount() == 2);
}

TEST_CASE("sparsify: keep fraction one is the identity") {
    Csr A = testsupport::random_sparse(40, 40, 0.2, 3);
    Csr B = sparsify(A, 1.0, 99);
    CHECK(B.rowPtr() == A.rowPtr());
    CHECK(B.colIdx() == A.colIdx());
    CHECK(B.values() == A.values());
}

TEST_CASE("sparsify: kept count concentrates around keep_fraction * nnz") {
    // 100x100 dense-as-sparse = 10^4 entries.
    Csr A = testsupport::random_sparse(100, 100, 1.0, 5);
    REQUIRE(A.nonZeros() == 10000);
    const double f = 0.3;
    Csr B = sparsify(A, f, 17);
    const double expected = f * 10000;
    CHECK(std::abs(B.nonZeros() - expected) < 5.0 * std::sqrt(10000.0));
}

TEST_CASE("sparsify: 97 per row thinned toward 24 and 9 per row") {
    // Mirrors the data-preparation protocol: an average of 97 nonzeros per
    // row reduced by keeping 24/97 and 9/97 of the entries.
    const Index rows = 300, cols = 97;
    Csr A = testsupport::random_sparse(rows, cols, 1.0, 21);
    const double per_row = static_cast<double>(A.nonZeros()) / rows;
    REQUIRE(per_row == doctest::Approx(97.0));

    Csr B = sparsify(A, 24.0 / 97.0, 1);
    Csr C = sparsify(A, 9.0 / 97.0, 2);
    CHECK(static_cast<double>(B.nonZeros()) / rows == doctest::Approx(24.0).epsilon(0.05));
    CHECK(static_cast<double>(C.nonZeros()) / rows == doctest::Approx(9.0).epsilon(0.10));
    CHECK(B.rows() == A.rows());
    CHECK(B.cols() == A.cols());
}

TEST_CASE("sparsify rejects keep fractions outside (0, 1]") {
    Csr A = testsupport::diag_sparse({1, 2}, 2, 2);
    CHECK_THROWS_AS(sparsify(A, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(sparsify(A, 1.5, 0), std::invalid_argument);
}

TEST_CASE("nnz_stats: identity matrix") {
    Csr I = testsupport::diag_sparse({1, 1, 1, 1, 1, 1, 1, 1, 1, 1}, 10, 10);
    frpca::SparsityStats s = nnz_stats(I, 5);
    CHECK(s.t == 1.0);
    CHECK(s.alpha == doctest::Approx(0.2));
    CHECK(s.beta == 1.0);
}

TEST_CASE("nnz_stats: MovieLens- and SNAP-shaped parameters") {
    // 270896 x 45115 with 97 nonzeros per row, sketch width 105.
    frpca::SparsityStats ml = frpca::make_sparsity_stats(270896, 45115, 97ull * 270896ull, 105);
    CHECK(ml.t == doctest::Approx(97.0));
    CHECK(ml.beta == doctest::Approx(0.16654).epsilon(1e-4));
    CHECK(ml.alpha == doctest::Approx(0.92381).epsilon(1e-4));

    // 82168 x 82168 with 12 nonzeros per row.
    frpca::SparsityStats snap = frpca::make_sparsity_stats(82168, 82168, 12ull * 82168ull, 105);
    CHECK(snap.beta == 1.0);
    CHECK(snap.alpha == doctest::Approx(0.11429).epsilon(1e-4));
}

TEST_CASE("matrix market: 3x3 identity in coordinate form") {
    const std::string path = temp_path("identity.mtx");
    write_file(path,
               "%%MatrixMarket matrix coordinate real general\n"
               "% comment line\n"
               "3 3 3\n"
               "1 1 1.0\n"
               "2 2 1.0\n"
               "3 3 1.0\n");
    Csr A = frpca::load_matrix_market(path);
    CHECK(A.rowPtr() == std::vector<Index>{0, 1, 2, 3});
    CHECK(A.values() == std::vector<double>{1.0, 1.0, 1.0});
    std::remove(path.c_str());
}

TEST_CASE("matrix market: symmetric storage expands to full") {
    const std::string path = temp_path("symmetric.mtx");
    write_file(path,
               "%%MatrixMarket matrix coordinate real symmetric\n"
               "2 2 3\n"
               "1 1 2.0\n"
               "2 1 1.0\n"
               "2 2 2.0\n");
    Csr A = frpca::load_matrix_market(path);
    CHECK(A.nonZeros() == 4);
    Matrix D = A.toDense();
    CHECK(D(0, 1) == 1.0);
    CHECK(D(1, 0) == 1.0);
    std::remove(path.c_str());
}

TEST_CASE("matrix market: duplicates are summed") {
    const std::string path = temp_path("dups.mtx");
    write_file(path,
               "%%MatrixMarket matrix coordinate real general\n"
               "2 2 3\n"
               "1 1 2.0\n"
               "1 1 3.0\n"
               "2 2 1.0\n");
    Csr A = frpca::load_matrix_market(path);
    CHECK(A.nonZeros() == 2);
    CHECK(A.toDense()(0, 0) == 5.0);
    std::remove(path.c_str());
}

TEST_CASE("matrix market: write + load round-trips exactly") {
    Csr A = testsupport::random_sparse(100, 80, 500.0 / (100.0 * 80.0), 31);
    const std::string path = temp_path("roundtrip.mtx");
    write_matrix_market(path, A);
    Csr B = frpca::load_matrix_market(path);
    CHECK(B.rows() == A.rows());
    CHECK(B.cols() == A.cols());
    CHECK(B.rowPtr() == A.rowPtr());
    CHECK(B.colIdx() == A.colIdx());
    CHECK(B.values() == A.values());
    std::remove(path.c_str());
}

TEST_CASE("matrix market: malformed inputs raise IoError") {
    const std::string path = temp_path("bad.mtx");

    write_file(path, "not a banner\n1 1 0\n");
    CHECK_THROWS_AS(frpca::load_matrix_market(path), IoError);

    write_file(path, "%%MatrixMarket matrix coordinate complex general\n1 1 0\n");
    CHECK_THROWS_AS(frpca::load_matrix_market(path), IoError);

    write_file(path, "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n");
    CHECK_THROWS_AS(frpca::load_matrix_market(path), IoError);  // truncated

    write_file(path, "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n");
    CHECK_THROWS_AS(frpca::load_matrix_market(path), IoError);  // out of range

    CHECK_THROWS_AS(frpca::load_matrix_market("does_not_exist.mtx"), IoError);
    std::remove(path.c_str());
}
