#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace psdsketch;
using testsupport::random_hermitian;
using testsupport::random_psd;

namespace {
HermitianMatrix diag(std::initializer_list<double> values) {
    const int n = static_cast<int>(values.size());
    Matrix m = Matrix::Zero(n, n);
    int i = 0;
    for (double v : values) m(i, i) = v, ++i;
    return HermitianMatrix::unchecked(std::move(m));
}
}  // namespace

TEST_CASE("construction rejects bad input") {
    CHECK_THROWS_AS(HermitianMatrix(Matrix::Zero(2, 3)), DimensionMismatchError);
    Matrix m(2, 2);
    m << 0.0, 1.0, 0.0, 0.0;  // not Hermitian
    CHECK_THROWS_AS(HermitianMatrix(m), NotHermitianError);
    // Hermitian within tolerance passes.
    Matrix ok = Matrix::Identity(3, 3);
    ok(0, 1) = Complex(0.0, 1e-14);
    ok(1, 0) = Complex(0.0, -1e-14 + 1e-26);
    CHECK_NOTHROW(HermitianMatrix(ok));
}

TEST_CASE("eigh identity and diagonal cases") {
    const auto idty = eigh(HermitianMatrix(Matrix::Identity(3, 3)));
    for (int i = 0; i < 3; ++i) CHECK(idty.eigenvalues(i) == Catch::Approx(1.0).margin(1e-14));

    const auto d = eigh(diag({2.0, 1.0, 0.0}));
    CHECK(d.eigenvalues(0) == Catch::Approx(2.0).margin(1e-14));
    CHECK(d.eigenvalues(1) == Catch::Approx(1.0).margin(1e-14));
    CHECK(d.eigenvalues(2) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("eigh reconstruction and orthonormality on random Hermitians") {
    for (std::uint64_t s = 0; s < 8; ++s) {
        const int dim = 3 + static_cast<int>(s % 5) * 7;
        const HermitianMatrix h = random_hermitian(dim, rng::derive_stream(11, rng::kDomainTest, s));
        const auto ed = eigh(h);
        // eigenvalues descending
        for (Eigen::Index i = 1; i < ed.eigenvalues.size(); ++i)
            CHECK(ed.eigenvalues(i) <= ed.eigenvalues(i - 1) + 1e-12);
        const double scale = 1.0 + op_norm(h);
        CHECK((ed.reconstruct() - h.matrix()).cwiseAbs().maxCoeff() <= tol::recon * scale);
        const Matrix gram = ed.eigenvectors.adjoint() * ed.eigenvectors;
        CHECK((gram - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= tol::recon);
    }
}

TEST_CASE("trace_inner basics and oracle") {
    const HermitianMatrix i2(Matrix::Identity(2, 2));
    CHECK(trace_inner(i2, i2) == Catch::Approx(2.0));

    CHECK(trace_inner(diag({1.0, 0.0}), diag({0.0, 1.0})) == Catch::Approx(0.0).margin(1e-15));

    for (std::uint64_t s = 0; s < 6; ++s) {
        const HermitianMatrix a = random_psd(9, 4, rng::derive_stream(21, rng::kDomainTest, s));
        const HermitianMatrix b = random_psd(9, 9, rng::derive_stream(22, rng::kDomainTest, s));
        // independent entrywise-sum oracle: sum_{jk} A_jk conj(B_jk)
        Complex oracle = 0.0;
        for (int j = 0; j < 9; ++j)
            for (int k = 0; k < 9; ++k) oracle += a.matrix()(j, k) * std::conj(b.matrix()(j, k));
        CHECK(trace_inner(a, b) == Catch::Approx(oracle.real()).margin(1e-12));
        CHECK(trace_inner(a, b) >= -tol::psd);
        CHECK(trace_inner(a, a) >= 0.0);
    }
    CHECK_THROWS_AS(trace_inner(i2, HermitianMatrix(Matrix::Identity(3, 3))),
                    DimensionMismatchError);
}

TEST_CASE("op_norm and trace_norm") {
    CHECK(op_norm(diag({3.0, -1.0})) == Catch::Approx(3.0));
    CHECK(op_norm(HermitianMatrix(Matrix::Identity(5, 5))) == Catch::Approx(1.0));
    CHECK(trace_norm(HermitianMatrix(Matrix::Identity(5, 5))) == Catch::Approx(5.0));
    CHECK(trace_norm(diag({1.0, -2.0})) == Catch::Approx(3.0));

    for (std::uint64_t s = 0; s < 6; ++s) {
        const HermitianMatrix p = random_psd(8, 8, rng::derive_stream(31, rng::kDomainTest, s));
        CHECK(op_norm(p) == Catch::Approx(eigh(p).eigenvalues(0)).margin(1e-12));
        CHECK(trace_norm(p) == Catch::Approx(p.trace()).margin(1e-10 * (1 + p.trace())));
        const HermitianMatrix h = random_hermitian(8, rng::derive_stream(32, rng::kDomainTest, s));
        CHECK(trace_norm(h) >= op_norm(h) - 1e-12);
    }
}

TEST_CASE("psd_project clips tiny negatives and rejects indefinite input") {
    const HermitianMatrix p = random_psd(6, 3, rng::derive_stream(41, rng::kDomainTest, 0));
    const HermitianMatrix same = psd_project(p, 1e-9);
    CHECK((same.matrix() - p.matrix()).cwiseAbs().maxCoeff() == 0.0);  // psd input returned as-is

    const HermitianMatrix clipped = psd_project(diag({1.0, -1e-12}), 1e-9);
    CHECK(clipped.matrix()(0, 0).real() == Catch::Approx(1.0).margin(1e-12));
    CHECK(clipped.matrix()(1, 1).real() == Catch::Approx(0.0).margin(1e-12));
    CHECK(detail::min_eigenvalue(clipped) >= -tol::psd);

    CHECK_THROWS_AS(psd_project(diag({1.0, -0.5}), 1e-9), IndefiniteMatrixError);
}

TEST_CASE("numerical_rank thresholds and scale invariance") {
    Matrix proj = Matrix::Zero(8, 8);
    proj(2, 2) = 1.0;
    CHECK(numerical_rank(HermitianMatrix::unchecked(proj)) == 1);
    CHECK(numerical_rank(HermitianMatrix(Matrix::Identity(8, 8))) == 8);
    CHECK(numerical_rank(diag({1.0, 1e-14, 0.0}), 1e-9) == 1);
    CHECK(numerical_rank(HermitianMatrix(Matrix::Zero(4, 4))) == 0);

    for (std::uint64_t s = 0; s < 4; ++s) {
        const HermitianMatrix p = random_psd(10, 3, rng::derive_stream(51, rng::kDomainTest, s));
        const int r = numerical_rank(p);
        CHECK(r == 3);
        CHECK(numerical_rank(HermitianMatrix::unchecked(37.5 * p.matrix())) == r);
        CHECK(numerical_rank(HermitianMatrix::unchecked(p.matrix() / 1024.0)) == r);
    }
}
