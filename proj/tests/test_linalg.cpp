#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "sublev/errors.hpp"
#include "sublev/linalg.hpp"
#include "sublev/rng.hpp"

using namespace sublev;

TEST_SUITE("linalg") {

TEST_CASE("ols on identity design returns the response") {
    Matrix Z = Matrix::Identity(2, 2);
    Vector y(2);
    y << 3, 5;
    const OlsFit fit = ols_fit(Z, y);
    CHECK(fit.coefficients(0) == doctest::Approx(3.0));
    CHECK(fit.coefficients(1) == doctest::Approx(5.0));
}

TEST_CASE("ols recovers noiseless line exactly") {
    const long n = 30;
    Matrix Z(n, 2);
    Vector y(n);
    for (long i = 0; i < n; ++i) {
        Z(i, 0) = 1.0;
        Z(i, 1) = static_cast<double>(i);
        y(i) = 1.0 + 2.0 * static_cast<double>(i);
    }
    const OlsFit fit = ols_fit(Z, y);
    CHECK(std::abs(fit.coefficients(0) - 1.0) < 1e-10);
    CHECK(std::abs(fit.coefficients(1) - 2.0) < 1e-10);
}

TEST_CASE("ols matches the normal-equations oracle on a random design") {
    Rng rng(StreamKey(11).derive("ols", 0));
    const Matrix Z = testref::random_matrix(50, 4, rng);
    const Vector y = testref::random_vector(50, rng);
    const OlsFit fit = ols_fit(Z, y);
    const Vector oracle = testref::normal_equations_solve(Z, y);
    CHECK((fit.coefficients - oracle).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("ols residuals orthogonal to design columns") {
    Rng rng(StreamKey(12).derive("ols", 0));
    const Matrix Z = testref::random_matrix(60, 5, rng);
    const Vector y = testref::random_vector(60, rng);
    const OlsFit fit = ols_fit(Z, y);
    const Vector resid = y - Z * fit.coefficients;
    CHECK((Z.transpose() * resid).cwiseAbs().maxCoeff() <= 1e-8 * y.norm());
}

TEST_CASE("ols gram inverse matches the oracle") {
    Rng rng(StreamKey(13).derive("ols", 0));
    const Matrix Z = testref::random_matrix(40, 3, rng);
    const Vector y = testref::random_vector(40, rng);
    const OlsFit fit = ols_fit(Z, y, true);
    REQUIRE(fit.gram_inverse.has_value());
    const Matrix oracle = testref::gj_inverse(Z.transpose() * Z);
    CHECK((*fit.gram_inverse - oracle).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((*fit.gram_inverse - fit.gram_inverse->transpose())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
}

TEST_CASE("ols rejects rank-deficient designs") {
    Matrix Z(4, 2);
    Z.col(0) << 1, 1, 1, 1;
    Z.col(1) = 2.0 * Z.col(0);
    Vector y(4);
    y << 1, 2, 3, 4;
    CHECK_THROWS_AS(ols_fit(Z, y), RankDeficientError);

    // and under-determined shapes
    Matrix wide = Matrix::Ones(2, 3);
    Vector y2(2);
    y2 << 1, 2;
    CHECK_THROWS_AS(ols_fit(wide, y2), RankDeficientError);
}

TEST_CASE("leverage of orthonormal square design is all ones") {
    const Matrix Z = Matrix::Identity(3, 3);
    const Vector h = leverage_scores(Z);
    for (long i = 0; i < 3; ++i) CHECK(h(i) == doctest::Approx(1.0));
}

TEST_CASE("leverage of a constant column is 1/n") {
    const Matrix Z = Matrix::Ones(4, 1);
    const Vector h = leverage_scores(Z);
    for (long i = 0; i < 4; ++i) CHECK(h(i) == doctest::Approx(0.25));
}

TEST_CASE("leverage matches the explicit hat-matrix oracle") {
    Rng rng(StreamKey(21).derive("lev", 0));
    const Matrix Z = testref::random_matrix(20, 3, rng);
    const Vector h = leverage_scores(Z);
    const Vector oracle = testref::hat_matrix_diag(Z);
    CHECK((h - oracle).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("leverage sums to cols and stays in [0, 1]") {
    Rng rng(StreamKey(22).derive("lev", 0));
    for (int trial = 0; trial < 10; ++trial) {
        const long p = 1 + static_cast<long>(rng.uniform_below(6));
        const Matrix Z = testref::random_matrix(40, p, rng);
        const Vector h = leverage_scores(Z);
        CHECK(std::abs(h.sum() - static_cast<double>(p)) < 1e-8);
        CHECK(h.minCoeff() >= -1e-12);
        CHECK(h.maxCoeff() <= 1.0 + 1e-12);
    }
}

TEST_CASE("leverage invariant under column rescaling") {
    Rng rng(StreamKey(23).derive("lev", 0));
    const Matrix Z = testref::random_matrix(25, 4, rng);
    Matrix Zs = Z;
    const double scales[4] = {3.0, -0.5, 10.0, 0.01};
    for (long j = 0; j < 4; ++j) Zs.col(j) *= scales[j];
    const Vector h = leverage_scores(Z);
    const Vector hs = leverage_scores(Zs);
    CHECK((h - hs).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("cholesky of identity") {
    const Matrix L = cholesky_factor(Matrix::Identity(3, 3));
    CHECK((L - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("cholesky closed form for the 2x2 equicorrelated matrix") {
    Matrix S(2, 2);
    S << 1.0, 0.5, 0.5, 1.0;
    const Matrix L = cholesky_factor(S);
    CHECK(L(0, 0) == doctest::Approx(1.0));
    CHECK(L(0, 1) == doctest::Approx(0.0));
    CHECK(L(1, 0) == doctest::Approx(0.5));
    CHECK(L(1, 1) == doctest::Approx(std::sqrt(0.75)));
}

TEST_CASE("cholesky reconstructs a random SPD matrix") {
    Rng rng(StreamKey(31).derive("chol", 0));
    const Matrix A = testref::random_matrix(5, 5, rng);
    const Matrix S = A.transpose() * A + Matrix::Identity(5, 5);
    const Matrix L = cholesky_factor(S);
    CHECK((L * L.transpose() - S).cwiseAbs().maxCoeff() < 1e-10);
    // strictly lower-triangular output
    for (long i = 0; i < 5; ++i) {
        for (long j = i + 1; j < 5; ++j) CHECK(L(i, j) == 0.0);
    }
}

TEST_CASE("cholesky rejects non-SPD and asymmetric input") {
    Matrix S(2, 2);
    S << 1.0, 2.0, 2.0, 1.0; // eigenvalues 3, -1
    CHECK_THROWS_AS(cholesky_factor(S), NotPositiveDefiniteError);

    Matrix A(2, 2);
    A << 1.0, 0.3, 0.2, 1.0;
    CHECK_THROWS_AS(cholesky_factor(A), NotPositiveDefiniteError);
}

} // TEST_SUITE
