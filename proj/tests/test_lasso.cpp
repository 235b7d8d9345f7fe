#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "sublev/errors.hpp"
#include "sublev/lasso.hpp"
#include "sublev/linalg.hpp"
#include "sublev/rng.hpp"

using namespace sublev;

namespace {

// Independent standardization (mean 0, 1/n variance 1) for the KKT oracle.
struct StdData {
    Matrix Xs;
    Vector yc;
    Vector mean, sd;
    double y_mean;
};

StdData standardize(const Matrix& X, const Vector& y) {
    StdData d;
    const long n = X.rows();
    const long p = X.cols();
    d.Xs = X;
    d.mean.resize(p);
    d.sd.resize(p);
    for (long j = 0; j < p; ++j) {
        double m = 0.0;
        for (long i = 0; i < n; ++i) m += X(i, j);
        m /= static_cast<double>(n);
        double v = 0.0;
        for (long i = 0; i < n; ++i) v += (X(i, j) - m) * (X(i, j) - m);
        v /= static_cast<double>(n);
        d.mean(j) = m;
        d.sd(j) = std::sqrt(v);
        for (long i = 0; i < n; ++i) d.Xs(i, j) = (X(i, j) - m) / d.sd(j);
    }
    d.y_mean = y.mean();
    d.yc = y.array() - d.y_mean;
    return d;
}

// Subgradient optimality of the returned fit, checked on the standardized
// problem the solver actually works on.
void check_kkt(const Matrix& X, const Vector& y, const LassoFit& fit,
               double tol = 1e-6) {
    const StdData d = standardize(X, y);
    const long n = X.rows();
    const Vector beta_std = fit.slopes.cwiseProduct(d.sd);
    const Vector r = d.yc - d.Xs * beta_std;
    for (long j = 0; j < X.cols(); ++j) {
        const double g = d.Xs.col(j).dot(r) / static_cast<double>(n);
        if (beta_std(j) == 0.0) {
            CHECK(std::abs(g) <= fit.lambda + tol);
        } else {
            const double sign = beta_std(j) > 0.0 ? 1.0 : -1.0;
            CHECK(std::abs(g - fit.lambda * sign) <= tol);
        }
    }
    CHECK(fit.intercept ==
          doctest::Approx(d.y_mean - d.mean.dot(fit.slopes)).epsilon(1e-10));
}

double grid_lambda_max(const Matrix& X, const Vector& y) {
    return lambda_grid(X, y).front();
}

} // namespace

TEST_SUITE("lasso") {

TEST_CASE("lambda at or above lambda_max kills every slope exactly") {
    Rng rng(StreamKey(101).derive("x", 0));
    const Matrix X = testref::random_matrix(80, 6, rng);
    const Vector y = testref::random_vector(80, rng);
    const double lmax = grid_lambda_max(X, y);
    for (double lambda : {lmax, 2.0 * lmax}) {
        const LassoFit fit = lasso_fit(X, y, lambda);
        CHECK(fit.converged);
        for (long j = 0; j < 6; ++j) CHECK(fit.slopes(j) == 0.0);
        CHECK(fit.intercept == doctest::Approx(y.mean()));
    }
}

TEST_CASE("lambda = 0 recovers the OLS solution") {
    Rng rng(StreamKey(102).derive("x", 0));
    const Matrix X = testref::random_matrix(100, 5, rng);
    Vector y = testref::random_vector(100, rng);
    y += X.col(0) * 2.0 - X.col(3);

    const LassoFit fit = lasso_fit(X, y, 0.0);

    Matrix Z(100, 6);
    Z.col(0).setOnes();
    Z.rightCols(5) = X;
    const Vector ols = testref::normal_equations_solve(Z, y);
    CHECK(std::abs(fit.intercept - ols(0)) < 1e-6);
    for (long j = 0; j < 5; ++j) CHECK(std::abs(fit.slopes(j) - ols(j + 1)) < 1e-6);
}

TEST_CASE("KKT conditions hold at a mid-path lambda") {
    Rng rng(StreamKey(103).derive("x", 0));
    const Matrix X = testref::random_matrix(200, 10, rng);
    Vector y = testref::random_vector(200, rng);
    y += 3.0 * X.col(1) - 2.0 * X.col(7);
    const double lambda = 0.5 * grid_lambda_max(X, y);
    const LassoFit fit = lasso_fit(X, y, lambda);
    CHECK(fit.converged);
    check_kkt(X, y, fit);
}

TEST_CASE("KKT conditions across many random instances") {
    for (int trial = 0; trial < 25; ++trial) {
        Rng rng(StreamKey(104).derive("kkt", static_cast<std::uint64_t>(trial)));
        const long n = 50 + static_cast<long>(rng.uniform_below(150));
        const long p = 2 + static_cast<long>(rng.uniform_below(12));
        const Matrix X = testref::random_matrix(n, p, rng);
        Vector y = testref::random_vector(n, rng);
        for (long j = 0; j < std::min<long>(3, p); ++j) {
            y += (rng.uniform() * 4.0 - 2.0) * X.col(j);
        }
        const double frac = 0.05 + 0.9 * rng.uniform();
        const LassoFit fit = lasso_fit(X, y, frac * grid_lambda_max(X, y));
        check_kkt(X, y, fit);
    }
}

TEST_CASE("warm and cold starts agree") {
    Rng rng(StreamKey(105).derive("x", 0));
    const Matrix X = testref::random_matrix(150, 8, rng);
    Vector y = testref::random_vector(150, rng);
    y += 2.0 * X.col(2);
    const double lmax = grid_lambda_max(X, y);

    const LassoFit low = lasso_fit(X, y, 0.1 * lmax);
    const LassoFit cold = lasso_fit(X, y, 0.3 * lmax);
    const LassoFit warm = lasso_fit(X, y, 0.3 * lmax, &low.slopes);
    CHECK((cold.slopes - warm.slopes).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("zero-variance column is excluded and reported") {
    Rng rng(StreamKey(106).derive("x", 0));
    Matrix X = testref::random_matrix(60, 4, rng);
    X.col(2).setConstant(7.5);
    Vector y = testref::random_vector(60, rng);
    const LassoFit fit = lasso_fit(X, y, 0.01);
    REQUIRE(fit.degenerate_columns.size() == 1);
    CHECK(fit.degenerate_columns[0] == 2);
    CHECK(fit.slopes(2) == 0.0);
}

TEST_CASE("lambda grid endpoints and hand-computed lambda_max") {
    // X already standardized, y centered: lambda_max = |x^T y| / n = 2/2.
    Matrix X(2, 1);
    X << 1, -1;
    Vector y(2);
    y << 1, -1;
    const auto grid = lambda_grid(X, y, 2);
    REQUIRE(grid.size() == 2);
    CHECK(grid[0] == doctest::Approx(1.0));
    CHECK(grid[1] == doctest::Approx(1e-3));

    const auto dense = lambda_grid(X, y, 100);
    CHECK(dense.size() == 100);
    CHECK(dense.front() == doctest::Approx(1.0));
    CHECK(dense.back() == doctest::Approx(1e-3));
    for (std::size_t i = 1; i < dense.size(); ++i) CHECK(dense[i] < dense[i - 1]);
}

TEST_CASE("constant response yields the degenerate grid {0}") {
    Rng rng(StreamKey(107).derive("x", 0));
    const Matrix X = testref::random_matrix(30, 3, rng);
    const Vector y = Vector::Constant(30, 4.2);
    const auto grid = lambda_grid(X, y);
    REQUIRE(grid.size() == 1);
    CHECK(grid[0] == 0.0);
}

TEST_CASE("cv_lasso on pure noise selects the empty model almost always") {
    int empty_at_lmax = 0;
    const int n_seeds = 100;
    for (int seed = 0; seed < n_seeds; ++seed) {
        Rng rng(StreamKey(200).derive("noise", static_cast<std::uint64_t>(seed)));
        const Matrix X = testref::random_matrix(100, 5, rng);
        const Vector y = testref::random_vector(100, rng);
        const CvLassoFit out = cv_lasso(
            X, y, 10, StreamKey(300).derive("cv", static_cast<std::uint64_t>(seed)));
        const bool all_zero = out.fit.slopes.cwiseAbs().maxCoeff() == 0.0;
        if (all_zero && out.cv.lambda_1se == out.cv.lambda_grid.front()) {
            ++empty_at_lmax;
        }
    }
    CHECK(empty_at_lmax >= 95);
}

TEST_CASE("cv_lasso keeps a strong signal and drops the rest") {
    Rng rng(StreamKey(201).derive("x", 0));
    const Matrix X = testref::random_matrix(500, 5, rng);
    Vector y = 5.0 * X.col(0);
    for (long i = 0; i < 500; ++i) y(i) += 0.01 * rng.normal();
    const CvLassoFit out = cv_lasso(X, y, 10, StreamKey(202).derive("cv", 0));
    CHECK(out.fit.slopes(0) != 0.0);
    for (long j = 1; j < 5; ++j) CHECK(out.fit.slopes(j) == 0.0);
    CHECK(out.fit.slopes(0) == doctest::Approx(5.0).epsilon(0.05));
}

TEST_CASE("leave-one-out cross-validation runs") {
    Rng rng(StreamKey(203).derive("x", 0));
    const Matrix X = testref::random_matrix(20, 3, rng);
    Vector y = testref::random_vector(20, rng);
    y += X.col(1);
    const CvLassoFit out = cv_lasso(X, y, 20, StreamKey(204).derive("cv", 0));
    REQUIRE(out.cv.lambda_grid.size() == out.cv.cv_mean_error.size());
    REQUIRE(out.cv.lambda_grid.size() == out.cv.cv_se.size());
    CHECK(out.cv.lambda_1se >= out.cv.lambda_min);
    bool in_grid = false;
    for (double l : out.cv.lambda_grid) {
        if (l == out.cv.lambda_1se) in_grid = true;
    }
    CHECK(in_grid);
}

TEST_CASE("cv_lasso is reproducible for a fixed key") {
    Rng rng(StreamKey(205).derive("x", 0));
    const Matrix X = testref::random_matrix(80, 6, rng);
    Vector y = testref::random_vector(80, rng);
    y += 2.0 * X.col(4);
    const StreamKey key = StreamKey(206).derive("cv", 0);
    const CvLassoFit a = cv_lasso(X, y, 10, key);
    const CvLassoFit b = cv_lasso(X, y, 10, key);
    CHECK(a.cv.lambda_1se == b.cv.lambda_1se);
    CHECK(a.fit.intercept == b.fit.intercept);
    CHECK((a.fit.slopes - b.fit.slopes).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t i = 0; i < a.cv.cv_mean_error.size(); ++i) {
        CHECK(a.cv.cv_mean_error[i] == b.cv.cv_mean_error[i]);
    }
}

TEST_CASE("cv_lasso fold parallelism does not change the result") {
    Rng rng(StreamKey(207).derive("x", 0));
    const Matrix X = testref::random_matrix(60, 5, rng);
    Vector y = testref::random_vector(60, rng);
    y += X.col(0);
    const StreamKey key = StreamKey(208).derive("cv", 0);
    const CvLassoFit serial = cv_lasso(X, y, 10, key, 100, 1e-3, 1);
    const CvLassoFit threaded = cv_lasso(X, y, 10, key, 100, 1e-3, 4);
    CHECK(serial.cv.lambda_1se == threaded.cv.lambda_1se);
    CHECK((serial.fit.slopes - threaded.fit.slopes).cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t i = 0; i < serial.cv.cv_mean_error.size(); ++i) {
        CHECK(serial.cv.cv_mean_error[i] == threaded.cv.cv_mean_error[i]);
    }
}

TEST_CASE("invalid inputs are rejected") {
    Matrix X(4, 2);
    X << 1, 2, 3, 4, 5, 6, 7, 8;
    Vector y(4);
    y << 1, 2, 3, 4;
    CHECK_THROWS_AS(lasso_fit(X, y, -0.5), InvalidParamError);
    Vector bad(3);
    bad << 1, 2, 3;
    CHECK_THROWS_AS(lasso_fit(X, bad, 0.1), DimensionMismatchError);
    CHECK_THROWS_AS(cv_lasso(X, y, 1, StreamKey(1)), InvalidParamError);
    CHECK_THROWS_AS(cv_lasso(X, y, 5, StreamKey(1)), InvalidSizeError);
}

} // TEST_SUITE
