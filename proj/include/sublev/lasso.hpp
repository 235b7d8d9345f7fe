#pragma once

#include <vector>

#include "sublev/linalg.hpp"
#include "sublev/rng.hpp"

namespace sublev {

/// L1-penalized least-squares fit. Slopes and intercept are reported on the
/// original data scale; the objective is
///   (1/(2n)) ||y - X beta||^2 + lambda ||beta||_1
/// solved on internally standardized columns (mean 0, variance 1).
struct LassoFit {
    double intercept = 0.0;
    Vector slopes;
    double lambda = 0.0;
    int n_iterations = 0;
    bool converged = false;
    /// Zero-variance columns: excluded from the penalized fit, slope 0.
    std::vector<int> degenerate_columns;
};

struct CvResult {
    std::vector<double> lambda_grid; // descending
    std::vector<double> cv_mean_error;
    std::vector<double> cv_se;
    double lambda_min = 0.0;
    double lambda_1se = 0.0;
};

struct CvLassoFit {
    CvResult cv;
    LassoFit fit; // refit on all rows at lambda_1se
};

/// Convergence tolerance on the max standardized-coefficient change per sweep.
inline constexpr double kLassoTol = 1e-7;
inline constexpr int kLassoMaxSweeps = 10000;

/// Cyclic coordinate descent with soft thresholding. warm_start, when given,
/// holds original-scale slopes (same convention as the output).
LassoFit lasso_fit(const Matrix& X, const Vector& y, double lambda,
                   const Vector* warm_start = nullptr);

/// Log-spaced descending grid from lambda_max down to ratio * lambda_max,
/// where lambda_max = max_j |x_j^T y_c| / n on standardized columns.
/// A constant response (lambda_max = 0) yields the single value {0}.
std::vector<double> lambda_grid(const Matrix& X, const Vector& y,
                                int n_lambda = 100, double ratio = 1e-3);

/// K-fold cross-validation over the lambda grid with the one-standard-error
/// rule: lambda_1se is the largest grid value whose mean held-out error is
/// within one standard error of the minimum. Fold assignment comes from a
/// seeded permutation, so results are reproducible per key.
CvLassoFit cv_lasso(const Matrix& X, const Vector& y, int n_folds,
                    StreamKey key, int n_lambda = 100, double ratio = 1e-3,
                    int workers = 1);

} // namespace sublev
