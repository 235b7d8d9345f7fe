#include "sublev/lasso.hpp"

#include <algorithm>
#include <cmath>

#include "sublev/errors.hpp"
#include "sublev/parallel.hpp"

namespace sublev {

namespace {

double soft_threshold(double z, double t) {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

// Columns scaled to mean 0 and 1/n-variance 1, response centered.
// Zero-variance columns are zeroed out and reported as degenerate.
struct StandardizedDesign {
    Matrix Xs;
    Vector col_mean;
    Vector col_sd; // 1.0 for degenerate columns
    Vector yc;
    double y_mean = 0.0;
    std::vector<int> degenerate;

    StandardizedDesign(const Matrix& X, const Vector& y) {
        const long n = X.rows();
        const long p = X.cols();
        if (n != y.size()) {
            throw DimensionMismatchError("lasso: rows(X) != len(y)");
        }
        if (n < 2) throw InvalidSizeError("lasso: need at least 2 rows");

        Xs = X;
        col_mean.resize(p);
        col_sd.resize(p);
        for (long j = 0; j < p; ++j) {
            const double mean = Xs.col(j).mean();
            Xs.col(j).array() -= mean;
            const double var = Xs.col(j).squaredNorm() / static_cast<double>(n);
            const double scale = Xs.col(j).cwiseAbs().maxCoeff();
            col_mean(j) = mean;
            if (std::sqrt(var) <= 1e-12 * std::max(1.0, scale + std::abs(mean))) {
                col_sd(j) = 1.0;
                Xs.col(j).setZero();
                degenerate.push_back(static_cast<int>(j));
            } else {
                col_sd(j) = std::sqrt(var);
                Xs.col(j) /= col_sd(j);
            }
        }
        y_mean = y.mean();
        yc = y.array() - y_mean;
    }

    LassoFit to_original(const Vector& beta_std, double lambda, int iters,
                         bool converged) const {
        LassoFit fit;
        fit.lambda = lambda;
        fit.n_iterations = iters;
        fit.converged = converged;
        fit.degenerate_columns = degenerate;
        fit.slopes = beta_std.cwiseQuotient(col_sd);
        fit.intercept = y_mean - col_mean.dot(fit.slopes);
        return fit;
    }

    Vector standardize_slopes(const Vector& slopes_orig) const {
        Vector beta = slopes_orig.cwiseProduct(col_sd);
        for (int j : degenerate) beta(j) = 0.0;
        return beta;
    }
};

// Coordinate descent on the Gram matrix of a standardized design. The
// per-coordinate update keeps q = G * beta current, so a sweep costs
// O(p * #changed) instead of O(n * p); with a regularization path this
// amortizes the one-time O(n p^2) Gram product.
class CoordinateDescent {
public:
    explicit CoordinateDescent(const StandardizedDesign& d)
        : gram_((d.Xs.transpose() * d.Xs) / static_cast<double>(d.Xs.rows())),
          xty_((d.Xs.transpose() * d.yc) / static_cast<double>(d.Xs.rows())),
          p_(d.Xs.cols()) {
        is_degenerate_.assign(static_cast<std::size_t>(p_), 0);
        for (int j : d.degenerate) is_degenerate_[static_cast<std::size_t>(j)] = 1;
    }

    double lambda_max() const {
        double m = 0.0;
        for (long j = 0; j < p_; ++j) {
            if (!is_degenerate_[static_cast<std::size_t>(j)]) {
                m = std::max(m, std::abs(xty_(j)));
            }
        }
        return m;
    }

    // Solves at the given lambda starting from beta (standardized scale,
    // updated in place). Returns sweeps used; sets converged.
    int solve(double lambda, Vector& beta, bool& converged) const {
        Vector q = gram_ * beta;
        int sweeps = 0;
        converged = false;

        auto sweep = [&](bool full) {
            double delta_max = 0.0;
            for (long j = 0; j < p_; ++j) {
                if (is_degenerate_[static_cast<std::size_t>(j)]) continue;
                if (!full && beta(j) == 0.0) continue;
                const double z = xty_(j) - q(j) + beta(j); // G_jj = 1
                const double nb = soft_threshold(z, lambda);
                const double d = nb - beta(j);
                if (d != 0.0) {
                    beta(j) = nb;
                    q += d * gram_.col(j);
                    delta_max = std::max(delta_max, std::abs(d));
                }
            }
            return delta_max;
        };

        while (sweeps < kLassoMaxSweeps) {
            const double full_delta = sweep(true);
            ++sweeps;
            if (full_delta < kLassoTol) {
                converged = true;
                break;
            }
            // Iterate the current active set before the next full pass.
            while (sweeps < kLassoMaxSweeps) {
                const double d = sweep(false);
                ++sweeps;
                if (d < kLassoTol) break;
            }
        }
        return sweeps;
    }

private:
    Matrix gram_;
    Vector xty_;
    long p_;
    std::vector<char> is_degenerate_;
};

std::vector<double> grid_from_lambda_max(double lambda_max, int n_lambda,
                                         double ratio) {
    if (n_lambda < 2) throw InvalidParamError("lambda_grid: n_lambda must be >= 2");
    if (lambda_max <= 0.0) return {0.0};
    std::vector<double> grid(static_cast<std::size_t>(n_lambda));
    const double log_max = std::log(lambda_max);
    const double log_min = std::log(lambda_max * ratio);
    for (int i = 0; i < n_lambda; ++i) {
        const double t = static_cast<double>(i) / (n_lambda - 1);
        grid[static_cast<std::size_t>(i)] = std::exp(log_max + t * (log_min - log_max));
    }
    grid.front() = lambda_max; // exact endpoints
    grid.back() = lambda_max * ratio;
    return grid;
}

// Treats responses that are constant to rounding error as constant.
double effective_lambda_max(const StandardizedDesign& d,
                            const CoordinateDescent& cd) {
    const double y_scale = d.yc.size() ? d.yc.cwiseAbs().maxCoeff() : 0.0;
    if (y_scale <= 1e-14 * std::max(1.0, std::abs(d.y_mean))) return 0.0;
    return cd.lambda_max();
}

} // namespace

LassoFit lasso_fit(const Matrix& X, const Vector& y, double lambda,
                   const Vector* warm_start) {
    if (lambda < 0.0) throw InvalidParamError("lasso_fit: lambda must be >= 0");
    StandardizedDesign d(X, y);
    CoordinateDescent cd(d);

    Vector beta = Vector::Zero(X.cols());
    if (warm_start) {
        if (warm_start->size() != X.cols()) {
            throw DimensionMismatchError("lasso_fit: warm start length != cols(X)");
        }
        beta = d.standardize_slopes(*warm_start);
    }
    bool converged = false;
    const int iters = cd.solve(lambda, beta, converged);
    return d.to_original(beta, lambda, iters, converged);
}

std::vector<double> lambda_grid(const Matrix& X, const Vector& y, int n_lambda,
                                double ratio) {
    StandardizedDesign d(X, y);
    CoordinateDescent cd(d);
    return grid_from_lambda_max(effective_lambda_max(d, cd), n_lambda, ratio);
}

CvLassoFit cv_lasso(const Matrix& X, const Vector& y, int n_folds,
                    StreamKey key, int n_lambda, double ratio, int workers) {
    const long n = X.rows();
    const long p = X.cols();
    if (n_folds < 2) throw InvalidParamError("cv_lasso: need n_folds >= 2");
    if (n < n_folds) throw InvalidSizeError("cv_lasso: rows(X) < n_folds");

    const std::vector<double> grid = [&] {
        StandardizedDesign d(X, y);
        CoordinateDescent cd(d);
        return grid_from_lambda_max(effective_lambda_max(d, cd), n_lambda, ratio);
    }();
    const std::size_t n_grid = grid.size();

    // Random-permutation fold assignment; sizes differ by at most one.
    std::vector<int> fold_of(static_cast<std::size_t>(n));
    {
        Rng rng(key.derive("folds", 0));
        std::vector<long> perm(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        for (long i = 0; i < n - 1; ++i) {
            const long j =
                i + static_cast<long>(rng.uniform_below(static_cast<std::uint64_t>(n - i)));
            std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
        }
        for (long i = 0; i < n; ++i) {
            fold_of[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
                static_cast<int>(i % n_folds);
        }
    }

    std::vector<std::vector<double>> fold_errors(
        static_cast<std::size_t>(n_folds), std::vector<double>(n_grid, 0.0));

    parallel_for(static_cast<std::size_t>(n_folds), workers, [&](std::size_t f) {
        std::vector<long> train_rows, held_rows;
        for (long i = 0; i < n; ++i) {
            if (fold_of[static_cast<std::size_t>(i)] == static_cast<int>(f)) {
                held_rows.push_back(i);
            } else {
                train_rows.push_back(i);
            }
        }
        Matrix Xtr(static_cast<long>(train_rows.size()), p);
        Vector ytr(static_cast<long>(train_rows.size()));
        for (std::size_t i = 0; i < train_rows.size(); ++i) {
            Xtr.row(static_cast<long>(i)) = X.row(train_rows[i]);
            ytr(static_cast<long>(i)) = y(train_rows[i]);
        }
        Matrix Xho(static_cast<long>(held_rows.size()), p);
        Vector yho(static_cast<long>(held_rows.size()));
        for (std::size_t i = 0; i < held_rows.size(); ++i) {
            Xho.row(static_cast<long>(i)) = X.row(held_rows[i]);
            yho(static_cast<long>(i)) = y(held_rows[i]);
        }

        StandardizedDesign d(Xtr, ytr);
        CoordinateDescent cd(d);
        Vector beta = Vector::Zero(p);
        bool converged = false;
        for (std::size_t li = 0; li < n_grid; ++li) {
            cd.solve(grid[li], beta, converged);
            const Vector slopes = beta.cwiseQuotient(d.col_sd);
            const double intercept = d.y_mean - d.col_mean.dot(slopes);
            const Vector pred =
                (Xho * slopes).array() + intercept;
            fold_errors[f][li] = (yho - pred).squaredNorm() /
                                 static_cast<double>(held_rows.size());
        }
    });

    CvResult cv;
    cv.lambda_grid = grid;
    cv.cv_mean_error.resize(n_grid);
    cv.cv_se.resize(n_grid);
    for (std::size_t li = 0; li < n_grid; ++li) {
        double mean = 0.0;
        for (int f = 0; f < n_folds; ++f) mean += fold_errors[static_cast<std::size_t>(f)][li];
        mean /= n_folds;
        double ss = 0.0;
        for (int f = 0; f < n_folds; ++f) {
            const double dlt = fold_errors[static_cast<std::size_t>(f)][li] - mean;
            ss += dlt * dlt;
        }
        cv.cv_mean_error[li] = mean;
        cv.cv_se[li] = std::sqrt(ss / (n_folds - 1)) / std::sqrt(static_cast<double>(n_folds));
    }

    std::size_t i_min = 0;
    for (std::size_t li = 1; li < n_grid; ++li) {
        if (cv.cv_mean_error[li] < cv.cv_mean_error[i_min]) i_min = li;
    }
    const double threshold = cv.cv_mean_error[i_min] + cv.cv_se[i_min];
    std::size_t i_1se = i_min;
    for (std::size_t li = 0; li < n_grid; ++li) { // grid descends: first hit is largest
        if (cv.cv_mean_error[li] <= threshold) {
            i_1se = li;
            break;
        }
    }
    cv.lambda_min = grid[i_min];
    cv.lambda_1se = grid[i_1se];

    // Final fit on all rows, warm-started down the path to lambda_1se.
    StandardizedDesign d(X, y);
    CoordinateDescent cd(d);
    Vector beta = Vector::Zero(p);
    bool converged = false;
    int iters = 0;
    for (std::size_t li = 0; li <= i_1se; ++li) {
        iters = cd.solve(grid[li], beta, converged);
    }
    CvLassoFit out;
    out.cv = std::move(cv);
    out.fit = d.to_original(beta, grid[i_1se], iters, converged);
    return out;
}

} // namespace sublev
