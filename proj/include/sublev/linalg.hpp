#pragma once

#include <Eigen/Dense>
#include <optional>

namespace sublev {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative tolerance on the triangular factor's diagonal below which a
/// design is declared rank deficient.
inline constexpr double kRankRelTol = 1e-10;

struct OlsFit {
    Vector coefficients;
    std::optional<Matrix> gram_inverse; // (Z^T Z)^{-1}, on request
};

/// Least squares via column-pivoted Householder QR. Throws RankDeficientError
/// when the smallest diagonal of R falls below kRankRelTol times the largest.
OlsFit ols_fit(const Matrix& Z, const Vector& y, bool want_gram_inverse = false);

/// Leverage scores h_i = z_i^T (Z^T Z)^{-1} z_i, computed as squared row
/// norms of the thin orthonormal factor. Requires rows(Z) >= cols(Z) and
/// full column rank.
Vector leverage_scores(const Matrix& Z);

/// Lower-triangular L with L L^T = S. S must be symmetric positive definite.
Matrix cholesky_factor(const Matrix& S);

} // namespace sublev
