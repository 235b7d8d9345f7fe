#include "sublev/linalg.hpp"

#include <cmath>

#include "sublev/errors.hpp"

namespace sublev {

namespace {

// Shared QR front end: factorizes and enforces the rank guard.
struct QrCheck {
    Eigen::ColPivHouseholderQR<Matrix> qr;
    long cols;

    explicit QrCheck(const Matrix& Z) : qr(Z), cols(Z.cols()) {
        if (Z.rows() < Z.cols()) {
            throw RankDeficientError("ols/leverage: need rows >= cols, got " +
                                     std::to_string(Z.rows()) + " x " +
                                     std::to_string(Z.cols()));
        }
        const Vector diag = qr.matrixR().diagonal().head(cols).cwiseAbs();
        const double dmax = diag.maxCoeff();
        if (dmax <= 0.0 || diag.minCoeff() < kRankRelTol * dmax) {
            throw RankDeficientError(
                "design matrix is numerically rank deficient");
        }
    }
};

} // namespace

OlsFit ols_fit(const Matrix& Z, const Vector& y, bool want_gram_inverse) {
    if (Z.rows() != y.size()) {
        throw DimensionMismatchError("ols_fit: rows(Z) != len(y)");
    }
    QrCheck f(Z);

    OlsFit fit;
    fit.coefficients = f.qr.solve(y);

    if (want_gram_inverse) {
        // Z P = Q R  =>  (Z^T Z)^{-1} = P R^{-1} R^{-T} P^T
        const long p = f.cols;
        const Matrix R = f.qr.matrixR().topLeftCorner(p, p);
        const Matrix Rinv =
            R.triangularView<Eigen::Upper>().solve(Matrix::Identity(p, p));
        const Matrix perm = f.qr.colsPermutation();
        fit.gram_inverse = perm * (Rinv * Rinv.transpose()) * perm.transpose();
    }
    return fit;
}

Vector leverage_scores(const Matrix& Z) {
    QrCheck f(Z);
    const long p = f.cols;

    // h_i is the squared norm of row i of the thin factor Q. With Z P = Q R,
    // Q^T = R^{-T} (Z P)^T, so solve the triangular system instead of
    // materializing Q (cf. hat matrix diag via QR).
    const Matrix ZP = Z * f.qr.colsPermutation();
    const Matrix Qt = f.qr.matrixR()
                          .topLeftCorner(p, p)
                          .triangularView<Eigen::Upper>()
                          .transpose()
                          .solve(ZP.transpose());
    return Qt.colwise().squaredNorm().transpose();
}

Matrix cholesky_factor(const Matrix& S) {
    if (S.rows() != S.cols()) {
        throw DimensionMismatchError("cholesky_factor: matrix must be square");
    }
    const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
    if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw NotPositiveDefiniteError("cholesky_factor: matrix not symmetric");
    }
    Eigen::LLT<Matrix> llt(S);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefiniteError(
            "cholesky_factor: matrix not positive definite");
    }
    return llt.matrixL();
}

} // namespace sublev
