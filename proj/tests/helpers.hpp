#pragma once

// Test-only reference implementations. These stay deliberately naive (plain
// loops, Gauss-Jordan elimination) so that they are independent of the
// library's factorization-based code paths.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sublev/linalg.hpp"
#include "sublev/rng.hpp"

namespace testref {

using sublev::Matrix;
using sublev::Vector;

/// Gauss-Jordan inverse with partial pivoting.
inline Matrix gj_inverse(Matrix a) {
    const long n = a.rows();
    Matrix inv = Matrix::Identity(n, n);
    for (long col = 0; col < n; ++col) {
        long pivot = col;
        for (long r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        }
        if (a(pivot, col) == 0.0) throw std::runtime_error("singular matrix");
        if (pivot != col) {
            a.row(pivot).swap(a.row(col));
            inv.row(pivot).swap(inv.row(col));
        }
        const double d = a(col, col);
        a.row(col) /= d;
        inv.row(col) /= d;
        for (long r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a(r, col);
            if (f != 0.0) {
                a.row(r) -= f * a.row(col);
                inv.row(r) -= f * inv.row(col);
            }
        }
    }
    return inv;
}

/// Normal-equations least squares: (Z^T Z)^{-1} Z^T y via gj_inverse.
inline Vector normal_equations_solve(const Matrix& Z, const Vector& y) {
    const Matrix ZtZ = Z.transpose() * Z;
    const Vector Zty = Z.transpose() * y;
    return gj_inverse(ZtZ) * Zty;
}

/// Diagonal of the explicit hat matrix Z (Z^T Z)^{-1} Z^T.
inline Vector hat_matrix_diag(const Matrix& Z) {
    const Matrix inv = gj_inverse(Z.transpose() * Z);
    Vector h(Z.rows());
    for (long i = 0; i < Z.rows(); ++i) {
        h(i) = Z.row(i) * inv * Z.row(i).transpose();
    }
    return h;
}

inline Matrix random_matrix(long n, long p, sublev::Rng& rng) {
    Matrix X(n, p);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < p; ++j) X(i, j) = rng.normal();
    }
    return X;
}

inline Vector random_vector(long n, sublev::Rng& rng) {
    Vector v(n);
    for (long i = 0; i < n; ++i) v(i) = rng.normal();
    return v;
}

} // namespace testref
