#pragma once

#include <string>

#include "sublev/linalg.hpp"
#include "sublev/rng.hpp"

namespace sublev {

enum class CovKind { kIdentity, kEquicorrelated }; // 0.5 (J + I)

/// Covariate row distribution. Mixture draws each row's component uniformly
/// from {normal, lognormal, t(2), t(3)}.
struct Distribution {
    enum class Kind { kNormal, kLogNormal, kStudentT, kMixture };
    Kind kind = Kind::kNormal;
    int df = 2; // for kStudentT

    static Distribution parse(const std::string& name);
    std::string name() const;
};

struct SimConfig {
    int n = 10000;
    int p = 500;
    int p1 = 10; // true actives: the first p1 columns
    double beta_active = 1.0;
    double intercept = 1.0;
    double sigma2 = 9.0;
    Distribution dist;
    CovKind cov = CovKind::kIdentity;

    void validate() const;
    /// Full coefficient vector (intercept first) of the generating model.
    Vector true_beta() const;
};

Matrix covariance_matrix(CovKind kind, int p);

/// n x p covariate draw. The correlation structure is applied through the
/// Cholesky factor of the covariance; lognormal rows exponentiate the
/// correlated normal draw, and t rows divide it by sqrt(chi2_df / df)
/// (covariance acts as the scale matrix). Generation runs over fixed row
/// blocks with per-block streams, so output does not depend on the worker
/// count.
Matrix gen_covariates(const SimConfig& cfg, StreamKey key, int workers = 1);

/// y_i = intercept + beta_active * sum of the first p1 covariates + eps,
/// eps iid N(0, sigma2).
Vector gen_response(const Matrix& X, const SimConfig& cfg, StreamKey key);

} // namespace sublev
