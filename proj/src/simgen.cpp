#include "sublev/simgen.hpp"

#include <cmath>

#include "sublev/errors.hpp"
#include "sublev/parallel.hpp"

namespace sublev {

namespace {

constexpr long kGenBlock = 1024;

enum class RowKind { kNormal, kLogNormal, kStudentT };

} // namespace

Distribution Distribution::parse(const std::string& name) {
    Distribution d;
    if (name == "normal") {
        d.kind = Kind::kNormal;
    } else if (name == "lognormal") {
        d.kind = Kind::kLogNormal;
    } else if (name == "t2") {
        d.kind = Kind::kStudentT;
        d.df = 2;
    } else if (name == "t3") {
        d.kind = Kind::kStudentT;
        d.df = 3;
    } else if (name == "mixture") {
        d.kind = Kind::kMixture;
    } else {
        throw ConfigError("unknown distribution: " + name);
    }
    return d;
}

std::string Distribution::name() const {
    switch (kind) {
    case Kind::kNormal: return "normal";
    case Kind::kLogNormal: return "lognormal";
    case Kind::kStudentT: return "t" + std::to_string(df);
    case Kind::kMixture: return "mixture";
    }
    return "?";
}

void SimConfig::validate() const {
    if (n < 1 || p < 1) throw InvalidParamError("simgen: n, p must be >= 1");
    if (p1 < 0 || p1 > p) throw InvalidParamError("simgen: need 0 <= p1 <= p");
    if (sigma2 < 0.0) throw InvalidParamError("simgen: sigma2 must be >= 0");
    if (dist.kind == Distribution::Kind::kStudentT && dist.df < 1) {
        throw InvalidParamError("simgen: t distribution needs df >= 1");
    }
}

Vector SimConfig::true_beta() const {
    Vector beta = Vector::Zero(p + 1);
    beta(0) = intercept;
    for (int j = 0; j < p1; ++j) beta(j + 1) = beta_active;
    return beta;
}

Matrix covariance_matrix(CovKind kind, int p) {
    if (kind == CovKind::kIdentity) return Matrix::Identity(p, p);
    Matrix s = Matrix::Constant(p, p, 0.5);
    s.diagonal().setOnes();
    return s;
}

Matrix gen_covariates(const SimConfig& cfg, StreamKey key, int workers) {
    cfg.validate();
    const long n = cfg.n;
    const long p = cfg.p;

    Matrix chol_t; // L^T, empty for identity covariance
    if (cfg.cov != CovKind::kIdentity) {
        chol_t = cholesky_factor(covariance_matrix(cfg.cov, cfg.p)).transpose();
    }

    Matrix X(n, p);
    const long n_blocks = (n + kGenBlock - 1) / kGenBlock;

    parallel_for(static_cast<std::size_t>(n_blocks), workers, [&](std::size_t b) {
        const long row0 = static_cast<long>(b) * kGenBlock;
        const long rows = std::min(kGenBlock, n - row0);
        Rng rng(key.derive("cov", b));

        Matrix block(rows, p);
        std::vector<RowKind> kinds(static_cast<std::size_t>(rows));
        std::vector<double> divisor(static_cast<std::size_t>(rows), 1.0);

        for (long i = 0; i < rows; ++i) {
            RowKind kind = RowKind::kNormal;
            int df = cfg.dist.df;
            switch (cfg.dist.kind) {
            case Distribution::Kind::kNormal: break;
            case Distribution::Kind::kLogNormal: kind = RowKind::kLogNormal; break;
            case Distribution::Kind::kStudentT: kind = RowKind::kStudentT; break;
            case Distribution::Kind::kMixture:
                switch (rng.uniform_below(4)) {
                case 0: break;
                case 1: kind = RowKind::kLogNormal; break;
                case 2: kind = RowKind::kStudentT; df = 2; break;
                default: kind = RowKind::kStudentT; df = 3; break;
                }
                break;
            }
            kinds[static_cast<std::size_t>(i)] = kind;
            for (long j = 0; j < p; ++j) block(i, j) = rng.normal();
            if (kind == RowKind::kStudentT) {
                divisor[static_cast<std::size_t>(i)] =
                    std::sqrt(rng.chisquare(df) / df);
            }
        }

        if (chol_t.size() > 0) block = block * chol_t;

        for (long i = 0; i < rows; ++i) {
            switch (kinds[static_cast<std::size_t>(i)]) {
            case RowKind::kLogNormal:
                block.row(i) = block.row(i).array().exp();
                break;
            case RowKind::kStudentT:
                block.row(i) /= divisor[static_cast<std::size_t>(i)];
                break;
            case RowKind::kNormal:
                break;
            }
        }
        X.middleRows(row0, rows) = block;
    });
    return X;
}

Vector gen_response(const Matrix& X, const SimConfig& cfg, StreamKey key) {
    cfg.validate();
    const long n = X.rows();
    if (X.cols() != cfg.p) {
        throw DimensionMismatchError("gen_response: cols(X) != cfg.p");
    }

    Vector y(n);
    const double sigma = std::sqrt(cfg.sigma2);
    const long n_blocks = (n + kGenBlock - 1) / kGenBlock;
    for (long b = 0; b < n_blocks; ++b) {
        const long row0 = b * kGenBlock;
        const long rows = std::min(kGenBlock, n - row0);
        Rng rng(key.derive("resp", static_cast<std::uint64_t>(b)));
        for (long i = 0; i < rows; ++i) {
            const double eps = sigma > 0.0 ? sigma * rng.normal() : 0.0;
            y(row0 + i) = cfg.intercept +
                          cfg.beta_active * X.row(row0 + i).head(cfg.p1).sum() + eps;
        }
    }
    return y;
}

} // namespace sublev
