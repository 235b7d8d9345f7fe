#include "sublev/varselect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sublev/errors.hpp"
#include "sublev/lasso.hpp"
#include "sublev/parallel.hpp"

namespace sublev {

int VarSelectConfig::resolved_ps(long p) const {
    if (p_s > 0) return p_s;
    return static_cast<int>(std::ceil(0.1 * static_cast<double>(p)));
}

void VarSelectConfig::validate(long n, long p) const {
    if (n1 < 1 || n2 < 1) throw InvalidParamError("varselect: n1, n2 must be >= 1");
    if (s < 1 || s > n) {
        throw InvalidSizeError("varselect: subsample size s must be in [1, n]");
    }
    const int ps = resolved_ps(p);
    if (ps < 1 || ps > p) {
        throw InvalidParamError("varselect: p_s must be in [1, p]");
    }
}

std::vector<int> subsample_without_replacement(int n, int s, Rng& rng) {
    if (s < 1 || s > n) {
        throw InvalidSizeError("subsample: need 1 <= s <= n, got s=" +
                               std::to_string(s) + ", n=" + std::to_string(n));
    }
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < s; ++i) {
        const int j =
            i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    idx.resize(static_cast<std::size_t>(s));
    return idx;
}

Vector importance_measure(const Matrix& slope_matrix) {
    if (slope_matrix.rows() < 1) {
        throw InvalidSizeError("importance_measure: need at least one fit");
    }
    return slope_matrix.colwise().mean().cwiseAbs().transpose();
}

CandidateSet weighted_candidate_sample(const Vector& m, int p_s, Rng& rng) {
    if (p_s < 1) throw InvalidParamError("weighted_candidate_sample: p_s >= 1");
    const long p = m.size();

    std::vector<int> positive;
    for (long j = 0; j < p; ++j) {
        if (m(j) > 0.0) positive.push_back(static_cast<int>(j));
    }

    CandidateSet out;
    if (positive.empty()) {
        out.degenerate = true;
        return out;
    }
    if (static_cast<int>(positive.size()) <= p_s) {
        out.indices = positive; // already sorted
        return out;
    }

    std::vector<double> weights(positive.size());
    for (std::size_t i = 0; i < positive.size(); ++i) weights[i] = m(positive[i]);

    for (int draw = 0; draw < p_s; ++draw) {
        double total = 0.0;
        for (double w : weights) total += w;
        const double u = rng.uniform() * total;
        double cum = 0.0;
        std::size_t pick = positive.size(); // sentinel
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            cum += weights[i];
            if (u < cum) {
                pick = i;
                break;
            }
        }
        if (pick == positive.size()) {
            // Rounding pushed u past the last live weight; take it.
            for (std::size_t i = weights.size(); i-- > 0;) {
                if (weights[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        out.indices.push_back(positive[pick]);
        weights[pick] = 0.0;
    }
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

SelectionCounts phase_two_counts(const Dataset& data, const Vector& m,
                                 const VarSelectConfig& cfg, StreamKey key,
                                 int workers) {
    const long n = data.n();
    const long p = data.p();
    cfg.validate(n, p);
    const int ps = cfg.resolved_ps(p);

    std::vector<std::vector<int>> actives(static_cast<std::size_t>(cfg.n2));
    parallel_for(static_cast<std::size_t>(cfg.n2), workers, [&](std::size_t r2) {
        const StreamKey k = key.derive("phase2", r2);
        Rng row_rng(k.derive("rows", 0));
        const std::vector<int> rows =
            subsample_without_replacement(static_cast<int>(n), cfg.s, row_rng);
        Rng cand_rng(k.derive("cand", 0));
        const CandidateSet cand = weighted_candidate_sample(m, ps, cand_rng);
        if (cand.indices.empty()) return; // degenerate round: empty active set

        Matrix Xsub(static_cast<long>(rows.size()),
                    static_cast<long>(cand.indices.size()));
        Vector ysub(static_cast<long>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < cand.indices.size(); ++j) {
                Xsub(static_cast<long>(i), static_cast<long>(j)) =
                    data.X(rows[i], cand.indices[j]);
            }
            ysub(static_cast<long>(i)) = data.y(rows[i]);
        }
        const CvLassoFit cv = cv_lasso(Xsub, ysub, cfg.n_folds, k.derive("cv", 0));
        for (std::size_t j = 0; j < cand.indices.size(); ++j) {
            if (cv.fit.slopes(static_cast<long>(j)) != 0.0) {
                actives[r2].push_back(cand.indices[j]);
            }
        }
    });

    SelectionCounts counts;
    counts.counts.assign(static_cast<std::size_t>(p), 0);
    counts.n_rounds = cfg.n2;
    for (const auto& a : actives) {
        for (int j : a) ++counts.counts[static_cast<std::size_t>(j)];
    }
    return counts;
}

ActiveSet kmeans_split(const SelectionCounts& counts) {
    const std::size_t p = counts.counts.size();
    if (p < 2) throw InvalidSizeError("kmeans_split: need at least 2 variables");

    ActiveSet out;
    out.counts_snapshot = counts;

    std::vector<double> sorted(p);
    for (std::size_t i = 0; i < p; ++i) sorted[i] = counts.counts[i];
    std::sort(sorted.begin(), sorted.end());

    if (sorted.front() == sorted.back()) {
        const double mean =
            std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(p);
        out.cluster_means = {mean, mean};
        out.degenerate = true;
        return out;
    }

    // Exact 1-D 2-means: the optimal two clusters are a threshold split of
    // the sorted values, so scan every boundary between distinct values and
    // keep the one with the least within-cluster sum of squares.
    std::vector<double> prefix(p + 1, 0.0), prefix_sq(p + 1, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        prefix[i + 1] = prefix[i] + sorted[i];
        prefix_sq[i + 1] = prefix_sq[i] + sorted[i] * sorted[i];
    }
    const auto ssq = [&](std::size_t lo, std::size_t hi) { // [lo, hi)
        const double s = prefix[hi] - prefix[lo];
        const double sq = prefix_sq[hi] - prefix_sq[lo];
        const double cnt = static_cast<double>(hi - lo);
        return sq - s * s / cnt;
    };

    std::size_t best_t = 0;
    double best_ssq = 0.0;
    bool found = false;
    for (std::size_t t = 1; t < p; ++t) {
        if (sorted[t - 1] == sorted[t]) continue; // equal values stay together
        const double v = ssq(0, t) + ssq(t, p);
        if (!found || v < best_ssq) {
            found = true;
            best_ssq = v;
            best_t = t;
        }
    }

    const double threshold = 0.5 * (sorted[best_t - 1] + sorted[best_t]);
    out.cluster_means = {prefix[best_t] / static_cast<double>(best_t),
                         (prefix[p] - prefix[best_t]) /
                             static_cast<double>(p - best_t)};
    for (std::size_t j = 0; j < p; ++j) {
        if (counts.counts[j] > threshold) out.indices.push_back(static_cast<int>(j));
    }
    return out;
}

namespace {

// Shared by both selectors: counts of nonzero-slope variables across
// repeated cv_lasso fits on row subsamples of the given columns.
Matrix phase_one_slopes(const Dataset& data, int n_rounds, int sample_size,
                        int n_folds, StreamKey key, const char* label,
                        int workers) {
    const long n = data.n();
    const long p = data.p();
    Matrix slopes(n_rounds, p);
    parallel_for(static_cast<std::size_t>(n_rounds), workers, [&](std::size_t r) {
        const StreamKey k = key.derive(label, r);
        Rng row_rng(k.derive("rows", 0));
        const std::vector<int> rows =
            subsample_without_replacement(static_cast<int>(n), sample_size, row_rng);
        Matrix Xsub(static_cast<long>(rows.size()), p);
        Vector ysub(static_cast<long>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            Xsub.row(static_cast<long>(i)) = data.X.row(rows[i]);
            ysub(static_cast<long>(i)) = data.y(rows[i]);
        }
        const CvLassoFit cv = cv_lasso(Xsub, ysub, n_folds, k.derive("cv", 0));
        slopes.row(static_cast<long>(r)) = cv.fit.slopes.transpose();
    });
    return slopes;
}

} // namespace

ActiveSet select_variables(const Dataset& data, const VarSelectConfig& cfg,
                           StreamKey key, int workers, StageTimings* timings) {
    cfg.validate(data.n(), data.p());

    Matrix slopes;
    {
        StageTimer t(timings, "phase1_lasso");
        slopes = phase_one_slopes(data, cfg.n1, cfg.s, cfg.n_folds, key,
                                  "phase1", workers);
    }
    const Vector m = importance_measure(slopes);

    SelectionCounts counts;
    {
        StageTimer t(timings, "phase2_lasso");
        counts = phase_two_counts(data, m, cfg, key, workers);
    }
    StageTimer t(timings, "kmeans");
    return kmeans_split(counts);
}

ActiveSet select_variables_onephase_baseline(const Dataset& data, int nsample,
                                             int ntimes, StreamKey key,
                                             int workers,
                                             StageTimings* timings) {
    if (ntimes < 1) throw InvalidParamError("baseline: ntimes must be >= 1");
    if (nsample < 1 || nsample > data.n()) {
        throw InvalidSizeError("baseline: nsample must be in [1, n]");
    }

    Matrix slopes;
    {
        StageTimer t(timings, "phase1_lasso");
        slopes = phase_one_slopes(data, ntimes, nsample, 10, key, "onephase",
                                  workers);
    }
    SelectionCounts counts;
    counts.counts.assign(static_cast<std::size_t>(data.p()), 0);
    counts.n_rounds = ntimes;
    for (long r = 0; r < slopes.rows(); ++r) {
        for (long j = 0; j < slopes.cols(); ++j) {
            if (slopes(r, j) != 0.0) ++counts.counts[static_cast<std::size_t>(j)];
        }
    }
    StageTimer t(timings, "kmeans");
    return kmeans_split(counts);
}

} // namespace sublev
