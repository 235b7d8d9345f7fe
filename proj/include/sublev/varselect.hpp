#pragma once

#include <utility>
#include <vector>

#include "sublev/dataset.hpp"
#include "sublev/linalg.hpp"
#include "sublev/rng.hpp"
#include "sublev/timing.hpp"

namespace sublev {

/// Tuning parameters of the two-phase subsampled-LASSO selection.
struct VarSelectConfig {
    int n1 = 50;   // phase-1 subsamples
    int n2 = 100;  // phase-2 subsamples
    int s = 1000;  // subsample size
    int p_s = 0;   // candidate variables per phase-2 sample; 0 = ceil(0.1 p)
    int n_folds = 10;

    int resolved_ps(long p) const;
    void validate(long n, long p) const;
};

struct SelectionCounts {
    std::vector<int> counts; // per variable, in [0, n_rounds]
    int n_rounds = 0;
};

struct ActiveSet {
    std::vector<int> indices; // sorted, 0-based
    SelectionCounts counts_snapshot;
    std::pair<double, double> cluster_means{0.0, 0.0}; // (inactive, active)
    bool degenerate = false;
};

struct CandidateSet {
    std::vector<int> indices; // sorted
    bool degenerate = false;  // all weights zero
};

/// s distinct indices from {0..n-1} via partial Fisher-Yates shuffle.
std::vector<int> subsample_without_replacement(int n, int s, Rng& rng);

/// m_j = |column mean| of the per-subsample slope matrix (n1 x p).
Vector importance_measure(const Matrix& slope_matrix);

/// Sequential weighted sampling without replacement, probability of each
/// remaining variable proportional to m_j. When p_s meets or exceeds the
/// number of positive weights, exactly those variables are returned.
CandidateSet weighted_candidate_sample(const Vector& m, int p_s, Rng& rng);

/// Phase 2: per subsample, draw a fresh candidate set, run cv_lasso on the
/// candidate columns, and count how many samples retain each variable.
SelectionCounts phase_two_counts(const Dataset& data, const Vector& m,
                                 const VarSelectConfig& cfg, StreamKey key,
                                 int workers = 1);

/// Exact 1-D 2-means on the counts: variables in the cluster with the
/// larger mean are active. All-equal counts give an empty, degenerate set.
ActiveSet kmeans_split(const SelectionCounts& counts);

/// Full two-phase selection (phases 1 and 2 plus the cluster split).
ActiveSet select_variables(const Dataset& data, const VarSelectConfig& cfg,
                           StreamKey key, int workers = 1,
                           StageTimings* timings = nullptr);

/// One-phase baseline: ntimes plain cv_lasso fits on subsamples of size
/// nsample over all variables, then the same cluster split on the
/// nonzero-slope counts.
ActiveSet select_variables_onephase_baseline(const Dataset& data, int nsample,
                                             int ntimes, StreamKey key,
                                             int workers = 1,
                                             StageTimings* timings = nullptr);

} // namespace sublev
