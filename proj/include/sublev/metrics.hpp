#pragma once

#include <functional>
#include <vector>

#include "sublev/dataset.hpp"
#include "sublev/linalg.hpp"
#include "sublev/model.hpp"
#include "sublev/rng.hpp"

namespace sublev {

/// power: fraction of true actives declared active.
/// error: fraction of inactives declared active.
struct SelectionScore {
    double power = 0.0;
    double error = 0.0;
};

SelectionScore power_error(const std::vector<int>& active_hat,
                           const std::vector<int>& true_active, long p);

/// Mean squared difference of true and fitted linear predictors over the
/// test rows. beta_true_full holds the intercept first, then all p slopes.
double mse_test(const Vector& beta_true_full, const FittedModel& model,
                const Matrix& X_test);

using PipelineFn = std::function<FittedModel(const Dataset&, StreamKey)>;

struct BootstrapMspe {
    std::vector<double> mspe; // length B; NaN where the pipeline failed
    int n_failed = 0;
};

/// For each of B bootstrap resamples of the training rows (size n, with
/// replacement), runs the pipeline and scores mean squared prediction error
/// against the observed test responses. Failed replicates are marked, not
/// fatal.
BootstrapMspe bootstrap_mspe(const Dataset& train, const Dataset& test,
                             const PipelineFn& method, int B, StreamKey key,
                             int workers = 1);

} // namespace sublev
