#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sublev/dataset.hpp"
#include "sublev/linalg.hpp"
#include "sublev/subdata.hpp"
#include "sublev/timing.hpp"
#include "sublev/varselect.hpp"

namespace sublev {

struct ModelMeta {
    std::string selector; // "levss", "iboss", or "none"
    int k = 0;
    std::uint64_t seed = 0;
    StageTimings timings;
};

/// Final model: slopes from OLS on the selected subdata, intercept replaced
/// by the full-data adjustment ybar - xbar^T slopes.
struct FittedModel {
    std::vector<int> active_indices; // sorted, 0-based
    Vector slopes;                   // aligned with active_indices
    double intercept = 0.0;
    ModelMeta meta;
};

/// OLS on (1, X[:, active]) over the selected rows, then the adjusted
/// intercept from full-data means. An empty active set degenerates to the
/// intercept-only model with intercept = mean(y) over the full data.
FittedModel fit_final(const Dataset& data, const ActiveSet& active,
                      const SubdataSelection& selection);

/// yhat_i = intercept + sum_j slopes_j * X_test(i, active_j).
Vector predict(const FittedModel& model, const Matrix& X_test);

nlohmann::json model_to_json(const FittedModel& model);

} // namespace sublev
