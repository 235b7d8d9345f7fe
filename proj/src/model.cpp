#include "sublev/model.hpp"

#include "sublev/errors.hpp"

namespace sublev {

FittedModel fit_final(const Dataset& data, const ActiveSet& active,
                      const SubdataSelection& selection) {
    FittedModel model;
    model.active_indices = active.indices;
    model.meta.selector = selector_name(selection.selector);
    model.meta.k = static_cast<int>(selection.row_indices.size());

    if (active.indices.empty()) {
        model.slopes = Vector(0);
        model.intercept = data.y.mean();
        model.meta.selector = "none";
        return model;
    }

    const long k = static_cast<long>(selection.row_indices.size());
    const long p_a = static_cast<long>(active.indices.size());
    Matrix Z(k, p_a + 1);
    Vector ys(k);
    Z.col(0).setOnes();
    for (long i = 0; i < k; ++i) {
        const int row = selection.row_indices[static_cast<std::size_t>(i)];
        for (long j = 0; j < p_a; ++j) {
            Z(i, j + 1) = data.X(row, active.indices[static_cast<std::size_t>(j)]);
        }
        ys(i) = data.y(row);
    }
    const OlsFit ols = ols_fit(Z, ys);
    model.slopes = ols.coefficients.tail(p_a);

    // Adjusted intercept: full-data means replace the subdata intercept.
    double xbar_dot = 0.0;
    for (long j = 0; j < p_a; ++j) {
        xbar_dot +=
            data.X.col(active.indices[static_cast<std::size_t>(j)]).mean() * model.slopes(j);
    }
    model.intercept = data.y.mean() - xbar_dot;
    return model;
}

Vector predict(const FittedModel& model, const Matrix& X_test) {
    for (int j : model.active_indices) {
        if (j < 0 || j >= X_test.cols()) {
            throw DimensionMismatchError(
                "predict: test matrix lacks active column " + std::to_string(j));
        }
    }
    Vector out = Vector::Constant(X_test.rows(), model.intercept);
    for (std::size_t j = 0; j < model.active_indices.size(); ++j) {
        out += model.slopes(static_cast<long>(j)) *
               X_test.col(model.active_indices[j]);
    }
    return out;
}

nlohmann::json model_to_json(const FittedModel& model) {
    nlohmann::json j;
    j["active"] = model.active_indices;
    std::vector<double> slopes(model.slopes.data(),
                               model.slopes.data() + model.slopes.size());
    j["slopes"] = slopes;
    j["intercept"] = model.intercept;
    j["meta"] = {{"selector", model.meta.selector},
                 {"k", model.meta.k},
                 {"seed", model.meta.seed},
                 {"timings", model.meta.timings}};
    return j;
}

} // namespace sublev
