#include "sublev/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sublev/errors.hpp"
#include "sublev/parallel.hpp"

namespace sublev {

SelectionScore power_error(const std::vector<int>& active_hat,
                           const std::vector<int>& true_active, long p) {
    if (true_active.empty()) {
        throw EmptyTruthError("power_error: empty true active set");
    }
    auto check = [p](const std::vector<int>& v, const char* name) {
        for (int j : v) {
            if (j < 0 || j >= p) {
                throw InvalidParamError(std::string("power_error: ") + name +
                                        " index out of range");
            }
        }
    };
    check(active_hat, "active_hat");
    check(true_active, "true_active");

    std::vector<int> hat = active_hat;
    std::vector<int> truth = true_active;
    std::sort(hat.begin(), hat.end());
    hat.erase(std::unique(hat.begin(), hat.end()), hat.end());
    std::sort(truth.begin(), truth.end());
    truth.erase(std::unique(truth.begin(), truth.end()), truth.end());

    std::vector<int> both;
    std::set_intersection(hat.begin(), hat.end(), truth.begin(), truth.end(),
                          std::back_inserter(both));

    SelectionScore score;
    score.power = static_cast<double>(both.size()) / static_cast<double>(truth.size());
    const long n_inactive = p - static_cast<long>(truth.size());
    score.error = n_inactive == 0
                      ? 0.0
                      : static_cast<double>(hat.size() - both.size()) /
                            static_cast<double>(n_inactive);
    return score;
}

double mse_test(const Vector& beta_true_full, const FittedModel& model,
                const Matrix& X_test) {
    if (beta_true_full.size() != X_test.cols() + 1) {
        throw DimensionMismatchError(
            "mse_test: beta length must be cols(X_test) + 1");
    }
    const Vector true_pred =
        (X_test * beta_true_full.tail(X_test.cols())).array() + beta_true_full(0);
    const Vector est_pred = predict(model, X_test);
    return (true_pred - est_pred).squaredNorm() /
           static_cast<double>(X_test.rows());
}

BootstrapMspe bootstrap_mspe(const Dataset& train, const Dataset& test,
                             const PipelineFn& method, int B, StreamKey key,
                             int workers) {
    if (B < 1) throw InvalidParamError("bootstrap_mspe: B must be >= 1");
    const long n = train.n();

    BootstrapMspe out;
    out.mspe.assign(static_cast<std::size_t>(B),
                    std::numeric_limits<double>::quiet_NaN());
    std::vector<char> ok(static_cast<std::size_t>(B), 0);

    parallel_for(static_cast<std::size_t>(B), workers, [&](std::size_t b) {
        Rng rng(key.derive("bootstrap", b));
        std::vector<int> rows(static_cast<std::size_t>(n));
        for (long i = 0; i < n; ++i) {
            rows[static_cast<std::size_t>(i)] =
                static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
        }
        const Dataset resampled = take_rows(train, rows);
        try {
            const FittedModel model = method(resampled, key.derive("fit", b));
            const Vector pred = predict(model, test.X);
            out.mspe[b] = (test.y - pred).squaredNorm() /
                          static_cast<double>(test.n());
            ok[b] = 1;
        } catch (const Error&) {
            // replicate marked failed below
        }
    });

    for (char flag : ok) {
        if (!flag) ++out.n_failed;
    }
    return out;
}

} // namespace sublev
