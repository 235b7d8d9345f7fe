#include "sublev/subdata.hpp"

#include <algorithm>
#include <numeric>

#include "sublev/errors.hpp"

namespace sublev {

std::string selector_name(Selector s) {
    return s == Selector::kLevss ? "levss" : "iboss";
}

Selector selector_from_name(const std::string& name) {
    if (name == "levss") return Selector::kLevss;
    if (name == "iboss") return Selector::kIboss;
    throw ConfigError("unknown subdata selector: " + name);
}

namespace {

void check_k(long n, long p_a, int k) {
    if (p_a < 1) throw InvalidSizeError("subdata: need at least one column");
    if (k < 1) throw InvalidParamError("subdata: k must be >= 1");
    if (k > n) {
        throw KTooLargeError("subdata: k=" + std::to_string(k) + " exceeds n=" +
                             std::to_string(n));
    }
}

} // namespace

SubdataSelection levss_select(const Matrix& X_active, int k) {
    const long n = X_active.rows();
    check_k(n, X_active.cols(), k);

    Matrix Z(n, X_active.cols() + 1);
    Z.col(0).setOnes();
    Z.rightCols(X_active.cols()) = X_active;
    const Vector h = leverage_scores(Z);

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (h(a) != h(b)) return h(a) > h(b);
        return a < b;
    });
    order.resize(static_cast<std::size_t>(k));
    std::sort(order.begin(), order.end());

    SubdataSelection sel;
    sel.selector = Selector::kLevss;
    sel.row_indices = std::move(order);
    Vector hv(k);
    for (int i = 0; i < k; ++i) hv(i) = h(sel.row_indices[static_cast<std::size_t>(i)]);
    sel.leverage_values = std::move(hv);
    return sel;
}

SubdataSelection iboss_select(const Matrix& X_active, int k) {
    const long n = X_active.rows();
    const long p_a = X_active.cols();
    check_k(n, p_a, k);

    // Per covariate: row indices by ascending value and by descending value,
    // both tie-broken toward the smaller row index.
    std::vector<std::vector<int>> asc(static_cast<std::size_t>(p_a));
    std::vector<std::vector<int>> desc(static_cast<std::size_t>(p_a));
    for (long j = 0; j < p_a; ++j) {
        auto& a = asc[static_cast<std::size_t>(j)];
        a.resize(static_cast<std::size_t>(n));
        std::iota(a.begin(), a.end(), 0);
        std::sort(a.begin(), a.end(), [&](int x, int y) {
            if (X_active(x, j) != X_active(y, j)) return X_active(x, j) < X_active(y, j);
            return x < y;
        });
        auto& d = desc[static_cast<std::size_t>(j)];
        d.resize(static_cast<std::size_t>(n));
        std::iota(d.begin(), d.end(), 0);
        std::sort(d.begin(), d.end(), [&](int x, int y) {
            if (X_active(x, j) != X_active(y, j)) return X_active(x, j) > X_active(y, j);
            return x < y;
        });
    }

    std::vector<char> selected(static_cast<std::size_t>(n), 0);
    std::vector<std::size_t> asc_pos(static_cast<std::size_t>(p_a), 0);
    std::vector<std::size_t> desc_pos(static_cast<std::size_t>(p_a), 0);
    std::vector<int> rows;
    rows.reserve(static_cast<std::size_t>(k));

    auto take_next = [&](std::vector<int>& order, std::size_t& pos) {
        while (pos < order.size() && selected[static_cast<std::size_t>(order[pos])]) ++pos;
        const int row = order[pos];
        selected[static_cast<std::size_t>(row)] = 1;
        rows.push_back(row);
    };

    const int per_side = k / (2 * static_cast<int>(p_a));
    for (long j = 0; j < p_a; ++j) {
        for (int t = 0; t < per_side; ++t) {
            take_next(asc[static_cast<std::size_t>(j)], asc_pos[static_cast<std::size_t>(j)]);
        }
        for (int t = 0; t < per_side; ++t) {
            take_next(desc[static_cast<std::size_t>(j)], desc_pos[static_cast<std::size_t>(j)]);
        }
    }
    const int remainder = k - 2 * per_side * static_cast<int>(p_a);
    for (int t = 0; t < remainder; ++t) {
        const std::size_t j = static_cast<std::size_t>(t) % static_cast<std::size_t>(p_a);
        if (t % 2 == 0) {
            take_next(desc[j], desc_pos[j]);
        } else {
            take_next(asc[j], asc_pos[j]);
        }
    }

    std::sort(rows.begin(), rows.end());
    SubdataSelection sel;
    sel.selector = Selector::kIboss;
    sel.row_indices = std::move(rows);
    return sel;
}

} // namespace sublev
