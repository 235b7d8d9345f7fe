#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sublev/linalg.hpp"

namespace sublev {

enum class Selector { kLevss, kIboss };

std::string selector_name(Selector s);
Selector selector_from_name(const std::string& name);

struct SubdataSelection {
    std::vector<int> row_indices; // sorted ascending, length k
    Selector selector = Selector::kLevss;
    std::optional<Vector> leverage_values; // aligned with row_indices (LEVSS)
};

/// Deterministic top-k leverage selection: leverage scores are computed on
/// the design (1, X_active) and the k rows with the largest scores are kept,
/// ties resolved toward the smaller row index.
SubdataSelection levss_select(const Matrix& X_active, int k);

/// Extreme-value selection: cycling over covariates, take floor(k / (2 p_a))
/// not-yet-selected rows with the smallest and the same number with the
/// largest values of each; any remainder is handed out one row at a time
/// over covariates in order, alternating max side first. Ties resolved
/// toward the smaller row index.
SubdataSelection iboss_select(const Matrix& X_active, int k);

} // namespace sublev
