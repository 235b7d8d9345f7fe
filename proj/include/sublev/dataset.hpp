#pragma once

#include <string>
#include <vector>

#include "sublev/linalg.hpp"

namespace sublev {

/// Covariate matrix plus response. Column names are kept when a CSV header
/// is present; the response is always the last CSV column.
struct Dataset {
    Matrix X;
    Vector y;
    std::vector<std::string> column_names; // empty when no header

    long n() const { return X.rows(); }
    long p() const { return X.cols(); }
};

/// Loads a numeric CSV: optional header, comma-separated, '.' decimals,
/// last column is the response. Rejects NaN/Inf and ragged rows.
/// Throws ParseError (with line/column) or EmptyFileError.
Dataset load_csv(const std::string& path);

/// Writes a dataset in the same format (header row emitted when names exist).
void save_csv(const Dataset& data, const std::string& path);

/// Copies the given rows (and optionally a subset of columns) into a new
/// dataset-shaped pair. Used for subsampling and bootstrap resampling.
Dataset take_rows(const Dataset& data, const std::vector<int>& rows);
Matrix take_columns(const Matrix& X, const std::vector<int>& cols);

} // namespace sublev
