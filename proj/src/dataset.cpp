#include "sublev/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sublev/errors.hpp"

namespace sublev {

namespace {

bool parse_double(const std::string& token, double& out) {
    const char* first = token.data();
    const char* last = first + token.size();
    // Tolerate surrounding spaces.
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r'))
        --last;
    if (first == last) return false;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

} // namespace

Dataset load_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file.is_open()) throw Error("cannot open file: " + path);

    std::string line;
    int line_no = 0;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    long n_cols = -1;

    while (std::getline(file, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);

        if (line_no == 1) {
            // Header detection: a first line with any non-numeric field.
            bool numeric = true;
            double tmp;
            for (const auto& f : fields) {
                if (!parse_double(f, tmp)) {
                    numeric = false;
                    break;
                }
            }
            if (!numeric) {
                header = fields;
                n_cols = static_cast<long>(fields.size());
                continue;
            }
        }

        if (n_cols < 0) n_cols = static_cast<long>(fields.size());
        if (static_cast<long>(fields.size()) != n_cols) {
            throw ParseError("expected " + std::to_string(n_cols) +
                                 " fields, got " + std::to_string(fields.size()),
                             line_no, 1);
        }
        std::vector<double> row(fields.size());
        for (std::size_t j = 0; j < fields.size(); ++j) {
            double v;
            if (!parse_double(fields[j], v)) {
                throw ParseError("not a number: '" + fields[j] + "'", line_no,
                                 static_cast<int>(j + 1));
            }
            if (!std::isfinite(v)) {
                throw ParseError("non-finite value", line_no,
                                 static_cast<int>(j + 1));
            }
            row[j] = v;
        }
        rows.push_back(std::move(row));
    }

    if (rows.empty()) throw EmptyFileError("no data rows in " + path);
    if (n_cols < 2) {
        throw ParseError("need at least one covariate column plus a response",
                         1, 1);
    }

    Dataset data;
    const long n = static_cast<long>(rows.size());
    const long p = n_cols - 1;
    data.X.resize(n, p);
    data.y.resize(n);
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < p; ++j) data.X(i, j) = rows[i][j];
        data.y(i) = rows[i][p];
    }
    if (!header.empty()) data.column_names = header;
    return data;
}

void save_csv(const Dataset& data, const std::string& path) {
    std::ofstream file(path);
    if (!file.is_open()) throw Error("cannot open file for writing: " + path);
    const long n = data.n();
    const long p = data.p();

    if (!data.column_names.empty()) {
        for (std::size_t j = 0; j < data.column_names.size(); ++j) {
            if (j > 0) file << ',';
            file << data.column_names[j];
        }
        file << '\n';
    }
    char buf[64];
    auto put = [&](double v, char sep) {
        const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
        file.write(buf, len);
        file << sep;
    };
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < p; ++j) put(data.X(i, j), ',');
        put(data.y(i), '\n');
    }
}

Dataset take_rows(const Dataset& data, const std::vector<int>& rows) {
    Dataset out;
    out.X.resize(static_cast<long>(rows.size()), data.p());
    out.y.resize(static_cast<long>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.X.row(static_cast<long>(i)) = data.X.row(rows[i]);
        out.y(static_cast<long>(i)) = data.y(rows[i]);
    }
    out.column_names = data.column_names;
    return out;
}

Matrix take_columns(const Matrix& X, const std::vector<int>& cols) {
    Matrix out(X.rows(), static_cast<long>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        out.col(static_cast<long>(j)) = X.col(cols[j]);
    }
    return out;
}

} // namespace sublev
