#include "sigcomb/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sigcomb {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_number(const std::string& raw, std::size_t row, const std::string& col) {
    const std::string s = trim(raw);
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (s.empty() || end != begin + s.size() || !std::isfinite(v)) {
        throw DataError(DataErrorCode::non_numeric_cell,
                        "non-numeric cell in column '" + col + "', data row " + std::to_string(row + 1) +
                            ": '" + s + "'");
    }
    return v;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

Dataset Dataset::create(std::vector<std::vector<double>> columns, std::vector<int> labels,
                        std::vector<std::string> feature_names, std::string label_name) {
    const std::size_t n_rows = labels.size();
    if (n_rows < 2) throw DataError(DataErrorCode::too_few_rows, "dataset needs at least 2 rows");
    if (columns.empty()) throw DataError(DataErrorCode::bad_format, "dataset needs at least one feature");
    if (feature_names.size() != columns.size())
        throw DataError(DataErrorCode::bad_format, "feature name count does not match column count");
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j].size() != n_rows)
            throw DataError(DataErrorCode::bad_format, "column length mismatch in column " + std::to_string(j));
        for (double v : columns[j]) {
            if (!std::isfinite(v))
                throw DataError(DataErrorCode::non_numeric_cell, "non-finite value in column " + std::to_string(j));
        }
    }
    bool has0 = false, has1 = false;
    for (int y : labels) {
        if (y == 0) has0 = true;
        else if (y == 1) has1 = true;
        else throw DataError(DataErrorCode::non_binary_label, "label not binary: " + std::to_string(y));
    }
    if (!has0 || !has1) throw DataError(DataErrorCode::single_class, "single-class dataset");

    Dataset d;
    d.columns = std::move(columns);
    d.labels = std::move(labels);
    d.feature_names = std::move(feature_names);
    d.label_name = std::move(label_name);
    return d;
}

Dataset load_dataset(const std::filesystem::path& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw DataError(DataErrorCode::missing_file, "cannot open file: " + path.string());

    std::string header_line;
    if (!std::getline(in, header_line))
        throw DataError(DataErrorCode::bad_format, "empty file: " + path.string());
    std::vector<std::string> header = split_csv_line(header_line);
    for (auto& h : header) h = trim(h);

    std::size_t label_idx = header.size();
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == label_column) {
            label_idx = j;
            break;
        }
    }
    if (label_idx == header.size())
        throw DataError(DataErrorCode::missing_label_column, "label column '" + label_column + "' not found");
    if (header.size() < 2)
        throw DataError(DataErrorCode::bad_format, "need at least one feature column besides the label");

    std::vector<std::string> names;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j != label_idx) names.push_back(header[j]);
    }

    std::vector<std::vector<double>> columns(names.size());
    std::vector<int> labels;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw DataError(DataErrorCode::bad_format, "data row " + std::to_string(row + 1) + " has " +
                                                           std::to_string(cells.size()) + " cells, expected " +
                                                           std::to_string(header.size()));
        std::size_t out_col = 0;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (j == label_idx) {
                const std::string s = trim(cells[j]);
                if (s == "0") labels.push_back(0);
                else if (s == "1") labels.push_back(1);
                else
                    throw DataError(DataErrorCode::non_binary_label,
                                    "label not binary in data row " + std::to_string(row + 1) + ": '" + s + "'");
            } else {
                columns[out_col].push_back(parse_number(cells[j], row, names[out_col]));
                ++out_col;
            }
        }
        ++row;
    }
    return Dataset::create(std::move(columns), std::move(labels), std::move(names), label_column);
}

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError(DataErrorCode::missing_file, "cannot write file: " + path.string());
    for (std::size_t j = 0; j < d.feature_names.size(); ++j) out << d.feature_names[j] << ',';
    out << d.label_name << '\n';
    for (std::size_t i = 0; i < d.n_samples(); ++i) {
        for (std::size_t j = 0; j < d.n_features(); ++j) out << format_double(d.columns[j][i]) << ',';
        out << d.labels[i] << '\n';
    }
}

ClassRatios class_ratios(const Dataset& d) {
    ClassRatios r;
    for (int y : d.labels) r.n1 += y;
    r.r1 = static_cast<double>(r.n1) / static_cast<double>(d.n_samples());
    // 1 - r1 is within half an ulp of the true n0/N, and r1 + (1 - r1)
    // rounds back to 1.0 exactly.
    r.r0 = 1.0 - r.r1;
    return r;
}

std::pair<Dataset, ClassRatios> canonicalize_labels(const Dataset& d) {
    ClassRatios r = class_ratios(d);
    if (r.r1 <= 0.5) {
        r.swapped = false;
        return {d, r};
    }
    Dataset flipped = d;
    for (int& y : flipped.labels) y = 1 - y;
    ClassRatios rf = class_ratios(flipped);
    rf.swapped = true;
    return {std::move(flipped), rf};
}

}  // namespace sigcomb
