#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sigcomb {

enum class DataErrorCode {
    missing_file,
    missing_label_column,
    non_numeric_cell,
    non_binary_label,
    single_class,
    too_few_rows,
    bad_format,
};

class DataError : public std::runtime_error {
public:
    DataError(DataErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    DataErrorCode code() const { return code_; }

private:
    DataErrorCode code_;
};

/// Supervised dataset: n continuous feature columns of length N plus binary
/// labels. Immutable after construction; construction validates invariants
/// (N >= 2, n >= 1, all values finite, both classes present).
struct Dataset {
    std::vector<std::vector<double>> columns;  // column-major, n columns of length N
    std::vector<int> labels;                   // values in {0, 1}
    std::vector<std::string> feature_names;
    std::string label_name = "label";

    std::size_t n_samples() const { return labels.size(); }
    std::size_t n_features() const { return columns.size(); }
    double value(std::size_t row, std::size_t col) const { return columns[col][row]; }

    static Dataset create(std::vector<std::vector<double>> columns, std::vector<int> labels,
                          std::vector<std::string> feature_names, std::string label_name = "label");
};

struct ClassRatios {
    double r1 = 0.0;  // probability of class 1
    double r0 = 0.0;  // probability of class 0; r1 + r0 == 1 exactly
    std::int64_t n1 = 0;
    bool swapped = false;  // labels were inverted during canonicalization
};

/// Reads a CSV with a mandatory header row; the label column is selected by
/// name, all other columns must parse as finite numbers and labels must be
/// literally 0 or 1.
Dataset load_dataset(const std::filesystem::path& path, const std::string& label_column = "label");

/// Writes a dataset back to CSV with shortest round-trip number formatting.
void save_dataset(const Dataset& d, const std::filesystem::path& path);

ClassRatios class_ratios(const Dataset& d);

/// Flips all labels when class 1 is the majority so the result always has
/// r1 <= 1/2; values are untouched. Idempotent.
std::pair<Dataset, ClassRatios> canonicalize_labels(const Dataset& d);

}  // namespace sigcomb
