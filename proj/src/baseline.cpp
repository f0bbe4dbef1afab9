#include "sigcomb/baseline.hpp"

#include <algorithm>
#include <fstream>

namespace sigcomb::baseline {

namespace {

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    if (n % 2 == 1) return v[mid];
    const double hi = v[mid];
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

}  // namespace

BinaryDataset median_binarize(const Dataset& d) {
    BinaryDataset b;
    b.labels = d.labels;
    const std::size_t n = d.n_features();
    const std::size_t rows = d.n_samples();
    b.columns.reserve(2 * n);
    b.provenance.reserve(2 * n);
    b.names.reserve(2 * n);
    b.medians.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double med = median_of(d.columns[j]);
        b.medians.push_back(med);
        std::vector<double> le(rows), gt(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            const bool below = d.columns[j][i] <= med;
            le[i] = below ? 1.0 : 0.0;
            gt[i] = below ? 0.0 : 1.0;
        }
        b.columns.push_back(std::move(le));
        b.columns.push_back(std::move(gt));
        const std::string stem = "f" + std::to_string(j + 1);
        b.names.push_back(stem + "_le");
        b.names.push_back(stem + "_gt");
        b.provenance.push_back(BinaryFeature{static_cast<int>(j), BinaryFeature::Side::le_med});
        b.provenance.push_back(BinaryFeature{static_cast<int>(j), BinaryFeature::Side::gt_med});
    }
    return b;
}

miner::MiningResult mine_binary(const BinaryDataset& b, const miner::MinerOptions& opts) {
    return miner::mine_columns(b.columns, b.labels, miner::SupportKind::binary, opts);
}

void save_binary_csv(const BinaryDataset& b, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError(DataErrorCode::missing_file, "cannot write file: " + path.string());
    for (const auto& name : b.names) out << name << ',';
    out << "label\n";
    for (std::size_t i = 0; i < b.n_samples(); ++i) {
        for (std::size_t j = 0; j < b.n_features(); ++j) out << (b.columns[j][i] != 0.0 ? '1' : '0') << ',';
        out << b.labels[i] << '\n';
    }
}

}  // namespace sigcomb::baseline
