#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sigcomb/dataset.hpp"
#include "sigcomb/miner.hpp"

namespace sigcomb::baseline {

struct BinaryFeature {
    int source = 0;  // 0-based index of the originating continuous feature
    enum class Side { le_med, gt_med } side = Side::le_med;
};

/// Median-binarized dataset: each continuous feature becomes a complementary
/// (<= median, > median) indicator pair, 2n columns of 0/1 values.
struct BinaryDataset {
    std::vector<std::vector<double>> columns;  // 0.0 / 1.0
    std::vector<int> labels;
    std::vector<BinaryFeature> provenance;
    std::vector<std::string> names;  // f<j>_le / f<j>_gt, 1-based j
    std::vector<double> medians;     // per source feature

    std::size_t n_samples() const { return labels.size(); }
    std::size_t n_features() const { return columns.size(); }
};

/// med(j) is the middle value for odd N and the mean of the two middle values
/// for even N; ties fall into the <= side.
BinaryDataset median_binarize(const Dataset& d);

/// Runs the shared mining engine on the raw 0/1 columns, so eta(J) is the
/// classical itemset support.
miner::MiningResult mine_binary(const BinaryDataset& b, const miner::MinerOptions& opts);

void save_binary_csv(const BinaryDataset& b, const std::filesystem::path& path);

}  // namespace sigcomb::baseline
