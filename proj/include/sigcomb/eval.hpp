#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigcomb/dataset.hpp"
#include "sigcomb/miner.hpp"

namespace sigcomb::eval {

struct PrecisionRecall {
    std::optional<double> precision;  // empty when no combinations were reported
    double recall_paper = 0.0;        // TP / 2^|A| (counts the empty set in the denominator)
    double recall_nonempty = 0.0;     // TP / (2^|A| - 1)
    std::int64_t true_positives = 0;
    std::size_t num_significant = 0;
    std::size_t ground_truth_size = 0;
};

/// A combination is a true positive when it is a subset of the ground truth.
PrecisionRecall precision_recall(const std::vector<std::vector<int>>& significant,
                                 const std::vector<int>& ground_truth);

struct NullSpec {
    std::int64_t n_samples = 100;
    int n_features = 15;
    double r1 = 0.5;
    std::uint64_t master_seed = 0;
};

struct FwerResult {
    double fwer = 0.0;
    int runs_with_rejections = 0;
    int repetitions = 0;
};

/// Fraction of independently generated null datasets on which the miner
/// reports at least one significant combination. Per-run seeds derive
/// deterministically from the master seed.
FwerResult fwer_simulation(const NullSpec& spec, double alpha, int repetitions, int threads = 1);

enum class Method { copula, binary };

struct EvalReport {
    Method method = Method::copula;
    PrecisionRecall pr;
    double runtime_seconds = 0.0;  // mining only; binarization excluded for the baseline
    std::size_t num_testable = 0;
    std::size_t num_significant = 0;
    double sigma_final = 0.0;
    miner::MinerStats miner_stats;
};

/// Runs one method on a canonicalized dataset and scores it against the
/// planted ground truth (0-based source feature indices). The timer covers
/// rank precomputation plus mining for the copula method, and mining only
/// for the baseline.
EvalReport benchmark(const Dataset& canonical, const std::vector<int>& ground_truth, Method method,
                     double alpha, int threads = 1);

/// Ground truth for the binarized space: both indicator children of every
/// planted source feature.
std::vector<int> expand_binary_truth(const std::vector<int>& ground_truth);

}  // namespace sigcomb::eval
