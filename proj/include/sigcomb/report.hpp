#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sigcomb/eval.hpp"
#include "sigcomb/miner.hpp"

namespace sigcomb::report {

struct RunMeta {
    std::string method;  // "copula" or "binary"
    std::string input;
    bool labels_swapped = false;
    int threads = 1;
    std::optional<std::uint64_t> seed;
};

/// Stable, versioned result document. Feature indices are reported 1-based
/// alongside the original column names. Wall-clock numbers and other
/// run-dependent diagnostics live under "runtime" so that result files from
/// equivalent runs are byte-identical after strip_runtime().
nlohmann::json result_to_json(const miner::MiningResult& res,
                              const std::vector<std::string>& feature_names, const RunMeta& meta);

nlohmann::json eval_report_to_json(const eval::EvalReport& report);

/// Removes the non-deterministic "runtime" section (for comparisons).
nlohmann::json strip_runtime(nlohmann::json doc);

}  // namespace sigcomb::report
