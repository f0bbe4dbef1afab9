#include "sigcomb/report.hpp"

#include <cmath>

#include "sigcomb/version.hpp"

namespace sigcomb::report {

namespace {

nlohmann::json entry_to_json(const miner::TestableEntry& t,
                             const std::vector<std::string>& feature_names) {
    nlohmann::json j;
    std::vector<int> idx;
    std::vector<std::string> names;
    idx.reserve(t.features.size());
    for (int f : t.features) {
        idx.push_back(f + 1);
        if (static_cast<std::size_t>(f) < feature_names.size())
            names.push_back(feature_names[static_cast<std::size_t>(f)]);
    }
    j["features"] = idx;
    j["feature_names"] = names;
    j["eta"] = t.eta;
    j["eta1"] = t.eta1;
    j["min_p_value"] = t.min_p;
    j["p_value"] = t.p_value;
    return j;
}

}  // namespace

nlohmann::json result_to_json(const miner::MiningResult& res,
                              const std::vector<std::string>& feature_names, const RunMeta& meta) {
    nlohmann::json j;
    j["schema_version"] = kResultSchemaVersion;
    j["tool_version"] = kVersion;
    j["method"] = meta.method;
    j["input"] = meta.input;
    j["alpha"] = res.alpha;
    j["n_samples"] = res.n_samples;
    j["n_features"] = res.n_features;
    j["class_ratio_r1"] = res.r1;
    j["labels_swapped"] = meta.labels_swapped;
    j["num_testable"] = res.correction_factor;
    j["num_significant"] = res.significant.size();
    j["sigma_final"] = res.sigma_final;
    j["psi_sigma_final"] = res.psi_sigma_final;
    if (std::isnan(res.delta)) j["delta"] = nullptr;
    else j["delta"] = res.delta;
    j["options"]["threads"] = meta.threads;
    if (meta.seed) j["options"]["seed"] = *meta.seed;

    nlohmann::json testable = nlohmann::json::array();
    for (const auto& t : res.testable) testable.push_back(entry_to_json(t, feature_names));
    j["testable"] = std::move(testable);

    nlohmann::json significant = nlohmann::json::array();
    for (const auto& s : res.significant) significant.push_back(entry_to_json(s, feature_names));
    j["significant"] = std::move(significant);

    j["stats"]["stored"] = res.stats.stored;
    j["stats"]["evicted"] = res.stats.evicted;
    j["stats"]["threshold_updates"] = res.stats.threshold_updates;
    j["stats"]["candidates_final"] = res.candidates_final;
    j["stats"]["testable_count_final"] = res.testable_count_final;

    // Visit counts depend on scheduling in parallel mode; keep them with the
    // wall-clock numbers so deterministic comparisons can strip both.
    j["runtime"]["mine_ms"] = res.stats.mine_ms;
    j["runtime"]["visited"] = res.stats.visited;
    j["runtime"]["pruned"] = res.stats.pruned;
    return j;
}

nlohmann::json eval_report_to_json(const eval::EvalReport& report) {
    nlohmann::json j;
    j["method"] = report.method == eval::Method::copula ? "copula" : "binary";
    if (report.pr.precision) j["precision"] = *report.pr.precision;
    else j["precision"] = nullptr;
    j["recall_paper"] = report.pr.recall_paper;
    j["recall_nonempty"] = report.pr.recall_nonempty;
    j["true_positives"] = report.pr.true_positives;
    j["num_significant"] = report.pr.num_significant;
    j["ground_truth_size"] = report.pr.ground_truth_size;
    j["num_testable"] = report.num_testable;
    j["sigma_final"] = report.sigma_final;
    j["runtime"]["seconds"] = report.runtime_seconds;
    j["runtime"]["visited"] = report.miner_stats.visited;
    j["runtime"]["pruned"] = report.miner_stats.pruned;
    return j;
}

nlohmann::json strip_runtime(nlohmann::json doc) {
    doc.erase("runtime");
    return doc;
}

}  // namespace sigcomb::report
