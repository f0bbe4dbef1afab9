#include "sigcomb/eval.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include "sigcomb/baseline.hpp"
#include "sigcomb/synth.hpp"

namespace sigcomb::eval {

PrecisionRecall precision_recall(const std::vector<std::vector<int>>& significant,
                                 const std::vector<int>& ground_truth) {
    const std::set<int> truth(ground_truth.begin(), ground_truth.end());
    PrecisionRecall pr;
    pr.num_significant = significant.size();
    pr.ground_truth_size = truth.size();
    for (const auto& combo : significant) {
        const bool tp = std::all_of(combo.begin(), combo.end(),
                                    [&](int f) { return truth.count(f) > 0; });
        if (tp) ++pr.true_positives;
    }
    if (!significant.empty())
        pr.precision = static_cast<double>(pr.true_positives) / static_cast<double>(significant.size());
    const double denom_paper = std::pow(2.0, static_cast<double>(truth.size()));
    pr.recall_paper = static_cast<double>(pr.true_positives) / denom_paper;
    pr.recall_nonempty = denom_paper > 1.0
                             ? static_cast<double>(pr.true_positives) / (denom_paper - 1.0)
                             : 0.0;
    return pr;
}

FwerResult fwer_simulation(const NullSpec& spec, double alpha, int repetitions, int threads) {
    if (repetitions < 1) throw std::invalid_argument("fwer_simulation: repetitions < 1");
    if (threads < 1) threads = 1;

    std::atomic<int> next{0};
    std::atomic<int> rejections{0};
    auto work = [&] {
        int i;
        while ((i = next.fetch_add(1)) < repetitions) {
            const std::uint64_t seed = synth::derive_seed(spec.master_seed, static_cast<std::uint64_t>(i));
            Dataset d = synth::generate_null(spec.n_samples, spec.n_features, spec.r1, seed);
            miner::MinerOptions opts;
            opts.alpha = alpha;
            const auto res = miner::mine(d, opts);
            if (!res.significant.empty()) rejections.fetch_add(1);
        }
    };

    if (threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    FwerResult out;
    out.repetitions = repetitions;
    out.runs_with_rejections = rejections.load();
    out.fwer = static_cast<double>(out.runs_with_rejections) / static_cast<double>(repetitions);
    return out;
}

std::vector<int> expand_binary_truth(const std::vector<int>& ground_truth) {
    std::vector<int> out;
    out.reserve(2 * ground_truth.size());
    for (int j : ground_truth) {
        out.push_back(2 * j);      // <= median child
        out.push_back(2 * j + 1);  // > median child
    }
    return out;
}

EvalReport benchmark(const Dataset& canonical, const std::vector<int>& ground_truth, Method method,
                     double alpha, int threads) {
    EvalReport report;
    report.method = method;

    miner::MinerOptions opts;
    opts.alpha = alpha;
    opts.threads = threads;

    miner::MiningResult res;
    if (method == Method::copula) {
        const auto t0 = std::chrono::steady_clock::now();
        res = miner::mine(canonical, opts);
        const auto t1 = std::chrono::steady_clock::now();
        report.runtime_seconds = std::chrono::duration<double>(t1 - t0).count();
    } else {
        const auto b = baseline::median_binarize(canonical);  // excluded from the timer
        const auto t0 = std::chrono::steady_clock::now();
        res = baseline::mine_binary(b, opts);
        const auto t1 = std::chrono::steady_clock::now();
        report.runtime_seconds = std::chrono::duration<double>(t1 - t0).count();
    }

    std::vector<std::vector<int>> sig;
    sig.reserve(res.significant.size());
    for (const auto& s : res.significant) sig.push_back(s.features);
    const std::vector<int> truth =
        method == Method::copula ? ground_truth : expand_binary_truth(ground_truth);
    report.pr = precision_recall(sig, truth);
    report.num_testable = res.testable.size();
    report.num_significant = res.significant.size();
    report.sigma_final = res.sigma_final;
    report.miner_stats = res.stats;
    return report;
}

}  // namespace sigcomb::eval
