#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "sigcomb/dataset.hpp"
#include "sigcomb/ranking.hpp"

namespace sigcomb::miner {

/// How supports map to minimum attainable p-values. Copula supports of
/// nonempty combinations never exceed 1/2; binary itemset supports live in
/// [0, 1] and use the mirrored bound for eta > 1/2.
enum class SupportKind { copula, binary };

struct MinerOptions {
    double alpha = 0.05;
    std::size_t max_order = 0;  // 0 = unlimited combination size
    int threads = 1;
    std::uint64_t progress_interval = 0;  // visited nodes between stderr reports, 0 = off
    bool record_sigma_trajectory = false;
    /// Sequential-mode instrumentation: called per visited child with its
    /// support and whether the subtree was abandoned.
    std::function<void(const std::vector<int>&, double, bool)> visit_hook;
};

struct MinerStats {
    std::uint64_t visited = 0;  // children whose support was computed
    std::uint64_t pruned = 0;   // children abandoned because eta <= sigma
    std::uint64_t stored = 0;
    std::uint64_t evicted = 0;
    std::uint64_t threshold_updates = 0;
    double mine_ms = 0.0;
};

struct TestableEntry {
    std::vector<int> features;  // sorted, 0-based
    double eta = 0.0;
    double eta1 = 0.0;
    double eta0 = 0.0;
    double min_p = 1.0;   // psi
    double p_value = 1.0; // G-test p-value
};

struct MiningResult {
    std::vector<TestableEntry> testable;     // final T, sorted by (min_p, features)
    std::vector<TestableEntry> significant;  // p < alpha/|T|, sorted by (p, features)
    double alpha = 0.05;
    double delta = 0.0;  // alpha / |T|; NaN when T is empty
    std::size_t correction_factor = 0;  // |T|
    double sigma_final = 0.0;
    double psi_sigma_final = 1.0;  // psi(sigma_final)
    double r1 = 0.0;
    std::int64_t n_samples = 0;
    int n_features = 0;
    SupportKind kind = SupportKind::copula;
    std::size_t candidates_final = 0;      // |C| when the search ended
    std::size_t testable_count_final = 0;  // #{K in C : psi(K) <= psi(sigma_final)}
    MinerStats stats;
    std::vector<double> sigma_trajectory;  // only if requested
};

/// Candidate set C of Algorithm-style mining: entries keyed for minimum-eta
/// eviction plus an order-statistic index over psi. An entry is evicted when
/// its rank r in the (psi, features) order certifies r * psi >= alpha, which
/// cannot hold for any testable combination; sigma rises only through
/// evictions with eta <= r1, the branch where smaller support implies a
/// larger bound.
class CandidateSet {
public:
    CandidateSet(double alpha, double r1, std::int64_t n_samples, SupportKind kind);
    ~CandidateSet();
    CandidateSet(CandidateSet&&) noexcept;
    CandidateSet& operator=(CandidateSet&&) noexcept;

    /// Stores the entry if eta > sigma and runs threshold maintenance.
    /// Returns false when the entry is rejected by the current threshold.
    bool insert(std::vector<int> features, double eta, double eta1, double eta0);

    /// Evicts minimum-eta entries while their testability certificate fails.
    void raise_threshold();

    double sigma() const;
    double psi_sigma() const;
    std::size_t size() const;            // |C|
    std::size_t testable_count() const;  // #{K in C : psi(K) <= psi_sigma}
    std::uint64_t evictions() const;
    std::uint64_t threshold_updates() const;

    double psi_for_support(double eta) const;

    /// Longest prefix of C in (psi, features) order with m * psi_(m) < alpha.
    std::vector<TestableEntry> finalize_testable() const;

    const std::vector<double>* sigma_trajectory() const;
    void enable_sigma_trajectory();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Mines a canonicalized dataset (r1 <= 1/2) for all feature combinations
/// significantly associated with the class label under FWER control.
MiningResult mine(const Dataset& d, const MinerOptions& opts);

/// Engine entry point shared by the copula miner and the binary baseline:
/// columns are per-feature value vectors in [0, 1] whose componentwise
/// products define combination supports.
MiningResult mine_columns(const std::vector<std::vector<double>>& columns,
                          const std::vector<int>& labels, SupportKind kind,
                          const MinerOptions& opts);

}  // namespace sigcomb::miner
