#include "sigcomb/miner.hpp"

#include <ext/pb_ds/assoc_container.hpp>
#include <ext/pb_ds/tree_policy.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <future>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <thread>
#include <utility>

#include "sigcomb/stats.hpp"

namespace sigcomb::miner {

namespace {

struct Entry {
    std::vector<int> features;
    double eta = 0.0;
    double eta1 = 0.0;
    double eta0 = 0.0;
    double psi = 1.0;
};

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Total order used for testability ranks: (psi, features).
struct PsiLess {
    bool operator()(const Entry* a, const Entry* b) const {
        if (a->psi != b->psi) return a->psi < b->psi;
        return lex_less(a->features, b->features);
    }
};

// Eviction frontier order: (eta, features).
struct EtaLess {
    bool operator()(const Entry* a, const Entry* b) const {
        if (a->eta != b->eta) return a->eta < b->eta;
        return lex_less(a->features, b->features);
    }
};

using PsiTree = __gnu_pbds::tree<Entry*, __gnu_pbds::null_type, PsiLess, __gnu_pbds::rb_tree_tag,
                                 __gnu_pbds::tree_order_statistics_node_update>;

void atomic_store_max(std::atomic<double>& target, double value) {
    double cur = target.load(std::memory_order_relaxed);
    while (cur < value && !target.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
    }
}

}  // namespace

struct CandidateSet::Impl {
    double alpha;
    double r1;
    std::int64_t n_samples;
    SupportKind kind;

    double sigma = 0.0;
    double psi_sigma = 1.0;
    std::deque<Entry> arena;
    std::set<Entry*, EtaLess> by_eta;
    PsiTree by_psi;
    std::uint64_t stored = 0;
    std::uint64_t evicted = 0;
    std::uint64_t updates = 0;
    std::optional<std::vector<double>> trajectory;
};

CandidateSet::CandidateSet(double alpha, double r1, std::int64_t n_samples, SupportKind kind)
    : impl_(std::make_unique<Impl>()) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("CandidateSet: alpha outside (0, 1)");
    if (!(r1 > 0.0 && r1 <= 0.5)) throw std::domain_error("CandidateSet: r1 outside (0, 1/2]");
    if (n_samples < 2) throw std::domain_error("CandidateSet: need at least two samples");
    impl_->alpha = alpha;
    impl_->r1 = r1;
    impl_->n_samples = n_samples;
    impl_->kind = kind;
    impl_->psi_sigma = psi_for_support(0.0);  // sigma = 0, psi(0) = 1
}

CandidateSet::~CandidateSet() = default;
CandidateSet::CandidateSet(CandidateSet&&) noexcept = default;
CandidateSet& CandidateSet::operator=(CandidateSet&&) noexcept = default;

double CandidateSet::psi_for_support(double eta) const {
    double a = eta;
    if (impl_->kind == SupportKind::binary) a = std::min(eta, 1.0 - eta);
    return stats::min_p_value(a, impl_->r1, impl_->n_samples);
}

bool CandidateSet::insert(std::vector<int> features, double eta, double eta1, double eta0) {
    Impl& im = *impl_;
    if (!(eta > im.sigma)) return false;
    Entry e;
    e.features = std::move(features);
    e.eta = eta;
    e.eta1 = eta1;
    e.eta0 = eta0;
    e.psi = psi_for_support(eta);
    im.arena.push_back(std::move(e));
    Entry* p = &im.arena.back();
    im.by_eta.insert(p);
    im.by_psi.insert(p);
    ++im.stored;
    raise_threshold();
    return true;
}

void CandidateSet::raise_threshold() {
    Impl& im = *impl_;
    while (!im.by_eta.empty()) {
        Entry* e = *im.by_eta.begin();
        const std::size_t rank = im.by_psi.order_of_key(e) + 1;
        // A combination at rank r with r * psi >= alpha can never be testable,
        // nor can anything of larger psi; evicting it is safe.
        if (static_cast<double>(rank) * e->psi < im.alpha) break;
        im.by_eta.erase(im.by_eta.begin());
        im.by_psi.erase(e);
        ++im.evicted;
        if (e->eta <= im.r1 && e->eta > im.sigma) {
            // Below r1 the bound shrinks with support, so everything under
            // sigma inherits this entry's certificate and may be pruned.
            im.sigma = e->eta;
            im.psi_sigma = e->psi;
            ++im.updates;
            if (im.trajectory) im.trajectory->push_back(im.sigma);
        }
        std::vector<int>().swap(e->features);
    }
}

double CandidateSet::sigma() const { return impl_->sigma; }
double CandidateSet::psi_sigma() const { return impl_->psi_sigma; }
std::size_t CandidateSet::size() const { return impl_->by_psi.size(); }
std::uint64_t CandidateSet::evictions() const { return impl_->evicted; }
std::uint64_t CandidateSet::threshold_updates() const { return impl_->updates; }

std::size_t CandidateSet::testable_count() const {
    Entry sentinel;
    sentinel.psi = impl_->psi_sigma;
    sentinel.features = {std::numeric_limits<int>::max()};
    return impl_->by_psi.order_of_key(&sentinel);
}

std::vector<TestableEntry> CandidateSet::finalize_testable() const {
    std::vector<TestableEntry> out;
    std::size_t m = 0;
    for (const Entry* e : impl_->by_psi) {
        if (static_cast<double>(m + 1) * e->psi >= impl_->alpha) break;
        ++m;
        TestableEntry t;
        t.features = e->features;
        t.eta = e->eta;
        t.eta1 = e->eta1;
        t.eta0 = e->eta0;
        t.min_p = e->psi;
        out.push_back(std::move(t));
    }
    return out;
}

const std::vector<double>* CandidateSet::sigma_trajectory() const {
    return impl_->trajectory ? &*impl_->trajectory : nullptr;
}

void CandidateSet::enable_sigma_trajectory() {
    if (!impl_->trajectory) impl_->trajectory.emplace();
}

namespace {

class Engine {
public:
    Engine(const std::vector<std::vector<double>>& columns, const std::vector<int>& labels,
           SupportKind kind, const MinerOptions& opts)
        : cols_(columns),
          labels_(labels),
          opts_(opts),
          kind_(kind),
          n_(static_cast<int>(columns.size())),
          n_samples_(static_cast<std::int64_t>(labels.size())),
          cs_(opts.alpha, compute_r1(labels), n_samples_, kind),
          ones_(labels.size(), 1.0),
          scratch_(columns.size()) {
        r1_ = compute_r1(labels);
        max_order_eff_ = opts_.max_order == 0 ? std::numeric_limits<std::size_t>::max() : opts_.max_order;
        if (opts_.record_sigma_trajectory) cs_.enable_sigma_trajectory();
        shared_sigma_.store(0.0, std::memory_order_relaxed);
    }

    static double compute_r1(const std::vector<int>& labels) {
        std::int64_t n1 = 0;
        for (int y : labels) n1 += y;
        return static_cast<double>(n1) / static_cast<double>(labels.size());
    }

    MiningResult run() {
        const auto t0 = std::chrono::steady_clock::now();
        if (opts_.threads > 1 && n_ > 1) {
            run_parallel();
        } else {
            std::vector<int> feats;
            dfs(feats, ones_, 0, n_, 0);
        }
        MiningResult res = finalize();
        const auto t1 = std::chrono::steady_clock::now();
        res.stats.mine_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        return res;
    }

private:
    struct Pending {
        std::vector<int> features;
        double eta, eta1, eta0;
    };

    std::vector<double>& scratch_level(std::vector<std::vector<double>>& scratch, std::size_t depth) {
        auto& buf = scratch[depth];
        if (buf.size() != ones_.size()) buf.assign(ones_.size(), 0.0);
        return buf;
    }

    void dfs(std::vector<int>& feats, const std::vector<double>& product, int first, int last,
             std::size_t depth) {
        for (int j = first; j < last; ++j) {
            ++visited_;
            if (opts_.progress_interval && visited_ % opts_.progress_interval == 0) {
                std::fprintf(stderr, "progress: visited=%llu stored=%zu sigma=%g\n",
                             static_cast<unsigned long long>(visited_), cs_.size(), cs_.sigma());
            }
            auto& buf = scratch_level(scratch_, depth);
            ranking::extend_product(product, cols_[static_cast<std::size_t>(j)], buf);
            const auto s = ranking::class_conditional_support(buf, labels_);
            feats.push_back(j);
            const bool prune = !(s.eta > cs_.sigma());
            if (opts_.visit_hook) opts_.visit_hook(feats, s.eta, prune);
            if (prune) {
                ++pruned_;
                feats.pop_back();
                continue;
            }
            cs_.insert(feats, s.eta, s.eta1, s.eta0);
            if (feats.size() < max_order_eff_ && cs_.sigma() < s.eta) {
                dfs(feats, buf, j + 1, n_, depth + 1);
            }
            feats.pop_back();
        }
    }

    // Worker-side exploration against a stale sigma snapshot. Entries that a
    // sharper threshold would have rejected are filtered again on apply.
    void worker_dfs(std::vector<int>& feats, const std::vector<double>& product, int first, int last,
                    std::size_t depth, std::vector<std::vector<double>>& scratch,
                    std::vector<Pending>& out, std::uint64_t& visited, std::uint64_t& pruned) {
        for (int j = first; j < last; ++j) {
            ++visited;
            auto& buf = scratch_level(scratch, depth);
            ranking::extend_product(product, cols_[static_cast<std::size_t>(j)], buf);
            const auto s = ranking::class_conditional_support(buf, labels_);
            const double sigma_view = shared_sigma_.load(std::memory_order_relaxed);
            if (!(s.eta > sigma_view)) {
                ++pruned;
                continue;
            }
            feats.push_back(j);
            out.push_back(Pending{feats, s.eta, s.eta1, s.eta0});
            if (feats.size() < max_order_eff_ && sigma_view < s.eta) {
                worker_dfs(feats, buf, j + 1, n_, depth + 1, scratch, out, visited, pruned);
            }
            feats.pop_back();
        }
    }

    void run_parallel() {
        std::vector<std::promise<std::vector<Pending>>> promises(static_cast<std::size_t>(n_));
        std::vector<std::future<std::vector<Pending>>> futures;
        futures.reserve(promises.size());
        for (auto& p : promises) futures.push_back(p.get_future());

        std::atomic<int> next{0};
        std::atomic<std::uint64_t> visited{0}, pruned{0};
        const int workers = std::min(opts_.threads, n_);
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                std::vector<std::vector<double>> scratch(static_cast<std::size_t>(n_));
                int j;
                while ((j = next.fetch_add(1)) < n_) {
                    try {
                        std::vector<Pending> out;
                        std::vector<int> feats;
                        std::uint64_t v = 0, p = 0;
                        worker_dfs(feats, ones_, j, j + 1, 0, scratch, out, v, p);
                        visited.fetch_add(v);
                        pruned.fetch_add(p);
                        promises[static_cast<std::size_t>(j)].set_value(std::move(out));
                    } catch (...) {
                        promises[static_cast<std::size_t>(j)].set_exception(std::current_exception());
                    }
                }
            });
        }

        // Apply branch buffers strictly in branch order; this reproduces the
        // sequential insertion sequence, so the final state is identical.
        std::exception_ptr failure;
        for (int j = 0; j < n_; ++j) {
            try {
                std::vector<Pending> pend = futures[static_cast<std::size_t>(j)].get();
                if (failure) continue;
                for (auto& p : pend) {
                    if (p.eta > cs_.sigma()) {
                        cs_.insert(std::move(p.features), p.eta, p.eta1, p.eta0);
                        atomic_store_max(shared_sigma_, cs_.sigma());
                    }
                }
            } catch (...) {
                if (!failure) failure = std::current_exception();
            }
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
        visited_ = visited.load();
        pruned_ = pruned.load();
    }

    MiningResult finalize() {
        MiningResult res;
        res.alpha = opts_.alpha;
        res.r1 = r1_;
        res.n_samples = n_samples_;
        res.n_features = n_;
        res.kind = kind_;
        res.sigma_final = cs_.sigma();
        res.psi_sigma_final = cs_.psi_sigma();
        res.candidates_final = cs_.size();
        res.testable_count_final = cs_.testable_count();
        res.testable = cs_.finalize_testable();
        res.correction_factor = res.testable.size();
        res.delta = res.testable.empty() ? std::numeric_limits<double>::quiet_NaN()
                                         : opts_.alpha / static_cast<double>(res.testable.size());
        for (auto& t : res.testable) {
            t.p_value = stats::g_test(t.eta, t.eta1, r1_, n_samples_).p_value;
            if (!res.testable.empty() && t.p_value < res.delta) res.significant.push_back(t);
        }
        std::sort(res.significant.begin(), res.significant.end(),
                  [](const TestableEntry& a, const TestableEntry& b) {
                      if (a.p_value != b.p_value) return a.p_value < b.p_value;
                      return lex_less(a.features, b.features);
                  });
        res.stats.visited = visited_;
        res.stats.pruned = pruned_;
        res.stats.stored = cs_.size() + cs_.evictions();
        res.stats.evicted = cs_.evictions();
        res.stats.threshold_updates = cs_.threshold_updates();
        if (const auto* traj = cs_.sigma_trajectory()) res.sigma_trajectory = *traj;
        return res;
    }

    const std::vector<std::vector<double>>& cols_;
    const std::vector<int>& labels_;
    MinerOptions opts_;
    SupportKind kind_;
    int n_;
    std::int64_t n_samples_;
    double r1_ = 0.0;
    CandidateSet cs_;
    std::vector<double> ones_;
    std::vector<std::vector<double>> scratch_;
    std::size_t max_order_eff_ = 0;
    std::uint64_t visited_ = 0;
    std::uint64_t pruned_ = 0;
    std::atomic<double> shared_sigma_{0.0};
};

}  // namespace

MiningResult mine_columns(const std::vector<std::vector<double>>& columns,
                          const std::vector<int>& labels, SupportKind kind,
                          const MinerOptions& opts) {
    if (!(opts.alpha > 0.0 && opts.alpha < 1.0))
        throw std::invalid_argument("mine: alpha outside (0, 1)");
    if (columns.empty()) throw std::invalid_argument("mine: no feature columns");
    if (labels.size() < 2) throw DataError(DataErrorCode::too_few_rows, "mine: need at least 2 rows");
    for (const auto& c : columns) {
        if (c.size() != labels.size()) throw std::invalid_argument("mine: column length mismatch");
    }
    std::int64_t n1 = 0;
    bool has0 = false;
    for (int y : labels) {
        n1 += y;
        if (y == 0) has0 = true;
    }
    if (n1 == 0 || !has0) throw DataError(DataErrorCode::single_class, "mine: single-class labels");
    if (2 * n1 > static_cast<std::int64_t>(labels.size()))
        throw std::domain_error("mine: labels not canonicalized (class 1 is the majority)");

    MinerOptions eff = opts;
    if (eff.threads < 1) eff.threads = 1;
    Engine engine(columns, labels, kind, eff);
    return engine.run();
}

MiningResult mine(const Dataset& d, const MinerOptions& opts) {
    const ranking::RankMatrix rm = ranking::rank_matrix(d);
    return mine_columns(rm.columns, d.labels, SupportKind::copula, opts);
}

}  // namespace sigcomb::miner
