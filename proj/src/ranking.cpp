#include "sigcomb/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "sigcomb/stats.hpp"

namespace sigcomb::ranking {

namespace {

/// Neumaier-compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + carry; }
};

}  // namespace

std::vector<double> normalized_ranks(std::span<const double> column) {
    const std::size_t n = column.size();
    if (n < 2) throw std::invalid_argument("normalized_ranks: need at least two values");
    for (double v : column) {
        if (!std::isfinite(v)) throw std::invalid_argument("normalized_ranks: non-finite value");
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });

    std::vector<double> ranks(n);
    const double denom = static_cast<double>(n - 1);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && column[idx[j + 1]] == column[idx[i]]) ++j;
        // Positions i..j (0-based) share the midrank; pi = (midrank - 1)/(N - 1).
        const double pi = 0.5 * static_cast<double>(i + j) / denom;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = pi;
        i = j + 1;
    }
    return ranks;
}

RankMatrix rank_matrix(const Dataset& d) {
    RankMatrix rm;
    rm.columns.reserve(d.n_features());
    for (const auto& col : d.columns) rm.columns.push_back(normalized_ranks(col));
    return rm;
}

void extend_product(std::span<const double> product, std::span<const double> rank_column,
                    std::span<double> out) {
    if (product.size() != rank_column.size() || product.size() != out.size())
        throw std::invalid_argument("extend_product: length mismatch");
    for (std::size_t i = 0; i < product.size(); ++i) out[i] = product[i] * rank_column[i];
}

std::vector<double> extend_product(std::span<const double> product,
                                   std::span<const double> rank_column) {
    std::vector<double> out(product.size());
    extend_product(product, rank_column, out);
    return out;
}

double copula_support(std::span<const double> product) {
    if (product.empty()) throw std::invalid_argument("copula_support: empty vector");
    CompensatedSum acc;
    for (double x : product) acc.add(x);
    return acc.value() / static_cast<double>(product.size());
}

ClassSupports class_conditional_support(std::span<const double> product,
                                        std::span<const int> labels) {
    if (product.size() != labels.size())
        throw std::invalid_argument("class_conditional_support: length mismatch");
    if (product.empty()) throw std::invalid_argument("class_conditional_support: empty vector");
    CompensatedSum all, c1, c0;
    for (std::size_t i = 0; i < product.size(); ++i) {
        all.add(product[i]);
        if (labels[i] == 1) c1.add(product[i]);
        else c0.add(product[i]);
    }
    const double n = static_cast<double>(product.size());
    return ClassSupports{all.value() / n, c1.value() / n, c0.value() / n};
}

Combination combination(const RankMatrix& rm, std::span<const int> features,
                        std::span<const int> labels, double r1) {
    if (features.empty()) throw std::invalid_argument("combination: empty feature set");
    Combination c;
    c.features.assign(features.begin(), features.end());
    std::sort(c.features.begin(), c.features.end());
    c.product.assign(rm.n_samples(), 1.0);
    for (int j : c.features) {
        extend_product(c.product, rm.columns[static_cast<std::size_t>(j)], c.product);
    }
    const ClassSupports s = class_conditional_support(c.product, labels);
    c.support = s.eta;
    c.support1 = s.eta1;
    c.support0 = s.eta0;
    c.min_p = stats::min_p_value(s.eta, r1, static_cast<std::int64_t>(rm.n_samples()));
    return c;
}

void write_ranks_tsv(const RankMatrix& rm, std::ostream& out) {
    for (std::size_t i = 0; i < rm.n_samples(); ++i) {
        for (std::size_t j = 0; j < rm.n_features(); ++j) {
            if (j) out << '\t';
            out << rm.columns[j][i];
        }
        out << '\n';
    }
}

}  // namespace sigcomb::ranking
