#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sigcomb/dataset.hpp"

namespace sigcomb::ranking {

/// Normalized midranks pi(v) = (k - 1) / (N - 1) in [0, 1]; tied values
/// receive the average of their occupied rank positions, which keeps every
/// column mean at exactly 1/2.
std::vector<double> normalized_ranks(std::span<const double> column);

/// Column-wise normalized ranks of a dataset; computed once and shared.
struct RankMatrix {
    std::vector<std::vector<double>> columns;  // n columns of length N, entries in [0, 1]

    std::size_t n_samples() const { return columns.empty() ? 0 : columns[0].size(); }
    std::size_t n_features() const { return columns.size(); }
};

RankMatrix rank_matrix(const Dataset& d);

/// Componentwise product step x_{J u {j}} = x_J * pi(v^j). The empty-set
/// product is the all-ones vector.
void extend_product(std::span<const double> product, std::span<const double> rank_column,
                    std::span<double> out);
std::vector<double> extend_product(std::span<const double> product,
                                   std::span<const double> rank_column);

/// Copula support eta(J): mean of the product vector (compensated sum).
double copula_support(std::span<const double> product);

struct ClassSupports {
    double eta = 0.0;   // overall support
    double eta1 = 0.0;  // class-1 part
    double eta0 = 0.0;  // class-0 part
};

/// (eta1, eta0) with eta1 = (1/N) sum_i x_i [y_i = 1]; eta1 + eta0 = eta.
ClassSupports class_conditional_support(std::span<const double> product, std::span<const int> labels);

/// A feature combination with its product vector and supports.
struct Combination {
    std::vector<int> features;  // sorted, 0-based
    std::vector<double> product;
    double support = 0.0;
    double support1 = 0.0;
    double support0 = 0.0;
    double min_p = 1.0;  // psi(J)
};

/// Builds a combination from scratch, multiplying columns in ascending
/// feature order. r1 is the canonical minor-class ratio used for psi.
Combination combination(const RankMatrix& rm, std::span<const int> features,
                        std::span<const int> labels, double r1);

/// Debug dump, one row per sample, tab-separated.
void write_ranks_tsv(const RankMatrix& rm, std::ostream& out);

}  // namespace sigcomb::ranking
