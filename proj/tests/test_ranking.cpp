#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "sigcomb/ranking.hpp"
#include "sigcomb/stats.hpp"

using namespace sigcomb;
using namespace sigcomb::ranking;

namespace {

Dataset random_dataset(std::size_t n_rows, std::size_t n_cols, unsigned seed) {
    std::mt19937_64 rng(seed);
    auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<std::vector<double>> cols(n_cols);
    for (auto& c : cols) {
        c.resize(n_rows);
        for (auto& v : c) v = u();
    }
    std::vector<int> labels(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) labels[i] = i % 2 == 0 ? 1 : 0;
    std::vector<std::string> names;
    for (std::size_t j = 0; j < n_cols; ++j) names.push_back("f" + std::to_string(j + 1));
    return Dataset::create(std::move(cols), std::move(labels), std::move(names));
}

}  // namespace

TEST_CASE("normalized_ranks definition and midranks") {
    CHECK(normalized_ranks(std::vector<double>{3.2, 1.1, 2.5}) ==
          std::vector<double>{1.0, 0.0, 0.5});
    CHECK(normalized_ranks(std::vector<double>{5, 5, 7}) == std::vector<double>{0.25, 0.25, 1.0});
    const auto r = normalized_ranks(std::vector<double>{1, 2, 3, 4});
    CHECK(r[0] == 0.0);
    CHECK(r[1] == doctest::Approx(1.0 / 3.0));
    CHECK(r[2] == doctest::Approx(2.0 / 3.0));
    CHECK(r[3] == 1.0);

    CHECK_THROWS_AS(normalized_ranks(std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(normalized_ranks(std::vector<double>{1.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("rank_matrix examples") {
    const Dataset d = Dataset::create({{1, 2}, {9, 3}}, {1, 0}, {"a", "b"});
    const RankMatrix rm = rank_matrix(d);
    CHECK(rm.columns[0] == std::vector<double>{0.0, 1.0});
    CHECK(rm.columns[1] == std::vector<double>{1.0, 0.0});

    // A fully tied column midranks to (N+1)/2, i.e. every entry 0.5.
    const Dataset tied = Dataset::create({{7, 7, 7, 7}}, {1, 0, 1, 0}, {"c"});
    const RankMatrix tied_rm = rank_matrix(tied);
    for (double v : tied_rm.columns[0]) CHECK(v == 0.5);
}

TEST_CASE("rank_matrix is equivariant under row permutation") {
    const Dataset d = random_dataset(17, 3, 5);
    const RankMatrix rm = rank_matrix(d);

    std::vector<std::size_t> perm(17);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937 rng(11);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<std::vector<double>> cols(d.n_features());
    std::vector<int> labels(17);
    for (std::size_t j = 0; j < d.n_features(); ++j) {
        cols[j].resize(17);
        for (std::size_t i = 0; i < 17; ++i) cols[j][i] = d.columns[j][perm[i]];
    }
    for (std::size_t i = 0; i < 17; ++i) labels[i] = d.labels[perm[i]];
    const RankMatrix rm2 = rank_matrix(Dataset::create(cols, labels, d.feature_names));
    for (std::size_t j = 0; j < d.n_features(); ++j) {
        for (std::size_t i = 0; i < 17; ++i) CHECK(rm2.columns[j][i] == rm.columns[j][perm[i]]);
    }
}

TEST_CASE("extend_product examples") {
    const std::vector<double> ones{1, 1, 1};
    CHECK(extend_product(ones, std::vector<double>{0.0, 0.5, 1.0}) ==
          std::vector<double>{0.0, 0.5, 1.0});
    CHECK(extend_product(std::vector<double>{0.5, 0.5}, std::vector<double>{0.5, 1.0}) ==
          std::vector<double>{0.25, 0.5});

    const auto up = normalized_ranks(std::vector<double>{1, 2, 3, 4});
    const auto down = normalized_ranks(std::vector<double>{4, 3, 2, 1});
    const auto prod = extend_product(up, down);
    CHECK(prod[0] == 0.0);
    CHECK(prod[1] == doctest::Approx(2.0 / 9.0));
    CHECK(prod[2] == doctest::Approx(2.0 / 9.0));
    CHECK(prod[3] == 0.0);

    CHECK_THROWS_AS(extend_product(ones, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("copula_support examples") {
    CHECK(copula_support(std::vector<double>{1, 1, 1, 1}) == 1.0);  // eta(empty) = 1

    const auto r = normalized_ranks(std::vector<double>{4, 8, 15, 16, 23});
    CHECK(copula_support(r) == doctest::Approx(0.5).epsilon(1e-14));

    const auto up = normalized_ranks(std::vector<double>{1, 2, 3, 4});
    const auto down = normalized_ranks(std::vector<double>{4, 3, 2, 1});
    CHECK(copula_support(extend_product(up, up)) == doctest::Approx(0.3888888889).epsilon(1e-9));
    CHECK(copula_support(extend_product(up, down)) == doctest::Approx(0.1111111111).epsilon(1e-9));

    CHECK_THROWS_AS(copula_support(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("class_conditional_support examples") {
    const std::vector<double> prod{0.2, 0.8, 0.4, 0.6};
    const std::vector<int> labels{1, 1, 0, 0};
    const auto s = class_conditional_support(prod, labels);
    CHECK(s.eta1 == doctest::Approx(0.25));
    CHECK(s.eta0 == doctest::Approx(0.25));

    const std::vector<int> zeros{0, 0, 0, 0};
    const auto s0 = class_conditional_support(prod, zeros);
    CHECK(s0.eta1 == 0.0);
    CHECK(s0.eta0 == doctest::Approx(s0.eta));

    const std::vector<double> nothing{0, 0, 0, 0};
    const auto sz = class_conditional_support(nothing, labels);
    CHECK(sz.eta1 == 0.0);
    CHECK(sz.eta0 == 0.0);

    CHECK_THROWS_AS(class_conditional_support(prod, std::vector<int>{1, 0}), std::invalid_argument);
}

TEST_CASE("support is anti-monotone under extension (exhaustive |J| <= 3)") {
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
        const Dataset d = random_dataset(30, 6, seed);
        const RankMatrix rm = rank_matrix(d);
        const int n = static_cast<int>(rm.n_features());
        for (int a = 0; a < n; ++a) {
            const auto pa = extend_product(std::vector<double>(30, 1.0), rm.columns[a]);
            const double ea = copula_support(pa);
            for (int b = a + 1; b < n; ++b) {
                const auto pab = extend_product(pa, rm.columns[b]);
                const double eab = copula_support(pab);
                CHECK(eab <= ea + 1e-15);
                for (int c = b + 1; c < n; ++c) {
                    const double eabc = copula_support(extend_product(pab, rm.columns[c]));
                    CHECK(eabc <= eab + 1e-15);
                }
            }
        }
    }
}

TEST_CASE("ranks are invariant under strictly increasing transforms") {
    const Dataset d = random_dataset(40, 2, 77);
    const auto base = normalized_ranks(d.columns[0]);

    std::vector<double> exp_col(40), affine_col(40);
    for (std::size_t i = 0; i < 40; ++i) {
        exp_col[i] = std::exp(d.columns[0][i]);
        affine_col[i] = 3.5 * d.columns[0][i] + 11.0;
    }
    CHECK(normalized_ranks(exp_col) == base);
    CHECK(normalized_ranks(affine_col) == base);
}

TEST_CASE("column means are exactly 1/2, with and without ties") {
    std::mt19937_64 rng(31337);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 5 + rng() % 200;
        std::vector<double> col(n);
        for (auto& v : col) {
            // Integer grid forces ties roughly half the time.
            v = t % 2 == 0 ? static_cast<double>(rng() % 17)
                           : static_cast<double>(rng() >> 11) * 0x1.0p-53;
        }
        const auto r = normalized_ranks(col);
        CHECK(copula_support(r) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("eta1 + eta0 = eta on random products") {
    std::mt19937_64 rng(4242);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 10 + rng() % 500;
        std::vector<double> prod(n);
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            prod[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            labels[i] = static_cast<int>(rng() % 2);
        }
        const auto s = class_conditional_support(prod, labels);
        CHECK(s.eta1 + s.eta0 == doctest::Approx(s.eta).epsilon(1e-12));
    }
}

TEST_CASE("products are order-independent up to 1e-15") {
    const Dataset d = random_dataset(50, 5, 123);
    const RankMatrix rm = rank_matrix(d);
    std::vector<int> feats{0, 1, 2, 3, 4};
    const auto reference = combination(rm, feats, d.labels, 0.5);
    std::mt19937 rng(5);
    for (int t = 0; t < 10; ++t) {
        std::shuffle(feats.begin(), feats.end(), rng);
        std::vector<double> prod(50, 1.0);
        for (int j : feats) extend_product(prod, rm.columns[j], prod);
        for (std::size_t i = 0; i < 50; ++i) {
            CHECK(prod[i] == doctest::Approx(reference.product[i]).epsilon(1e-15));
        }
    }
}

TEST_CASE("combination bundles supports consistently") {
    const Dataset d = random_dataset(60, 4, 9);
    const RankMatrix rm = rank_matrix(d);
    const std::vector<int> feats{2, 0};
    const auto c = combination(rm, feats, d.labels, 0.5);
    CHECK(c.features == std::vector<int>{0, 2});
    CHECK(c.support1 + c.support0 == doctest::Approx(c.support).epsilon(1e-12));
    const double s0 = copula_support(rm.columns[0]);
    const double s2 = copula_support(rm.columns[2]);
    CHECK(c.support <= std::min(s0, s2) + 1e-15);
    CHECK(c.min_p == stats::min_p_value(c.support, 0.5, 60));
}

TEST_CASE("write_ranks_tsv emits one row per sample") {
    const Dataset d = Dataset::create({{1, 2}, {9, 3}}, {1, 0}, {"a", "b"});
    std::ostringstream os;
    write_ranks_tsv(rank_matrix(d), os);
    CHECK(os.str() == "0\t1\n1\t0\n");
}
