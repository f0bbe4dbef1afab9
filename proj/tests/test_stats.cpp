#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "sigcomb/stats.hpp"
#include "support/quadrature.hpp"

using namespace sigcomb::stats;
using testsupport::chi2_sf_df1_quadrature;

namespace {

// The one-parameter family covering all tables with marginals (a, b):
// p(x) = (x, a - x, b - x, 1 - a - b + x), 0 <= x <= min(a, b).
ProbVector family_member(double a, double b, double x) {
    return ProbVector{{x, a - x, b - x, 1.0 - a - b + x}};
}

double family_kl(double a, double b, double x) {
    return kl_divergence(family_member(a, b, x), expected_vector(a, b));
}

}  // namespace

TEST_CASE("kl_divergence basics") {
    const ProbVector uniform{{0.25, 0.25, 0.25, 0.25}};
    CHECK(kl_divergence(uniform, uniform) == doctest::Approx(0.0));

    const ProbVector diag{{0.5, 0.0, 0.0, 0.5}};
    CHECK(kl_divergence(diag, uniform) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(kl_divergence(uniform, diag), std::domain_error);
}

TEST_CASE("kl_divergence is nonnegative, zero only at equality") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(0.01, 1.0);
    for (int t = 0; t < 500; ++t) {
        double p[4], q[4], ps = 0, qs = 0;
        for (int i = 0; i < 4; ++i) {
            p[i] = u(rng);
            q[i] = u(rng);
            ps += p[i];
            qs += q[i];
        }
        ProbVector pv{{p[0] / ps, p[1] / ps, p[2] / ps, p[3] / ps}};
        ProbVector qv{{q[0] / qs, q[1] / qs, q[2] / qs, q[3] / qs}};
        const double kl = kl_divergence(pv, qv);
        CHECK(kl >= 0.0);
        bool equal = true;
        for (int i = 0; i < 4; ++i) {
            if (std::abs(pv.p[i] - qv.p[i]) > 1e-12) equal = false;
        }
        if (!equal) CHECK(kl > 0.0);
        CHECK(kl_divergence(pv, pv) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("expected_vector examples") {
    auto v = expected_vector(0.3, 0.5);
    CHECK(v[0] == doctest::Approx(0.15));
    CHECK(v[1] == doctest::Approx(0.15));
    CHECK(v[2] == doctest::Approx(0.35));
    CHECK(v[3] == doctest::Approx(0.35));
    CHECK(v.sum() == doctest::Approx(1.0).epsilon(1e-14));

    auto z = expected_vector(0.0, 0.2);
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);
    CHECK(z[2] == doctest::Approx(0.2));
    CHECK(z[3] == doctest::Approx(0.8));

    auto one = expected_vector(1.0, 0.1);
    CHECK(one[0] == doctest::Approx(0.1));
    CHECK(one[1] == doctest::Approx(0.9));
    CHECK(one[2] == doctest::Approx(0.0));
    CHECK(one[3] == doctest::Approx(0.0));

    CHECK_THROWS_AS(expected_vector(1.2, 0.5), std::domain_error);
    CHECK_THROWS_AS(expected_vector(0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(expected_vector(0.5, 1.0), std::domain_error);
}

TEST_CASE("observed_vector examples") {
    auto v = observed_vector(0.25, 0.25, 0.5, 0.5);
    for (int i = 0; i < 4; ++i) CHECK(v[i] == doctest::Approx(0.25));

    auto perfect = observed_vector(0.5, 0.0, 0.5, 0.5);
    CHECK(perfect[0] == doctest::Approx(0.5));
    CHECK(perfect[1] == 0.0);
    CHECK(perfect[2] == doctest::Approx(0.0));
    CHECK(perfect[3] == doctest::Approx(0.5));

    CHECK_THROWS_AS(observed_vector(0.6, 0.0, 0.5, 0.5), std::domain_error);
    CHECK_THROWS_AS(observed_vector(0.1, 0.1, 0.7, 0.2), std::domain_error);
}

TEST_CASE("g_test at independence and at perfect association") {
    // eta1 == eta * r1 makes observed == expected.
    auto ind = g_test(0.4, 0.4 * 0.5, 0.5, 200);
    CHECK(ind.lambda == doctest::Approx(0.0));
    CHECK(ind.p_value == doctest::Approx(1.0));

    // eta = eta1 = r1 = 1/2: KL = ln 2, lambda = 2 N ln 2.
    auto assoc = g_test(0.5, 0.5, 0.5, 100);
    CHECK(assoc.kl == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(assoc.lambda == doctest::Approx(200.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(assoc.p_value < 1e-30);
}

TEST_CASE("g_test cross-checked against a direct four-term evaluation") {
    const double eta = 0.5, eta1 = 0.3, r1 = 0.5;
    const std::int64_t n = 50;
    auto out = g_test(eta, eta1, r1, n);

    const double po[4] = {0.3, 0.2, 0.2, 0.3};
    const double pe[4] = {0.25, 0.25, 0.25, 0.25};
    double kl = 0.0;
    for (int i = 0; i < 4; ++i) kl += po[i] * std::log(po[i] / pe[i]);
    CHECK(out.kl == doctest::Approx(kl).epsilon(1e-13));
    CHECK(out.lambda == doctest::Approx(2.0 * 50.0 * kl).epsilon(1e-13));
    CHECK(out.p_value == doctest::Approx(chi2_sf_df1_quadrature(out.lambda)).epsilon(1e-10));
    CHECK_FALSE(out.low_expected_cell);
}

TEST_CASE("g_test flags small expected cells") {
    auto out = g_test(0.02, 0.02, 0.5, 100);  // expected cell 0.01 * 100 = 1 < 5
    CHECK(out.low_expected_cell);
}

TEST_CASE("chi2_sf_df1 endpoints and spot values") {
    CHECK(chi2_sf_df1(0.0) == 1.0);
    CHECK_THROWS_AS(chi2_sf_df1(-1.0), std::domain_error);
    // 95% and 99% quantiles of chi^2(1).
    CHECK(std::abs(chi2_sf_df1(3.841459) - 0.05) < 1e-4);
    CHECK(std::abs(chi2_sf_df1(6.634897) - 0.01) < 1e-4);
    CHECK(std::abs(chi2_sf_df1(3.841459) - chi2_sf_df1_quadrature(3.841459)) < 1e-12);
}

TEST_CASE("chi2_sf_df1 is strictly decreasing and tracks the quadrature oracle") {
    double prev = chi2_sf_df1(0.0);
    for (int i = 1; i <= 400; ++i) {
        const double lam = 0.5 * i;
        const double v = chi2_sf_df1(lam);
        CHECK(v < prev);
        prev = v;
        const double oracle = chi2_sf_df1_quadrature(lam);
        CHECK(std::abs(v - oracle) <= 1e-10 * oracle);
    }
}

TEST_CASE("kl_upper_bound closed form") {
    CHECK(kl_upper_bound(0.0, 0.3) == 0.0);
    CHECK(kl_upper_bound(0.0, 0.01) == 0.0);

    // At a == b the bound is the binary entropy of b.
    const double h03 = 0.3 * std::log(1.0 / 0.3) + 0.7 * std::log(1.0 / 0.7);
    CHECK(kl_upper_bound(0.3, 0.3) == doctest::Approx(h03).epsilon(1e-12));
    CHECK(kl_upper_bound(0.3, 0.3) == doctest::Approx(0.6108643021).epsilon(1e-9));

    CHECK(kl_upper_bound(0.1, 0.3) == doctest::Approx(0.134128726).epsilon(1e-8));

    // Transpose symmetry.
    CHECK(kl_upper_bound(0.3, 0.1) == kl_upper_bound(0.1, 0.3));
    CHECK(kl_upper_bound(0.45, 0.2) == kl_upper_bound(0.2, 0.45));

    CHECK_THROWS_AS(kl_upper_bound(0.6, 0.3), std::domain_error);
    CHECK_THROWS_AS(kl_upper_bound(0.3, 0.0), std::domain_error);
    CHECK_THROWS_AS(kl_upper_bound(-0.1, 0.3), std::domain_error);
}

TEST_CASE("kl_upper_bound dominates the whole marginal family and is tight") {
    const double cases[][2] = {{0.1, 0.3}, {0.3, 0.3}, {0.05, 0.5}, {0.5, 0.5},
                               {0.4, 0.25}, {0.02, 0.02}, {0.49, 0.5}};
    for (const auto& c : cases) {
        const double a = c[0], b = c[1];
        const double bound = kl_upper_bound(a, b);
        const double xm = std::min(a, b);
        double best = 0.0;
        for (int k = 1; k < 1000; ++k) {
            const double x = xm * k / 1000.0;
            const double f = family_kl(a, b, x);
            CHECK(f < bound);
            best = std::max(best, f);
        }
        const double near = family_kl(a, b, xm * (1.0 - 1e-8));
        CHECK(near < bound);
        CHECK(bound - near < 1e-6);
    }
}

TEST_CASE("kl_upper_bound beats random valid tables") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u01(0.001, 0.5);
    for (int t = 0; t < 2000; ++t) {
        const double a = u01(rng);
        const double b = u01(rng);
        const double xm = std::min(a, b);
        std::uniform_real_distribution<double> ux(0.0, xm);
        const double x = ux(rng);
        CHECK(family_kl(a, b, x) <= kl_upper_bound(a, b) + 1e-12);
    }
}

TEST_CASE("kl_upper_bound branch monotonicity") {
    const double b = 0.3;
    double prev = kl_upper_bound(1e-3, b);
    for (double a = 2e-3; a < b - 1e-9; a += 1e-3) {
        const double cur = kl_upper_bound(a, b);
        CHECK(cur > prev);
        prev = cur;
    }
    prev = kl_upper_bound(b, b);
    for (double a = b + 1e-3; a <= 0.5 + 1e-9; a += 1e-3) {
        const double cur = kl_upper_bound(std::min(a, 0.5), b);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("min_p_value endpoints and shape") {
    CHECK(min_p_value(0.0, 0.3, 100) == 1.0);
    CHECK(min_p_value(0.5, 0.5, 100) == doctest::Approx(chi2_sf_df1(200.0 * std::log(2.0))));
    CHECK(min_p_value(0.5, 0.5, 100) < 1e-30);

    // V-shape in eta with the minimum at eta = r1 (here r1 = 0.3, N = 100).
    const double r1 = 0.3;
    double best = 2.0;
    double best_eta = -1.0;
    for (int k = 1; k <= 500; ++k) {
        const double eta = k / 1000.0;
        const double psi = min_p_value(eta, r1, 100);
        if (psi < best) {
            best = psi;
            best_eta = eta;
        }
    }
    CHECK(best_eta == doctest::Approx(0.3).epsilon(1e-9));

    double prev = min_p_value(1e-3, r1, 100);
    for (double eta = 2e-3; eta <= r1 + 1e-12; eta += 1e-3) {
        const double cur = min_p_value(eta, r1, 100);
        CHECK(cur <= prev);
        prev = cur;
    }
    for (double eta = r1 + 1e-3; eta <= 0.5 + 1e-12; eta += 1e-3) {
        const double cur = min_p_value(std::min(eta, 0.5), r1, 100);
        CHECK(cur >= prev);
        prev = cur;
    }

    CHECK_THROWS_AS(min_p_value(0.7, 0.3, 100), std::domain_error);
    CHECK_THROWS_AS(min_p_value(0.3, 0.7, 100), std::domain_error);
}

TEST_CASE("min_p_value lower-bounds every achievable p-value") {
    // For tables with marginals (eta, r1), psi(eta) <= G-test p-value.
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::int64_t n = 150;
    for (int t = 0; t < 2000; ++t) {
        const double eta = 0.01 + 0.49 * u(rng);
        const double r1 = 0.01 + 0.49 * u(rng);
        const double lo = std::max(0.0, eta + r1 - 1.0);
        const double hi = std::min(eta, r1);
        const double eta1 = lo + (hi - lo) * u(rng);
        const auto gt = g_test(eta, eta1, r1, n);
        CHECK(min_p_value(eta, r1, n) <= gt.p_value + 1e-12);
    }
}
