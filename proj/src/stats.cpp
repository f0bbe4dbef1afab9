#include "sigcomb/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sigcomb::stats {

namespace {

constexpr double kSlack = 1e-12;

[[noreturn]] void fail(const std::string& what) {
    throw std::domain_error("stats: " + what);
}

}  // namespace

double kl_divergence(const ProbVector& p_obs, const ProbVector& p_exp) {
    double kl = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const double o = p_obs.p[i];
        const double e = p_exp.p[i];
        if (o < -kSlack || e < -kSlack) fail("probability vector has a negative entry");
        if (o <= 0.0) continue;  // 0 * ln(0) := 0
        if (e <= 0.0) fail("infinite divergence: observed mass on a zero-expectation cell");
        kl += o * std::log(o / e);
    }
    // The true divergence is nonnegative; rounding can leave a tiny negative.
    return std::max(kl, 0.0);
}

ProbVector expected_vector(double eta, double r1) {
    if (!(eta >= -kSlack && eta <= 1.0 + kSlack)) fail("expected_vector: eta outside [0, 1]");
    if (!(r1 > 0.0 && r1 < 1.0)) fail("expected_vector: r1 outside (0, 1)");
    eta = std::clamp(eta, 0.0, 1.0);
    const double r0 = 1.0 - r1;
    return ProbVector{{eta * r1, eta * r0, (1.0 - eta) * r1, (1.0 - eta) * r0}};
}

ProbVector observed_vector(double eta1, double eta0, double r1, double r0) {
    if (std::abs(r1 + r0 - 1.0) > kSlack) fail("observed_vector: r1 + r0 != 1");
    if (!(eta1 >= -kSlack && eta1 <= r1 + kSlack))
        fail("observed_vector: eta1 violates the class-1 marginal");
    if (!(eta0 >= -kSlack && eta0 <= r0 + kSlack))
        fail("observed_vector: eta0 violates the class-0 marginal");
    eta1 = std::clamp(eta1, 0.0, r1);
    eta0 = std::clamp(eta0, 0.0, r0);
    return ProbVector{{eta1, eta0, r1 - eta1, r0 - eta0}};
}

TestOutcome g_test(double eta, double eta1, double r1, std::int64_t n_samples) {
    if (n_samples < 2) fail("g_test: need at least two samples");
    const double r0 = 1.0 - r1;
    const double eta0 = eta - eta1;
    const ProbVector p_e = expected_vector(eta, r1);
    const ProbVector p_o = observed_vector(eta1, eta0, r1, r0);

    TestOutcome out;
    out.kl = kl_divergence(p_o, p_e);
    out.lambda = 2.0 * static_cast<double>(n_samples) * out.kl;
    out.p_value = chi2_sf_df1(out.lambda);
    const double n = static_cast<double>(n_samples);
    for (double cell : p_e.p) {
        if (cell * n < 5.0) out.low_expected_cell = true;
    }
    return out;
}

double chi2_sf_df1(double lambda) {
    if (lambda < 0.0) fail("chi2_sf_df1: negative statistic");
    // For X ~ chi^2(1), Pr(X > lambda) = erfc(sqrt(lambda / 2)).
    return std::erfc(std::sqrt(0.5 * lambda));
}

double kl_upper_bound(double a, double b) {
    if (!(a >= -kSlack && a <= 0.5 + kSlack)) fail("kl_upper_bound: a outside [0, 1/2]");
    if (!(b > 0.0 && b <= 0.5 + kSlack)) fail("kl_upper_bound: b outside (0, 1/2]");
    a = std::clamp(a, 0.0, 0.5);
    b = std::min(b, 0.5);
    if (a > b) std::swap(a, b);  // transpose symmetry of the table
    if (a <= 0.0) return 0.0;    // a single table exists and equals the expectation

    const double d = b - a;
    // (b - a) * ln(b - a) -> 0 as a -> b.
    const double middle = d > 0.0 ? d * std::log(d / ((1.0 - a) * b)) : 0.0;
    const double bound = a * std::log(1.0 / b) + middle + (1.0 - b) * std::log(1.0 / (1.0 - a));
    return std::max(bound, 0.0);
}

double min_p_value(double eta, double r1, std::int64_t n_samples) {
    if (n_samples < 2) fail("min_p_value: need at least two samples");
    if (!(eta >= -kSlack && eta <= 0.5 + kSlack)) fail("min_p_value: eta outside [0, 1/2]");
    if (!(r1 > 0.0 && r1 <= 0.5 + kSlack)) fail("min_p_value: r1 outside (0, 1/2]");
    eta = std::clamp(eta, 0.0, 0.5);
    return chi2_sf_df1(2.0 * static_cast<double>(n_samples) * kl_upper_bound(eta, std::min(r1, 0.5)));
}

}  // namespace sigcomb::stats
