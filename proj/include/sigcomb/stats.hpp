#pragma once

#include <array>
#include <cstdint>

namespace sigcomb::stats {

/// Joint probabilities of a 2x2 contingency table in the order
/// (Pr(X=1,Y=1), Pr(X=1,Y=0), Pr(X=0,Y=1), Pr(X=0,Y=0)).
struct ProbVector {
    std::array<double, 4> p{};

    double operator[](int i) const { return p[static_cast<std::size_t>(i)]; }
    double sum() const { return p[0] + p[1] + p[2] + p[3]; }
};

struct TestOutcome {
    double lambda = 0.0;   // G statistic, 2*N*kl
    double p_value = 1.0;  // chi^2(1) survival function of lambda
    double kl = 0.0;       // KL divergence in nats
    bool low_expected_cell = false;  // some expected cell count < 5
};

/// KL divergence sum_i p_obs[i] * ln(p_obs[i]/p_exp[i]), with 0*ln(0) := 0.
/// Throws if some p_obs[i] > 0 has p_exp[i] == 0 (infinite divergence).
double kl_divergence(const ProbVector& p_obs, const ProbVector& p_exp);

/// Expected table under independence with support eta and class ratio r1.
ProbVector expected_vector(double eta, double r1);

/// Observed table from class-conditional supports and class ratios.
ProbVector observed_vector(double eta1, double eta0, double r1, double r0);

/// G-test of independence on the 2x2 table with marginals (eta, r1).
/// eta1 is the observed class-1 support; eta0 is taken as eta - eta1.
TestOutcome g_test(double eta, double eta1, double r1, std::int64_t n_samples);

/// Survival function of the chi-squared distribution with 1 degree of
/// freedom, evaluated through the complementary error function.
double chi2_sf_df1(double lambda);

/// Closed-form supremum B(a, b) of the KL divergence over all tables with
/// marginals (a, b), both in [0, 1/2]. Arguments are swapped when a > b;
/// the 2x2 table is symmetric under transposition, so the bound carries over.
double kl_upper_bound(double a, double b);

/// Minimum attainable p-value for a combination with support eta given the
/// class ratio r1: the chi^2(1) tail of 2*N*B(eta, r1).
double min_p_value(double eta, double r1, std::int64_t n_samples);

}  // namespace sigcomb::stats
