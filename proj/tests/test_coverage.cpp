#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hybridnet/coverage.hpp"

using namespace hybridnet;

namespace {

Scenario scenario(double ka, double rate = 1e9) {
    Scenario s = default_scenario(ka);
    s.rate_threshold = rate;
    return s;
}

}  // namespace

TEST(LaplaceSeries, UnityAtZero) {
    const Scenario s = scenario(0.01);
    EXPECT_EQ(lt_aggregate_thz_interference(s, {}, 0.0, 10.0), cplx(1.0));
    CoverageConfig eps;
    eps.integer_index = false;
    EXPECT_EQ(lt_aggregate_thz_interference(s, eps, 0.0, 10.0), cplx(1.0));
    EXPECT_THROW(lt_aggregate_thz_interference(s, {}, 1.0, 0.0), std::domain_error);
}

TEST(LaplaceSeries, IntegerModeModulusIsGaussian) {
    // only the l = 2 term is real on the imaginary axis: |L(jy)| = exp(-coef y^2 / 4)
    const CoverageConfig cfg;
    for (double coef : {0.1, 1.0, 30.0})
        for (double y : {0.0, 0.01, 0.5, 3.0, 1e3}) {
            const cplx v = std::exp(detail::log_lt_series(cfg, coef, cplx(0.0, -y)));
            EXPECT_NEAR(std::abs(v), std::exp(-coef * y * y / 4.0), 1e-12);
            EXPECT_LE(std::abs(v), 1.0);
        }
}

TEST(LaplaceSeries, EpsilonModeBoundedOnImaginaryAxis) {
    CoverageConfig cfg;
    cfg.integer_index = false;
    for (double y = 1e-3; y <= 100.0; y *= 1.3) {
        const cplx v = std::exp(detail::log_lt_series(cfg, 1.0, cplx(0.0, -y)));
        EXPECT_LE(std::abs(v), 1.0 + 1e-12) << y;
    }
}

TEST(GilPelaez, ExponentialKnownAnswer) {
    // X ~ Exp(1): P(X < a) = 1 - e^{-a}
    for (double a : {0.1, 1.0, 3.0}) {
        auto phi = [a](double w) { return std::exp(cplx(0.0, -w * a)) / cplx(1.0, -w); };
        EXPECT_NEAR(detail::gil_pelaez(phi, {1e-9, 1e-12, 4000}, 1.0), 1.0 - std::exp(-a), 1e-7) << a;
    }
}

TEST(ThzCoverage, NoiseLimitedRoutesAgree) {
    for (double ka : {0.01, 0.05})
        for (double rate : {0.25e9, 1e9}) {
            const NetworkAnalysis na(scenario(ka, rate));
            const CoverageConfig cfg;
            const double tau = rate_to_sinr_threshold(rate, na.scenario().thz.bandwidth);
            EXPECT_NEAR(coverage_thz_noise_limited(na, cfg, tau), coverage_thz_noise_limited_by_root(na, cfg, tau), 1e-5)
                << ka << " " << rate;
        }
}

TEST(ThzCoverage, NoInterferersReducesToNoiseLimited) {
    Scenario s = scenario(0.01);
    s.thz.beamwidth_tx = s.thz.beamwidth_rx = 1e-9;  // F ~ 0
    const NetworkAnalysis na(s);
    const CoverageConfig cfg;
    const double tau = 3.0;
    EXPECT_NEAR(coverage_thz(na, cfg, tau), coverage_thz_noise_limited_by_root(na, cfg, tau), 1e-5);
}

TEST(ThzCoverage, ZeroThresholdAlwaysCovered) {
    const NetworkAnalysis na(scenario(0.05));
    EXPECT_EQ(coverage_thz(na, {}, 0.0), 1.0);
    EXPECT_EQ(coverage_rf(na, {}, 0.0), 1.0);
    EXPECT_EQ(coverage_thz_conditional(na, {}, 0.0, 10.0), 1.0);
}

TEST(ThzCoverage, ConditionalDecreasingInDistance) {
    const NetworkAnalysis na(scenario(0.01));
    const ThzLink link(na, {}, 3.0);
    double prev = 1.0;
    for (double r = 5.0; r < 60.0; r += 5.0) {
        const double c = link.conditional(r);
        EXPECT_LE(c, prev + 1e-6);
        prev = c;
    }
}

TEST(ThzCoverage, MolecularNoiseLowersCoverage) {
    for (double ka : {0.01, 0.05})
        for (double rate : {0.25e9, 1e9}) {
            const NetworkAnalysis na(scenario(ka, rate));
            CoverageConfig on, off;
            off.molecular_noise = false;
            EXPECT_LT(coverage_total(na, on).c, coverage_total(na, off).c) << ka << " " << rate;
        }
}

TEST(ThzCoverage, NoiseOffWithoutAbsorptionMatchesSeries) {
    // with K = 0 both branches evaluate the same transform
    const NetworkAnalysis na(scenario(0.0));
    CoverageConfig on, off;
    off.molecular_noise = false;
    EXPECT_NEAR(coverage_thz(na, on, 3.0), coverage_thz(na, off, 3.0), 1e-9);
}

TEST(ThzCoverage, UnitGainMisalignmentIsConditional) {
    const NetworkAnalysis na(scenario(0.01));
    const CoverageConfig cfg;
    const auto unit = MisalignmentModel::discrete({1.0}, {1.0});
    EXPECT_NEAR(coverage_thz_with_misalignment(na, cfg, 3.0, unit), coverage_thz(na, cfg, 3.0), 1e-5);
}

TEST(ThzCoverage, MisalignmentLowersCoverage) {
    const NetworkAnalysis na(scenario(0.01));
    const auto lossy = MisalignmentModel::discrete({1.0, 0.1}, {0.7, 0.3});
    EXPECT_LT(coverage_thz_with_misalignment(na, {}, 3.0, lossy), coverage_thz(na, {}, 3.0));
    EXPECT_THROW(MisalignmentModel::discrete({1.0}, {}), ValidationError);
}

TEST(ThzCoverage, BlockageLowersCoverage) {
    const NetworkAnalysis na(scenario(0.01, 0.25e9));
    const CoverageConfig cfg;
    const BlockageModel none{};
    const BlockageModel some{0.01, 5.0, 2.0};
    const double tau = rate_to_sinr_threshold(0.25e9, 0.5e9);
    EXPECT_NEAR(coverage_thz_with_blockage(na, cfg, tau, none), coverage_thz(na, cfg, tau), 1e-12);
    EXPECT_LT(coverage_thz_with_blockage(na, cfg, tau, some), coverage_thz(na, cfg, tau));
    EXPECT_LT(coverage_total_with_blockage(na, cfg, some).c, coverage_total(na, cfg).c);
    EXPECT_THROW((BlockageModel{1.0, 5.0, 2.0}.validate()), std::domain_error);
}

TEST(RfCoverage, RfOnlyNetworkClosedForm) {
    // Rayleigh fading, interference limited: 1 / (1 + Y(tau))
    Scenario s = scenario(0.01);
    s.thz.intensity = 0.0;
    const NetworkAnalysis na(s);
    for (double tau : {0.1, 1.0, 10.0})
        EXPECT_NEAR(coverage_rf(na, {}, tau), 1.0 / (1.0 + numerics::gauss_2f1_coverage_kernel(tau, 4.0)), 1e-7) << tau;
}

TEST(RfCoverage, ThermalNoiseLowersCoverage) {
    const NetworkAnalysis na(scenario(0.01));
    CoverageConfig noisy;
    noisy.interference_limited_rf = false;
    EXPECT_LT(coverage_rf(na, noisy, 1.0), coverage_rf(na, {}, 1.0));
}

TEST(TotalCoverage, MixtureOfTiers) {
    const NetworkAnalysis na(scenario(0.01));
    const auto c = coverage_total(na, {});
    EXPECT_NEAR(c.c, na.a_t() * c.c_t + na.a_r() * c.c_r, 1e-15);
    EXPECT_DOUBLE_EQ(c.tau_t, 3.0);
}

TEST(MobilityCoverage, ReducesToCoverageWithoutMotionOrCost) {
    Scenario s = scenario(0.05, 0.25e9);
    const NetworkAnalysis still(s);
    const CoverageConfig cfg;
    EXPECT_DOUBLE_EQ(coverage_with_mobility(still, cfg), coverage_total(still, cfg).c);
    s.mobility.speed = 30.0;
    s.mobility.ho_cost = 0.0;
    const NetworkAnalysis free_ho(s);
    EXPECT_DOUBLE_EQ(coverage_with_mobility(free_ho, cfg), coverage_total(free_ho, cfg).c);
    s.mobility.ho_cost = 0.5;
    const NetworkAnalysis costly(s);
    EXPECT_LT(coverage_with_mobility(costly, cfg), coverage_total(costly, cfg).c);
    EXPECT_THROW(coverage_with_mobility(0.5, 1.5, 0.1), ValidationError);
}

TEST(CoverageConfig, Validation) {
    CoverageConfig c;
    c.lt_series_terms = 1;
    EXPECT_THROW(c.validate(), ValidationError);
    c.integer_index = false;
    EXPECT_NO_THROW(c.validate());
    c.lt_epsilon = 1.0;
    EXPECT_THROW(c.validate(), ValidationError);
}
