#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "hybridnet/montecarlo.hpp"

using namespace hybridnet;

TEST(Philox, KnownAnswers) {
    using C = Philox4x32::Counter;
    EXPECT_EQ(Philox4x32::generate({0, 0, 0, 0}, {0, 0}), (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
    EXPECT_EQ(Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
              (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
    EXPECT_EQ(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
              (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomStream, ReproducibleAndDistinct) {
    RandomStream a(7, 3, 1), b(7, 3, 1);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());
    RandomStream base(7, 3, 1), other_trial(7, 4, 1), other_seed(8, 3, 1), other_tag(7, 3, 2);
    const auto x = base();
    EXPECT_NE(x, other_trial());
    EXPECT_NE(x, other_seed());
    EXPECT_NE(x, other_tag());
}

TEST(RandomStream, UniformMoments) {
    RandomStream g(1, 0, 0);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = g.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
        sum2 += u * u;
    }
    EXPECT_NEAR(sum / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(sum2 / n - std::pow(sum / n, 2), 1.0 / 12, 2e-3);
}

TEST(Ppp, CountMatchesIntensity) {
    const double lambda = 1e-3, radius = 100.0;
    const double mean = lambda * std::numbers::pi * radius * radius;
    double total = 0.0;
    const int reps = 2000;
    for (int i = 0; i < reps; ++i) {
        RandomStream g(11, i, 0);
        total += sample_ppp(lambda, radius, g).size();
    }
    // Poisson: sd of the mean is sqrt(mean / reps)
    EXPECT_NEAR(total / reps, mean, 5 * std::sqrt(mean / reps));
}

TEST(Ppp, SortedInsideDiscAndPrefixConsistent) {
    RandomStream g1(5, 9, 0), g2(5, 9, 0);
    const auto small = sample_ppp(1e-3, 100.0, g1);
    const auto large = sample_ppp(1e-3, 300.0, g2);
    ASSERT_GE(large.size(), small.size());
    for (std::size_t i = 0; i < small.size(); ++i) {
        EXPECT_EQ(small[i].x, large[i].x);
        EXPECT_LE(small[i].r, 100.0);
        EXPECT_NEAR(std::hypot(small[i].x, small[i].y), small[i].r, 1e-9);
        if (i) {
            EXPECT_LE(small[i - 1].r, small[i].r);
        }
    }
    RandomStream g3(5, 9, 0);
    EXPECT_TRUE(sample_ppp(0.0, 100.0, g3).empty());
    EXPECT_THROW(sample_ppp(-1.0, 100.0, g3), ValidationError);
}

TEST(Simulate, ThreadCountDoesNotChangeResults) {
    Scenario s = default_scenario(0.05);
    s.mobility.speed = 30.0;
    s.rate_threshold = 0.25e9;
    TrialOptions opt;
    opt.handoff = opt.coverage = opt.with_mobility = true;
    opt.keep_outcomes = true;
    SimConfig one{4000, 42, 500.0, 2.0, 1};
    SimConfig four = one;
    four.threads = 4;
    const auto a = simulate(s, one, opt);
    const auto b = simulate(s, four, opt);
    EXPECT_EQ(a.n_thz, b.n_thz);
    EXPECT_EQ(a.ho_thz + a.ho_rf, b.ho_thz + b.ho_rf);
    EXPECT_EQ(a.covered_mobile, b.covered_mobile);
    ASSERT_EQ(a.outcomes.size(), b.outcomes.size());
    for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
        EXPECT_EQ(a.outcomes[i].serving_distance, b.outcomes[i].serving_distance);
        EXPECT_EQ(a.outcomes[i].sinr, b.outcomes[i].sinr);
    }
}

TEST(Simulate, AssociationWithinSamplingError) {
    // K = 0 has the erfc closed form
    const Scenario s = default_scenario(0.0);
    const double q = 225.0, lr = 1e-5, lt = 1e-4;
    const double x = 0.5 * lr * std::sqrt(std::numbers::pi * q / lt);
    const double expected = 1.0 - 0.5 * std::numbers::pi * lr * std::sqrt(q / lt) * std::exp(x * x) * std::erfc(x);
    const auto sim = simulate_association(s, {20000, 3, 500.0, 2.0, 0});
    EXPECT_NEAR(sim.a_t().value, expected, 4 * sim.a_t().standard_error);
}

TEST(Simulate, HugeHysteresisNeverHandsOff) {
    Scenario s = default_scenario(0.01);
    s.mobility.speed = 30.0;
    s.mobility.hysteresis = 1e12;
    const auto sim = simulate_handoff(s, {2000, 1, 500.0, 2.0, 0});
    EXPECT_EQ(sim.ho_thz + sim.ho_rf, 0u);
}

TEST(Simulate, StandingStillNeverHandsOff) {
    const auto sim = simulate_handoff(default_scenario(0.01), {2000, 1, 500.0, 2.0, 0});
    EXPECT_EQ(sim.ho_thz + sim.ho_rf, 0u);
}

TEST(Simulate, MobilityCoverageNeverExceedsCoverage) {
    Scenario s = default_scenario(0.01);
    s.mobility.speed = 56.0;
    s.rate_threshold = 0.25e9;
    const auto sim = simulate_coverage(s, {3000, 2, 500.0, 2.0, 0}, true);
    EXPECT_LE(sim.covered_mobile, sim.covered_thz + sim.covered_rf);
    EXPECT_GT(sim.covered_mobile, 0u);
}

TEST(Simulate, BlockageRemovesCoveredThzUsers) {
    Scenario s = default_scenario(0.01);
    s.rate_threshold = 0.25e9;
    const SimConfig cfg{3000, 2, 500.0, 2.0, 0};
    CoverageExtensions ext;
    ext.blockage = BlockageModel{0.05, 5.0, 2.0};
    const auto clear = simulate_coverage(s, cfg, false);
    const auto blocked = simulate_coverage(s, cfg, false, ext);
    EXPECT_EQ(clear.n_thz, blocked.n_thz);
    EXPECT_LT(blocked.covered_thz, clear.covered_thz);
    EXPECT_EQ(blocked.covered_rf, clear.covered_rf);
}

TEST(Simulate, ConfigValidation) {
    const Scenario s = default_scenario();
    EXPECT_THROW(simulate_association(s, {0, 1, 500.0, 2.0, 1}), ValidationError);
    EXPECT_THROW(simulate_association(s, {10, 1, 500.0, 0.5, 1}), ValidationError);
}

TEST(TrialCsv, HeaderAndRows) {
    TrialOptions opt;
    opt.coverage = true;
    opt.keep_outcomes = true;
    const auto sim = simulate(default_scenario(), {5, 1, 500.0, 2.0, 1}, opt);
    std::ostringstream os;
    write_trial_csv(os, sim.outcomes);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "trial,tier,serving_distance_m,ho,sinr_db,covered");
    int rows = 0;
    while (std::getline(in, line)) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 5);
        ++rows;
    }
    EXPECT_EQ(rows, 5);
}

TEST(Proportion, StandardError) {
    const auto p = make_proportion(25, 100);
    EXPECT_DOUBLE_EQ(p.value, 0.25);
    EXPECT_NEAR(p.standard_error, std::sqrt(0.25 * 0.75 / 100), 1e-15);
    EXPECT_EQ(make_proportion(0, 0).value, 0.0);
}
