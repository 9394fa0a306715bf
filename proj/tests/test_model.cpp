#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "hybridnet/model.hpp"

using namespace hybridnet;

TEST(Decibels, RoundTrip) {
    EXPECT_DOUBLE_EQ(db_to_linear(0.0), 1.0);
    EXPECT_NEAR(db_to_linear(25.0), 316.22776601683796, 1e-10);
    for (double db : {-30.0, 0.0, 3.0, 25.0}) EXPECT_NEAR(linear_to_db(db_to_linear(db)), db, 1e-12);
}

TEST(ThermalNoise, KTB) {
    EXPECT_NEAR(thermal_noise_power(1.0), 1.3806e-23 * 290.0, 1e-35);
    const Scenario s = default_scenario();
    EXPECT_NEAR(s.rf.thermal_noise, 1.3806e-23 * 290.0 * 40e6, 1e-25);
    EXPECT_NEAR(s.thz.thermal_noise, 1.3806e-23 * 290.0 * 0.5e9, 1e-24);
}

TEST(DerivedConstants, PowerRatioOfDefaults) {
    // 2 W * (c/4 pi 2GHz)^2 over 0.2 W * 10^5 * (c/4 pi 3THz)^2 = 10 * 1500^2 / 1e5
    const auto d = derive(default_scenario());
    EXPECT_NEAR(d.q, 225.0, 1e-9);
    const double c = 2.9979e8;
    EXPECT_NEAR(d.gamma_r, std::pow(c / (4 * std::numbers::pi * 2e9), 2), 1e-18);
}

TEST(DerivedConstants, AlignmentProbabilityForTenDegreeBeams) {
    const auto d = derive(default_scenario());
    const double theta = 10.0 * std::numbers::pi / 180.0;
    EXPECT_NEAR(d.f, theta * theta / (4 * std::numbers::pi * std::numbers::pi), 1e-15);
    EXPECT_NEAR(d.f, 7.716e-4, 1e-7);
}

TEST(LinkPower, MatchesDefinitions) {
    const Scenario s = default_scenario(0.05);
    const auto d = derive(s);
    EXPECT_NEAR(rf_received_power(s, 100.0), 2.0 * d.gamma_r / 1e8, 1e-25);
    EXPECT_NEAR(thz_received_power(s, 20.0), 0.2 * d.gamma_t * std::exp(-1.0) / 400.0, 1e-25);
    // equal long-term powers at the equivalent pair
    const double r_t = 20.0;
    const double r_r = std::pow(d.q * r_t * r_t * std::exp(0.05 * r_t), 0.25);
    EXPECT_NEAR(rf_received_power(s, r_r) / thz_received_power(s, r_t), 1.0, 1e-12);
}

TEST(LinkPower, RejectsNonPositiveDistance) {
    const Scenario s = default_scenario();
    EXPECT_THROW(rf_received_power(s, 0.0), std::domain_error);
    EXPECT_THROW(thz_received_power(s, -1.0), std::domain_error);
}

TEST(SinrMargin, SignChangesAtThreshold) {
    const Scenario s = default_scenario(0.05);
    const double tau = 1.0;
    // (1+tau) e^{-Kd} = tau at d = ln 2 / K
    const double d_star = std::log(2.0) / 0.05;
    EXPECT_GT(thz_sinr_margin(s, 0.9 * d_star, tau), 0.0);
    EXPECT_LT(thz_sinr_margin(s, 1.1 * d_star, tau), 0.0);
}

TEST(RateThreshold, ShannonInverse) {
    EXPECT_DOUBLE_EQ(rate_to_sinr_threshold(0.0, 1e9), 0.0);
    EXPECT_DOUBLE_EQ(rate_to_sinr_threshold(1e9, 0.5e9), 3.0);
    EXPECT_NEAR(rate_to_sinr_threshold(1e9, 40e6), std::exp2(25.0) - 1.0, 1e-3);
    EXPECT_THROW(rate_to_sinr_threshold(1.0, 0.0), std::domain_error);
}

TEST(TotalNoise, AbsorptionReradiation) {
    Scenario s = default_scenario(0.0);
    EXPECT_DOUBLE_EQ(thz_total_noise(s, 10.0, {20.0, 30.0}), s.thz.thermal_noise);
    s = default_scenario(0.05);
    const auto d = derive(s);
    const double p = d.gamma_t * 0.2;
    const double expected = s.thz.thermal_noise + p / 100.0 * (1 - std::exp(-0.5)) +
                            p * d.f / 400.0 * (1 - std::exp(-1.0));
    EXPECT_NEAR(thz_total_noise(s, 10.0, {20.0}) / expected, 1.0, 1e-13);
}

TEST(AbsorptionSpec, MediumEvaluatedAtCarrier) {
    Scenario s = default_scenario();
    auto medium = reference_table_medium();
    s.thz.absorption = medium;
    EXPECT_DOUBLE_EQ(s.ka(), molecular_absorption_coefficient(medium, s.thz.carrier));
}

TEST(Validation, NamesOffendingField) {
    auto expect_field = [](Scenario s, const std::string& field) {
        try {
            s.validate();
            FAIL() << "expected ValidationError for " << field;
        } catch (const ValidationError& e) {
            EXPECT_EQ(e.field(), field);
        }
    };
    Scenario s = default_scenario();
    EXPECT_NO_THROW(s.validate());
    s.rf.pathloss_exponent = 2.0;
    expect_field(s, "rf.pathloss_exponent");
    s = default_scenario();
    s.thz.absorption = -0.1;
    expect_field(s, "thz.absorption");
    s = default_scenario();
    s.thz.beamwidth_rx = 7.0;
    expect_field(s, "thz.beamwidth_rx");
    s = default_scenario();
    s.mobility.ho_cost = 1.5;
    expect_field(s, "mobility.ho_cost");
    s = default_scenario();
    s.mobility.hysteresis = 0.5;
    expect_field(s, "mobility.hysteresis");
    s = default_scenario();
    s.mobility.speed = -1.0;
    expect_field(s, "mobility.speed");
    s = default_scenario();
    s.region_radius = 0.0;
    expect_field(s, "region_radius");
    s = default_scenario();
    s.thz.min_gain_tx = 1e6;
    expect_field(s, "thz.max_gain_tx");
}
