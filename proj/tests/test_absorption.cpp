#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "hybridnet/absorption.hpp"

using namespace hybridnet;

namespace {

const AmbientConditions kReference{1.0, 1.0, 296.0, 296.0, 273.15};

SpectralLine table_line() { return reference_table_medium().lines.front(); }

// Same formula written out in long double, term by term.
long double oracle_absorption(const SpectralLine& l, const AmbientConditions& c, long double f) {
    const long double na = 6.0221e23L, h = 6.6262e-34L, kb = 1.3806e-23L, cl = 2.9979e8L, v = 8.2051e-5L;
    const long double alpha = ((1.0L - l.mixing_ratio) * l.air_halfwidth + l.mixing_ratio * l.self_halfwidth) *
                              (c.pressure / c.reference_pressure) *
                              std::pow((long double)c.reference_temperature / c.temperature, (long double)l.temperature_exponent);
    const long double fc = l.resonant_frequency_ref + l.pressure_shift * c.pressure / c.reference_pressure;
    const long double y = f + fc, z = f - fc;
    const long double shape =
        100.0L * cl * alpha * f / (3.14159265358979323846264338327950288L * fc) *
        (1.0L / (y * y + alpha * alpha) + 1.0L / (z * z + alpha * alpha));
    const long double t = c.temperature;
    const long double pre = c.pressure * c.pressure * c.standard_temperature * l.mixing_ratio * na * l.line_intensity *
                            f * std::tanh(h * cl * f / (2.0L * kb * t)) /
                            (c.reference_pressure * v * t * t * fc * std::tanh(h * cl * fc / (2.0L * kb * t)));
    return pre * shape;
}

}  // namespace

TEST(LorentzHalfwidth, DegenerateMixing) {
    SpectralLine l = table_line();
    l.mixing_ratio = 0.0;
    EXPECT_DOUBLE_EQ(lorentz_halfwidth(l, kReference), l.air_halfwidth);
    l.mixing_ratio = 1.0;
    EXPECT_DOUBLE_EQ(lorentz_halfwidth(l, kReference), l.self_halfwidth);
}

TEST(LorentzHalfwidth, TableLineAtElevatedTemperature) {
    const double expected = ((1 - 0.0005) * 0.1117 + 0.0005 * 0.916) * std::pow(296.0 / 396.0, 0.83);
    const auto m = reference_table_medium();
    EXPECT_NEAR(lorentz_halfwidth(m.lines[0], m.conditions), expected, 1e-16);
    // 40-digit evaluation of the same expression
    EXPECT_NEAR(lorentz_halfwidth(m.lines[0], m.conditions), 0.088043856613972166461, 1e-16);
}

TEST(ShiftedResonance, TableValues) {
    SpectralLine l = table_line();
    EXPECT_NEAR(shifted_resonance(l, kReference), 276.0251, 1e-12);
    AmbientConditions doubled = kReference;
    doubled.pressure = 2.0;
    EXPECT_NEAR(shifted_resonance(l, doubled), 276.0502, 1e-12);
    l.pressure_shift = 0.0;
    EXPECT_DOUBLE_EQ(shifted_resonance(l, doubled), 276.0);
}

TEST(LineShape, PeakValueMatchesHighPrecision) {
    const auto m = reference_table_medium();
    const double fc = shifted_resonance(m.lines[0], m.conditions);
    EXPECT_NEAR(line_shape(m.lines[0], m.conditions, fc) / 108384760591.1322774, 1.0, 1e-12);
}

TEST(LineShape, AsymmetricAndDecaying) {
    const auto m = reference_table_medium();
    const double fc = shifted_resonance(m.lines[0], m.conditions);
    const double up = line_shape(m.lines[0], m.conditions, fc + 1.0);
    const double down = line_shape(m.lines[0], m.conditions, fc - 1.0);
    EXPECT_NE(up, down);
    EXPECT_GT(line_shape(m.lines[0], m.conditions, fc), up);
    EXPECT_LT(line_shape(m.lines[0], m.conditions, 1e15), 1e-6 * line_shape(m.lines[0], m.conditions, fc));
}

TEST(AbsorptionCoefficient, TableLineMatchesHighPrecision) {
    const auto m = reference_table_medium();
    const double fc = shifted_resonance(m.lines[0], m.conditions);
    // 40-digit evaluations of the line-by-line formula
    EXPECT_NEAR(molecular_absorption_coefficient(m, fc) / 184287034.32170138705, 1.0, 1e-12);
    EXPECT_NEAR(molecular_absorption_coefficient(m, 300.0) / 3196.2629278041468593, 1.0, 1e-12);
    EXPECT_NEAR(molecular_absorption_coefficient(m, 1e12) / 7478.115393524504102, 1.0, 1e-12);
}

TEST(AbsorptionCoefficient, MatchesLongDoubleOracle) {
    const auto m = reference_table_medium();
    for (double f : {100.0, 276.0, 1e9, 3e12}) {
        const long double ref = oracle_absorption(m.lines[0], m.conditions, f);
        EXPECT_NEAR(molecular_absorption_coefficient(m, f) / static_cast<double>(ref), 1.0, 1e-12) << f;
    }
}

TEST(AbsorptionCoefficient, EmptyAndZeroIntensity) {
    AbsorptionMedium empty;
    EXPECT_EQ(molecular_absorption_coefficient(empty, 3e12), 0.0);
    auto m = reference_table_medium();
    m.lines[0].line_intensity = 0.0;
    EXPECT_EQ(molecular_absorption_coefficient(m, 3e12), 0.0);
}

TEST(AbsorptionCoefficient, AdditiveOverLines) {
    SpectralLine a = table_line();
    SpectralLine b{557e9, 5.0e-24, 3e9, 15e9, 0.0, 0.01, 0.75};
    AbsorptionMedium ma{{a}, kReference};
    AbsorptionMedium mb{{b}, kReference};
    AbsorptionMedium both{{a, b}, kReference};
    for (double f : {0.3e12, 0.557e12, 1e12, 3e12})
        EXPECT_EQ(molecular_absorption_coefficient(both, f),
                  molecular_absorption_coefficient(ma, f) + molecular_absorption_coefficient(mb, f));
}

TEST(AbsorptionCoefficient, LinearInLineIntensity) {
    SpectralLine l{557e9, 5.0e-24, 3e9, 15e9, 0.0, 0.01, 0.75};
    AbsorptionMedium m{{l}, kReference};
    const double k1 = molecular_absorption_coefficient(m, 1e12);
    m.lines[0].line_intensity *= 3.0;
    EXPECT_NEAR(molecular_absorption_coefficient(m, 1e12), 3.0 * k1, 1e-15 * k1);
}

TEST(AbsorptionCoefficient, NonNegativeOnRandomFrequencies) {
    SpectralLine l{557e9, 5.0e-24, 3e9, 15e9, 1e8, 0.01, 0.75};
    const AbsorptionMedium m{{l, table_line()}, {1.0, 1.0, 300.0, 296.0, 273.15}};
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.1e12, 10e12);
    for (int i = 0; i < 1000000; ++i) {
        const double k = molecular_absorption_coefficient(m, u(rng));
        if (!(k >= 0.0)) FAIL() << "negative coefficient";
    }
}

TEST(LineCatalog, ParsesHeaderCommentsAndBom) {
    std::istringstream in(
        "\xEF\xBB\xBF# water line\n"
        "f_c0_hz, S, alpha_air_hz, alpha_0_hz, delta_hz, q, gamma\n"
        "\n"
        "276,2.66e-25,0.1117,0.916,0.0251,0.0005,0.83\n"
        "# trailing comment\n");
    const auto lines = read_line_catalog(in);
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_DOUBLE_EQ(lines[0].line_intensity, 2.66e-25);
    EXPECT_DOUBLE_EQ(lines[0].temperature_exponent, 0.83);
}

TEST(LineCatalog, EmptyAndHeaderOnly) {
    std::istringstream empty("");
    EXPECT_TRUE(read_line_catalog(empty).empty());
    std::istringstream header(std::string(kLineCatalogHeader) + "\n");
    EXPECT_TRUE(read_line_catalog(header).empty());
}

TEST(LineCatalog, MalformedRowReportsLine) {
    std::istringstream in(std::string(kLineCatalogHeader) + "\n276,2.66e-25,0.1117,0.916,0.0251,0.0005,0.83\n1,2,x,4,5,6,7\n");
    try {
        read_line_catalog(in, "cat.csv");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.source(), "cat.csv");
    }
}

TEST(LineCatalog, WrongColumnCountAndInvalidValues) {
    std::istringstream short_row(std::string(kLineCatalogHeader) + "\n1,2,3\n");
    EXPECT_THROW(read_line_catalog(short_row), ParseError);
    std::istringstream bad_q(std::string(kLineCatalogHeader) + "\n276,2.66e-25,0.1117,0.916,0.0251,1.5,0.83\n");
    EXPECT_THROW(read_line_catalog(bad_q), ParseError);
    std::istringstream no_header("276,2.66e-25,0.1117,0.916,0.0251,0.0005,0.83\n");
    EXPECT_THROW(read_line_catalog(no_header), ParseError);
}

TEST(LineCatalog, MissingFile) { EXPECT_THROW(load_line_catalog("/nonexistent/catalog.csv"), ParseError); }
