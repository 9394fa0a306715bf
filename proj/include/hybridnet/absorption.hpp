#pragma once

// Molecular absorption coefficient from spectral-line parameters
// (HITRAN-style line data, Van Vleck-Weisskopf line shape).

#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hybridnet/errors.hpp"

namespace hybridnet {

struct SpectralLine {
    double resonant_frequency_ref = 0.0;  // f_c0, Hz
    double line_intensity = 0.0;          // S, Hz m^2 / mol
    double air_halfwidth = 0.0;           // Hz
    double self_halfwidth = 0.0;          // Hz
    double pressure_shift = 0.0;          // Hz
    double mixing_ratio = 0.0;            // fraction, not percent
    double temperature_exponent = 0.0;

    void validate() const {
        if (!(line_intensity >= 0.0)) throw ValidationError("line_intensity", "must be >= 0");
        if (!(mixing_ratio >= 0.0 && mixing_ratio <= 1.0)) throw ValidationError("mixing_ratio", "must lie in [0, 1]");
        if (!(air_halfwidth > 0.0)) throw ValidationError("air_halfwidth", "must be > 0");
        if (!(self_halfwidth > 0.0)) throw ValidationError("self_halfwidth", "must be > 0");
    }
};

struct AmbientConditions {
    double pressure = 1.0;                  // atm
    double reference_pressure = 1.0;        // atm
    double temperature = 296.0;             // K
    double reference_temperature = 296.0;   // K
    double standard_temperature = 273.15;   // K

    void validate() const {
        if (!(pressure > 0.0)) throw ValidationError("pressure", "must be > 0");
        if (!(reference_pressure > 0.0)) throw ValidationError("reference_pressure", "must be > 0");
        if (!(temperature > 0.0)) throw ValidationError("temperature", "must be > 0");
        if (!(reference_temperature > 0.0)) throw ValidationError("reference_temperature", "must be > 0");
        if (!(standard_temperature > 0.0)) throw ValidationError("standard_temperature", "must be > 0");
    }
};

/// Constants at the precision used by the line-by-line model.
struct PhysicalConstants {
    static constexpr double avogadro = 6.0221e23;
    static constexpr double planck = 6.6262e-34;      // J s
    static constexpr double boltzmann = 1.3806e-23;   // J/K
    static constexpr double light_speed = 2.9979e8;   // m/s
    static constexpr double gas_constant = 8.2051e-5; // m^3 atm / (K mol)
};

struct AbsorptionMedium {
    std::vector<SpectralLine> lines;
    AmbientConditions conditions;

    void validate() const {
        conditions.validate();
        for (const auto& l : lines) l.validate();
    }
};

inline double lorentz_halfwidth(const SpectralLine& line, const AmbientConditions& cond) {
    const double q = line.mixing_ratio;
    return ((1.0 - q) * line.air_halfwidth + q * line.self_halfwidth) * (cond.pressure / cond.reference_pressure) *
           std::pow(cond.reference_temperature / cond.temperature, line.temperature_exponent);
}

inline double shifted_resonance(const SpectralLine& line, const AmbientConditions& cond) {
    return line.resonant_frequency_ref + line.pressure_shift * (cond.pressure / cond.reference_pressure);
}

/// Van Vleck-Weisskopf shape; the 100 c factor converts the cm^-1 convention of line catalogs.
inline double line_shape(const SpectralLine& line, const AmbientConditions& cond, double f) {
    const double a = lorentz_halfwidth(line, cond);
    const double fc = shifted_resonance(line, cond);
    const double y = f + fc;
    const double z = f - fc;
    return 100.0 * PhysicalConstants::light_speed * a * f / (std::numbers::pi * fc) *
           (1.0 / (y * y + a * a) + 1.0 / (z * z + a * a));
}

/// Contribution of a single line to K_a(f), 1/m.
inline double line_absorption(const SpectralLine& line, const AmbientConditions& cond, double f) {
    using C = PhysicalConstants;
    const double fc = shifted_resonance(line, cond);
    const double hc_2kT = C::planck * C::light_speed / (2.0 * C::boltzmann * cond.temperature);
    const double p = cond.pressure;
    const double num = p * p * cond.standard_temperature * line.mixing_ratio * C::avogadro * line.line_intensity * f *
                       std::tanh(hc_2kT * f);
    const double den = cond.reference_pressure * C::gas_constant * cond.temperature * cond.temperature * fc *
                       std::tanh(hc_2kT * fc);
    return num / den * line_shape(line, cond, f);
}

inline double molecular_absorption_coefficient(const AbsorptionMedium& medium, double f) {
    double k = 0.0;
    for (const auto& line : medium.lines) k += line_absorption(line, medium.conditions, f);
    return k;
}

/// Ambient conditions and single line listed with the absorption parameter table.
/// The line values are kept verbatim (Hz-scale resonance, 0.05 % mixing ratio).
inline AbsorptionMedium reference_table_medium() {
    AbsorptionMedium m;
    m.conditions = {1.0, 1.0, 396.0, 296.0, 273.15};
    m.lines.push_back({276.0, 2.66e-25, 0.1117, 0.916, 0.0251, 0.0005, 0.83});
    return m;
}

inline constexpr const char* kLineCatalogHeader = "f_c0_hz,S,alpha_air_hz,alpha_0_hz,delta_hz,q,gamma";

inline std::vector<SpectralLine> read_line_catalog(std::istream& in, const std::string& source = "<catalog>") {
    std::vector<SpectralLine> lines;
    std::string text;
    std::size_t lineno = 0;
    bool header_seen = false;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, text)) {
        ++lineno;
        if (lineno == 1 && text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);
        text = trim(text);
        if (text.empty() || text[0] == '#') continue;
        if (!header_seen) {
            std::string compact;
            for (char c : text)
                if (c != ' ' && c != '\t') compact += c;
            if (compact != kLineCatalogHeader)
                throw ParseError(source, lineno, std::string("expected header '") + kLineCatalogHeader + "'");
            header_seen = true;
            continue;
        }
        std::vector<double> v;
        std::stringstream ss(text);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cell = trim(cell);
            std::size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw ParseError(source, lineno, "not a number: '" + cell + "'");
            }
            if (used != cell.size()) throw ParseError(source, lineno, "not a number: '" + cell + "'");
            v.push_back(x);
        }
        if (v.size() != 7) throw ParseError(source, lineno, "expected 7 columns, got " + std::to_string(v.size()));
        SpectralLine line{v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
        try {
            line.validate();
        } catch (const ValidationError& e) {
            throw ParseError(source, lineno, e.what());
        }
        lines.push_back(line);
    }
    // A file with no content lines is an empty catalog; a header is only
    // required once data rows appear.
    return lines;
}

inline std::vector<SpectralLine> load_line_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    return read_line_catalog(in, path);
}

}  // namespace hybridnet
