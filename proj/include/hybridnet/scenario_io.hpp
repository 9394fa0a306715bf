#pragma once

// Scenario files: one `key = value` per line, '#' starts a comment. Keys
// mirror the field names (rf.*, thz.*, mobility.*, blockage.*, coverage.*),
// SI units throughout. Gains may be given in dB (`*_gain*_db`) or linear; the
// writer emits linear gains with shortest round-trip digits so that
// write(read(x)) is stable and read(write(s)) == s.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "hybridnet/coverage.hpp"
#include "hybridnet/errors.hpp"
#include "hybridnet/model.hpp"

namespace hybridnet {

struct ScenarioFile {
    Scenario scenario;
    std::optional<BlockageModel> blockage;
    CoverageConfig coverage;
};

namespace io_detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& text, const std::string& source, std::size_t line) {
    const std::string t = trim(text);
    double x = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (!t.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, x);
    if (t.empty() || res.ec != std::errc() || res.ptr != last)
        throw ParseError(source, line, "not a number: '" + t + "'");
    return x;
}

inline bool parse_bool(const std::string& text, const std::string& source, std::size_t line) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ParseError(source, line, "not a boolean: '" + t + "'");
}

inline SpectralLine parse_line_entry(const std::string& text, const std::string& source, std::size_t line) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(parse_double(cell, source, line));
    if (v.size() != 7) throw ParseError(source, line, "absorption line needs 7 values (" +
                                                          std::string(kLineCatalogHeader) + ")");
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6]};
}

}  // namespace io_detail

/// Parses a scenario file; unset keys keep their defaults. Thermal noise is
/// re-derived from the bandwidth unless given explicitly.
inline ScenarioFile read_scenario(std::istream& in, const std::string& source = "<scenario>",
                                  const std::filesystem::path& base_dir = {}) {
    using namespace io_detail;
    ScenarioFile out;
    Scenario& s = out.scenario;
    std::map<std::string, std::size_t> seen;
    bool rf_noise_set = false;
    bool thz_noise_set = false;
    std::optional<AbsorptionMedium> medium;
    std::optional<double> literal_absorption;
    BlockageModel blockage;
    bool blockage_set = false;

    auto medium_ref = [&]() -> AbsorptionMedium& {
        if (!medium) medium.emplace();
        return *medium;
    };

    std::string text;
    std::size_t lineno = 0;
    while (std::getline(in, text)) {
        ++lineno;
        if (lineno == 1 && text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);
        const auto hash = text.find('#');
        if (hash != std::string::npos) text.erase(hash);
        text = trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ParseError(source, lineno, "expected 'key = value'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) throw ParseError(source, lineno, "empty key");
        if (key != "thz.absorption.line") {
            const auto [it, fresh] = seen.emplace(key, lineno);
            if (!fresh) throw ParseError(source, lineno, "duplicate key '" + key + "' (first on line " +
                                                             std::to_string(it->second) + ")");
        }
        auto num = [&] { return parse_double(value, source, lineno); };
        auto db = [&] { return db_to_linear(num()); };

        if (key == "rf.tx_power") s.rf.tx_power = num();
        else if (key == "rf.tx_gain") s.rf.tx_gain = num();
        else if (key == "rf.tx_gain_db") s.rf.tx_gain = db();
        else if (key == "rf.rx_gain") s.rf.rx_gain = num();
        else if (key == "rf.rx_gain_db") s.rf.rx_gain = db();
        else if (key == "rf.carrier") s.rf.carrier = num();
        else if (key == "rf.pathloss_exponent") s.rf.pathloss_exponent = num();
        else if (key == "rf.intensity") s.rf.intensity = num();
        else if (key == "rf.bandwidth") s.rf.bandwidth = num();
        else if (key == "rf.thermal_noise") { s.rf.thermal_noise = num(); rf_noise_set = true; }
        else if (key == "thz.tx_power") s.thz.tx_power = num();
        else if (key == "thz.max_gain_tx") s.thz.max_gain_tx = num();
        else if (key == "thz.max_gain_tx_db") s.thz.max_gain_tx = db();
        else if (key == "thz.max_gain_rx") s.thz.max_gain_rx = num();
        else if (key == "thz.max_gain_rx_db") s.thz.max_gain_rx = db();
        else if (key == "thz.min_gain_tx") s.thz.min_gain_tx = num();
        else if (key == "thz.min_gain_tx_db") s.thz.min_gain_tx = db();
        else if (key == "thz.min_gain_rx") s.thz.min_gain_rx = num();
        else if (key == "thz.min_gain_rx_db") s.thz.min_gain_rx = db();
        else if (key == "thz.beamwidth_tx") s.thz.beamwidth_tx = num();
        else if (key == "thz.beamwidth_rx") s.thz.beamwidth_rx = num();
        else if (key == "thz.carrier") s.thz.carrier = num();
        else if (key == "thz.intensity") s.thz.intensity = num();
        else if (key == "thz.bandwidth") s.thz.bandwidth = num();
        else if (key == "thz.thermal_noise") { s.thz.thermal_noise = num(); thz_noise_set = true; }
        else if (key == "thz.absorption") literal_absorption = num();
        else if (key == "thz.absorption.line") medium_ref().lines.push_back(parse_line_entry(value, source, lineno));
        else if (key == "thz.absorption.catalog") {
            const std::filesystem::path p = base_dir.empty() ? std::filesystem::path(value) : base_dir / value;
            for (const auto& l : load_line_catalog(p.string())) medium_ref().lines.push_back(l);
        }
        else if (key == "thz.absorption.pressure") medium_ref().conditions.pressure = num();
        else if (key == "thz.absorption.reference_pressure") medium_ref().conditions.reference_pressure = num();
        else if (key == "thz.absorption.temperature") medium_ref().conditions.temperature = num();
        else if (key == "thz.absorption.reference_temperature") medium_ref().conditions.reference_temperature = num();
        else if (key == "thz.absorption.standard_temperature") medium_ref().conditions.standard_temperature = num();
        else if (key == "region_radius") s.region_radius = num();
        else if (key == "rate_threshold") s.rate_threshold = num();
        else if (key == "mobility.speed") s.mobility.speed = num();
        else if (key == "mobility.ho_cost") s.mobility.ho_cost = num();
        else if (key == "mobility.hysteresis") s.mobility.hysteresis = num();
        else if (key == "blockage.blocker_intensity") { blockage.blocker_intensity = num(); blockage_set = true; }
        else if (key == "blockage.mean_length") { blockage.mean_length = num(); blockage_set = true; }
        else if (key == "blockage.mean_width") { blockage.mean_width = num(); blockage_set = true; }
        else if (key == "coverage.lt_series_terms") {
            const double l = num();
            if (l != static_cast<int>(l)) throw ParseError(source, lineno, "lt_series_terms must be an integer");
            out.coverage.lt_series_terms = static_cast<int>(l);
        }
        else if (key == "coverage.lt_epsilon") out.coverage.lt_epsilon = num();
        else if (key == "coverage.integer_index") out.coverage.integer_index = parse_bool(value, source, lineno);
        else if (key == "coverage.interference_limited_rf")
            out.coverage.interference_limited_rf = parse_bool(value, source, lineno);
        else if (key == "coverage.molecular_noise") out.coverage.molecular_noise = parse_bool(value, source, lineno);
        else if (key == "coverage.rf_equivalence") {
            if (value == "exact") out.coverage.rf_equivalence = RfEquivalence::exact;
            else if (value == "surrogate") out.coverage.rf_equivalence = RfEquivalence::surrogate;
            else throw ParseError(source, lineno, "rf_equivalence must be 'exact' or 'surrogate'");
        }
        else throw ParseError(source, lineno, "unknown key '" + key + "'");
    }

    if (literal_absorption && medium)
        throw ParseError(source, seen.at("thz.absorption"), "thz.absorption conflicts with thz.absorption.* keys");
    if (literal_absorption) s.thz.absorption = *literal_absorption;
    if (medium) s.thz.absorption = *medium;
    if (!rf_noise_set) s.rf.thermal_noise = thermal_noise_power(s.rf.bandwidth);
    if (!thz_noise_set) s.thz.thermal_noise = thermal_noise_power(s.thz.bandwidth);
    if (blockage_set) out.blockage = blockage;

    s.validate();
    out.coverage.validate();
    if (out.blockage) out.blockage->validate();
    return out;
}

inline ScenarioFile load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    return read_scenario(in, path, std::filesystem::path(path).parent_path());
}

inline void write_scenario(std::ostream& os, const ScenarioFile& f) {
    using io_detail::format_double;
    const Scenario& s = f.scenario;
    auto kv = [&](const char* key, double v) { os << key << " = " << format_double(v) << '\n'; };
    os << "# hybrid RF/THz scenario, SI units, linear gains\n";
    kv("rf.tx_power", s.rf.tx_power);
    kv("rf.tx_gain", s.rf.tx_gain);
    kv("rf.rx_gain", s.rf.rx_gain);
    kv("rf.carrier", s.rf.carrier);
    kv("rf.pathloss_exponent", s.rf.pathloss_exponent);
    kv("rf.intensity", s.rf.intensity);
    kv("rf.bandwidth", s.rf.bandwidth);
    kv("rf.thermal_noise", s.rf.thermal_noise);
    kv("thz.tx_power", s.thz.tx_power);
    kv("thz.max_gain_tx", s.thz.max_gain_tx);
    kv("thz.max_gain_rx", s.thz.max_gain_rx);
    kv("thz.min_gain_tx", s.thz.min_gain_tx);
    kv("thz.min_gain_rx", s.thz.min_gain_rx);
    kv("thz.beamwidth_tx", s.thz.beamwidth_tx);
    kv("thz.beamwidth_rx", s.thz.beamwidth_rx);
    kv("thz.carrier", s.thz.carrier);
    kv("thz.intensity", s.thz.intensity);
    kv("thz.bandwidth", s.thz.bandwidth);
    kv("thz.thermal_noise", s.thz.thermal_noise);
    if (const double* k = std::get_if<double>(&s.thz.absorption)) {
        kv("thz.absorption", *k);
    } else {
        const auto& m = std::get<AbsorptionMedium>(s.thz.absorption);
        kv("thz.absorption.pressure", m.conditions.pressure);
        kv("thz.absorption.reference_pressure", m.conditions.reference_pressure);
        kv("thz.absorption.temperature", m.conditions.temperature);
        kv("thz.absorption.reference_temperature", m.conditions.reference_temperature);
        kv("thz.absorption.standard_temperature", m.conditions.standard_temperature);
        for (const auto& l : m.lines) {
            os << "thz.absorption.line = " << format_double(l.resonant_frequency_ref) << ", "
               << format_double(l.line_intensity) << ", " << format_double(l.air_halfwidth) << ", "
               << format_double(l.self_halfwidth) << ", " << format_double(l.pressure_shift) << ", "
               << format_double(l.mixing_ratio) << ", " << format_double(l.temperature_exponent) << '\n';
        }
    }
    kv("region_radius", s.region_radius);
    kv("rate_threshold", s.rate_threshold);
    kv("mobility.speed", s.mobility.speed);
    kv("mobility.ho_cost", s.mobility.ho_cost);
    kv("mobility.hysteresis", s.mobility.hysteresis);
    if (f.blockage) {
        kv("blockage.blocker_intensity", f.blockage->blocker_intensity);
        kv("blockage.mean_length", f.blockage->mean_length);
        kv("blockage.mean_width", f.blockage->mean_width);
    }
    const auto& c = f.coverage;
    os << "coverage.lt_series_terms = " << c.lt_series_terms << '\n';
    kv("coverage.lt_epsilon", c.lt_epsilon);
    os << "coverage.integer_index = " << (c.integer_index ? "true" : "false") << '\n';
    os << "coverage.interference_limited_rf = " << (c.interference_limited_rf ? "true" : "false") << '\n';
    os << "coverage.molecular_noise = " << (c.molecular_noise ? "true" : "false") << '\n';
    os << "coverage.rf_equivalence = " << (c.rf_equivalence == RfEquivalence::exact ? "exact" : "surrogate") << '\n';
}

}  // namespace hybridnet
