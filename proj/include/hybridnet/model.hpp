#pragma once

// Scenario description for the two-tier RF/THz network and the link-level
// power, noise and SINR-margin expressions.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hybridnet/absorption.hpp"
#include "hybridnet/errors.hpp"

namespace hybridnet {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Thermal noise power k T W at 290 K.
inline double thermal_noise_power(double bandwidth_hz) {
    return PhysicalConstants::boltzmann * 290.0 * bandwidth_hz;
}

struct RfTier {
    double tx_power = 2.0;            // W
    double tx_gain = 1.0;             // linear
    double rx_gain = 1.0;             // linear
    double carrier = 2e9;             // Hz
    double pathloss_exponent = 4.0;
    double intensity = 1e-5;          // BS / m^2
    double bandwidth = 40e6;          // Hz
    double thermal_noise = thermal_noise_power(40e6);  // W

    void validate() const {
        if (!(pathloss_exponent > 2.0)) throw ValidationError("rf.pathloss_exponent", "must be > 2");
        if (!(tx_power >= 0.0)) throw ValidationError("rf.tx_power", "must be >= 0");
        if (!(tx_gain > 0.0)) throw ValidationError("rf.tx_gain", "must be > 0");
        if (!(rx_gain > 0.0)) throw ValidationError("rf.rx_gain", "must be > 0");
        if (!(carrier > 0.0)) throw ValidationError("rf.carrier", "must be > 0");
        if (!(intensity >= 0.0)) throw ValidationError("rf.intensity", "must be >= 0");
        if (!(bandwidth > 0.0)) throw ValidationError("rf.bandwidth", "must be > 0");
        if (!(thermal_noise >= 0.0)) throw ValidationError("rf.thermal_noise", "must be >= 0");
    }
};

/// Absorption is either a literal coefficient (1/m) or a medium evaluated at the carrier.
using AbsorptionSpec = std::variant<double, AbsorptionMedium>;

struct ThzTier {
    double tx_power = 0.2;                    // W
    double max_gain_tx = db_to_linear(25.0);
    double max_gain_rx = db_to_linear(25.0);
    double min_gain_tx = 0.0;
    double min_gain_rx = 0.0;
    double beamwidth_tx = std::numbers::pi / 18.0;  // rad
    double beamwidth_rx = std::numbers::pi / 18.0;  // rad
    double carrier = 3e12;                    // Hz
    AbsorptionSpec absorption = 0.01;
    double intensity = 1e-4;                  // BS / m^2
    double bandwidth = 0.5e9;                 // Hz
    double thermal_noise = thermal_noise_power(0.5e9);  // W

    double absorption_coefficient() const {
        if (const double* k = std::get_if<double>(&absorption)) return *k;
        return molecular_absorption_coefficient(std::get<AbsorptionMedium>(absorption), carrier);
    }

    void validate() const {
        if (!(tx_power >= 0.0)) throw ValidationError("thz.tx_power", "must be >= 0");
        if (!(beamwidth_tx > 0.0 && beamwidth_tx < 2.0 * std::numbers::pi))
            throw ValidationError("thz.beamwidth_tx", "must lie in (0, 2 pi)");
        if (!(beamwidth_rx > 0.0 && beamwidth_rx < 2.0 * std::numbers::pi))
            throw ValidationError("thz.beamwidth_rx", "must lie in (0, 2 pi)");
        if (!(min_gain_tx >= 0.0)) throw ValidationError("thz.min_gain_tx", "must be >= 0");
        if (!(min_gain_rx >= 0.0)) throw ValidationError("thz.min_gain_rx", "must be >= 0");
        if (!(max_gain_tx >= min_gain_tx && max_gain_tx > 0.0))
            throw ValidationError("thz.max_gain_tx", "must be > 0 and >= min_gain_tx");
        if (!(max_gain_rx >= min_gain_rx && max_gain_rx > 0.0))
            throw ValidationError("thz.max_gain_rx", "must be > 0 and >= min_gain_rx");
        if (!(carrier > 0.0)) throw ValidationError("thz.carrier", "must be > 0");
        if (!(intensity >= 0.0)) throw ValidationError("thz.intensity", "must be >= 0");
        if (!(bandwidth > 0.0)) throw ValidationError("thz.bandwidth", "must be > 0");
        if (!(thermal_noise >= 0.0)) throw ValidationError("thz.thermal_noise", "must be >= 0");
        if (const auto* m = std::get_if<AbsorptionMedium>(&absorption)) {
            m->validate();
        } else if (!(std::get<double>(absorption) >= 0.0)) {
            throw ValidationError("thz.absorption", "must be >= 0");
        }
    }
};

struct MobilityProfile {
    double speed = 0.0;       // displacement per movement period, m
    double ho_cost = 0.5;     // eta
    double hysteresis = 1.0;  // linear bias on the serving BS power

    void validate() const {
        if (!(speed >= 0.0)) throw ValidationError("mobility.speed", "must be >= 0");
        if (!(ho_cost >= 0.0 && ho_cost <= 1.0)) throw ValidationError("mobility.ho_cost", "must lie in [0, 1]");
        if (!(hysteresis >= 1.0)) throw ValidationError("mobility.hysteresis", "must be >= 1");
    }
};

struct Scenario {
    RfTier rf;
    ThzTier thz;
    double region_radius = 500.0;   // m
    double rate_threshold = 1e9;    // bit/s
    MobilityProfile mobility;

    void validate() const {
        rf.validate();
        thz.validate();
        mobility.validate();
        if (!(region_radius > 0.0)) throw ValidationError("region_radius", "must be > 0");
        if (!(rate_threshold >= 0.0)) throw ValidationError("rate_threshold", "must be >= 0");
    }

    double ka() const { return thz.absorption_coefficient(); }
};

struct DerivedConstants {
    double gamma_r = 0.0;  // m^2
    double gamma_t = 0.0;  // m^2
    double q = 0.0;        // P_R gamma_R / (P_T gamma_T)
    double f = 0.0;        // main-lobe alignment probability
};

inline double aperture_factor(double g_tx, double g_rx, double carrier) {
    const double w = PhysicalConstants::light_speed / (4.0 * std::numbers::pi * carrier);
    return g_tx * g_rx * w * w;
}

inline DerivedConstants derive(const Scenario& s) {
    DerivedConstants d;
    d.gamma_r = aperture_factor(s.rf.tx_gain, s.rf.rx_gain, s.rf.carrier);
    d.gamma_t = aperture_factor(s.thz.max_gain_tx, s.thz.max_gain_rx, s.thz.carrier);
    d.q = (s.rf.tx_power * d.gamma_r) / (s.thz.tx_power * d.gamma_t);
    d.f = s.thz.beamwidth_tx * s.thz.beamwidth_rx / (4.0 * std::numbers::pi * std::numbers::pi);
    return d;
}

/// Long-term (fading-free) RF received power at distance r0.
inline double rf_received_power(const Scenario& s, double r0) {
    if (!(r0 > 0.0)) throw std::domain_error("rf_received_power: distance must be > 0");
    const auto d = derive(s);
    return d.gamma_r * s.rf.tx_power / std::pow(r0, s.rf.pathloss_exponent);
}

/// Long-term THz received power over the main lobe at distance d0.
inline double thz_received_power(const Scenario& s, double d0) {
    if (!(d0 > 0.0)) throw std::domain_error("thz_received_power: distance must be > 0");
    const auto d = derive(s);
    return d.gamma_t * s.thz.tx_power * std::exp(-s.ka() * d0) / (d0 * d0);
}

/// S(d0) = P_T gamma_T d0^-2 ((1+tau) e^{-K d0} - tau). Coverage needs S > tau (N0 + I).
inline double thz_sinr_margin(const Scenario& s, double d0, double tau) {
    const double p = derive(s).gamma_t * s.thz.tx_power / (d0 * d0);
    return p * ((1.0 + tau) * std::exp(-s.ka() * d0) - tau);
}

inline double rate_to_sinr_threshold(double rate, double bandwidth) {
    if (!(bandwidth > 0.0)) throw std::domain_error("rate_to_sinr_threshold: bandwidth must be > 0");
    return std::exp2(rate / bandwidth) - 1.0;
}

/// Thermal noise plus absorption noise re-emitted along the serving and the
/// (aligned) interfering links.
inline double thz_total_noise(const Scenario& s, double d0, const std::vector<double>& interferer_distances) {
    const auto d = derive(s);
    const double k = s.ka();
    const double p = d.gamma_t * s.thz.tx_power;
    double n = s.thz.thermal_noise;
    if (std::isfinite(d0)) n += p / (d0 * d0) * (-std::expm1(-k * d0));
    for (double di : interferer_distances) n += p * d.f / (di * di) * (-std::expm1(-k * di));
    return n;
}

/// Baseline network: 0.2 W / 25 dB THz tier at 1e-4 BS/m^2, 2 W RF tier at
/// 2 GHz and 1e-5 BS/m^2, alpha = 4, 1 Gbps target, 500 m region.
inline Scenario default_scenario(double ka = 0.01) {
    Scenario s;
    s.thz.absorption = ka;
    return s;
}

}  // namespace hybridnet
