#pragma once

// Handoff probabilities after one movement step of length v.
//
// Geometry: the serving BS is at distance r from the user's start point; the
// user moves by v at angle theta measured from the direction pointing away
// from the serving BS, so the new serving distance is
// R^2 = r^2 + v^2 + 2 r v cos(theta). No handoff occurs when every competitor
// disc around the new position that would beat the serving BS is empty beyond
// the part already known to be empty at association time.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hybridnet/analysis.hpp"
#include "hybridnet/numerics.hpp"

namespace hybridnet {

/// How the THz side of an RF-served user (serving-distance density and void
/// radii) is obtained: from the mu power-law surrogate, or by solving the THz
/// power law exactly.
enum class RfEquivalence { surrogate, exact };

struct HandoffResult {
    double p_ho_from_thz = 0.0;
    double p_ho_from_rf = 0.0;
    double p_overall = 0.0;
};

/// Area of intersection of two discs of radii r1, r2 with centres d apart.
inline double lens_area(double r1, double r2, double d) {
    if (r1 <= 0.0 || r2 <= 0.0) return 0.0;
    if (d >= r1 + r2) return 0.0;
    if (d <= std::abs(r1 - r2)) {
        const double m = std::min(r1, r2);
        return std::numbers::pi * m * m;
    }
    const double c1 = std::clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0);
    const double c2 = std::clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0);
    const double k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    return r1 * r1 * std::acos(c1) + r2 * r2 * std::acos(c2) - 0.5 * std::sqrt(std::max(k, 0.0));
}

/// Part of the disc (radius `outer`, centred at the new position) not covered
/// by the known-empty disc (radius `inner`, centred at the start), v apart.
inline double swept_area(double outer, double inner, double v) {
    return std::max(std::numbers::pi * outer * outer - lens_area(outer, inner, v), 0.0);
}

namespace detail {

inline double moved_distance(double r, double v, double theta) {
    return std::sqrt(std::max(r * r + v * v + 2.0 * r * v * std::cos(theta), 0.0));
}

/// Radius within which another TBS beats a serving TBS at distance R whose
/// power is scaled by eta_h: rho^2 e^{K rho} = R^2 e^{K R} / eta_h.
inline double thz_competitor_radius(double ka, double big_r, double eta_h) {
    if (eta_h == 1.0 || big_r <= 0.0) return big_r;
    const double target = 2.0 * std::log(big_r) + ka * big_r - std::log(eta_h);
    if (ka == 0.0) return big_r / std::sqrt(eta_h);
    auto g = [&](double d) { return d <= 0.0 ? -numerics::kInfinity : 2.0 * std::log(d) + ka * d - target; };
    return numerics::find_root(g, 0.0, big_r, 1e-12 * big_r);
}

/// Void exponent for a THz-served user: TBS competitors within rho and RBS
/// competitors within the RF-equivalent radius, minus the known-empty parts.
inline double thz_void_exponent(const NetworkAnalysis& na, double r, double big_r, double v) {
    const auto& s = na.scenario();
    const double eta_h = s.mobility.hysteresis;
    const double alpha = s.rf.pathloss_exponent;
    const double rho = thz_competitor_radius(na.ka(), big_r, eta_h);
    const double rf_new = std::exp(na.ka() * big_r / alpha) * std::pow(na.constants().q * big_r * big_r / eta_h, 1.0 / alpha);
    const double rf_old = na.equivalent_rf(r);
    return s.thz.intensity * swept_area(rho, r, v) + s.rf.intensity * swept_area(rf_new, rf_old, v);
}

/// Mirror for an RF-served user.
template <RfEquivalence Mode>
double rf_void_exponent(const NetworkAnalysis& na, double r, double big_r, double v) {
    const auto& s = na.scenario();
    const double eta_h = s.mobility.hysteresis;
    const double alpha = s.rf.pathloss_exponent;
    const double rf_new = big_r * std::pow(eta_h, -1.0 / alpha);
    double thz_new;
    double thz_old;
    if constexpr (Mode == RfEquivalence::surrogate) {
        thz_new = std::pow(std::pow(big_r, alpha) / (na.constants().q * eta_h), 1.0 / (2.0 + na.mu()));
        thz_old = na.equivalent_thz(r);
    } else {
        thz_new = na.equivalent_thz_exact(big_r, eta_h);
        thz_old = na.equivalent_thz_exact(r);
    }
    return s.rf.intensity * swept_area(rf_new, r, v) + s.thz.intensity * swept_area(thz_new, thz_old, v);
}

inline numerics::QuadratureSpec inner_spec(const numerics::QuadratureSpec& outer) {
    numerics::QuadratureSpec s = outer;
    s.relative_tolerance = std::min(outer.relative_tolerance, 1e-7);
    s.absolute_tolerance = std::min(outer.absolute_tolerance, 1e-10);
    return s;
}

template <class Exponent, class Pdf>
double no_ho_direction_averaged(const NetworkAnalysis& na, Exponent exponent, Pdf pdf, double r_max) {
    const double v = na.scenario().mobility.speed;
    if (v == 0.0) return 1.0;
    const auto inner = inner_spec(na.spec());
    auto given_r = [&](double r) {
        const double f = pdf(r);
        if (f == 0.0) return 0.0;
        const double avg = numerics::integrate(
                               [&](double theta) { return std::exp(-exponent(na, r, moved_distance(r, v, theta), v)); },
                               0.0, std::numbers::pi, inner) /
                           std::numbers::pi;
        return f * avg;
    };
    return std::clamp(numerics::integrate(given_r, 0.0, r_max, na.spec()), 0.0, 1.0);
}

template <class Exponent, class Pdf>
double no_ho_straight(const NetworkAnalysis& na, Exponent exponent, Pdf pdf, double r_max) {
    const double v = na.scenario().mobility.speed;
    if (v == 0.0) return 1.0;
    auto given_r = [&](double r) {
        const double f = pdf(r);
        return f == 0.0 ? 0.0 : f * std::exp(-exponent(na, r, r + v, v));
    };
    return std::clamp(numerics::integrate(given_r, 0.0, r_max, na.spec()), 0.0, 1.0);
}

}  // namespace detail

/// Integrand of the THz no-handoff probability at (r, theta), without the
/// 1/pi direction weight.
inline double no_ho_integrand_thz(const NetworkAnalysis& na, double r, double theta) {
    const double v = na.scenario().mobility.speed;
    return na.pdf_thz(r) * std::exp(-detail::thz_void_exponent(na, r, detail::moved_distance(r, v, theta), v));
}

inline double no_ho_integrand_rf(const NetworkAnalysis& na, double r, double theta,
                                 RfEquivalence mode = RfEquivalence::exact) {
    const double v = na.scenario().mobility.speed;
    const double big_r = detail::moved_distance(r, v, theta);
    const double e = mode == RfEquivalence::exact ? detail::rf_void_exponent<RfEquivalence::exact>(na, r, big_r, v)
                                                  : detail::rf_void_exponent<RfEquivalence::surrogate>(na, r, big_r, v);
    const double f = mode == RfEquivalence::exact ? na.pdf_rf_exact(r) : na.pdf_rf(r);
    return f * std::exp(-e);
}

/// P(no HO | served by THz), direction uniform on [0, pi].
inline double no_ho_prob_given_thz(const NetworkAnalysis& na) {
    if (na.a_t() <= 0.0) return 1.0;
    return detail::no_ho_direction_averaged(
        na, detail::thz_void_exponent, [&](double r) { return na.pdf_thz(r); }, na.r_max_thz());
}

/// P(no HO | served by RF), direction uniform on [0, pi].
inline double no_ho_prob_given_rf(const NetworkAnalysis& na, RfEquivalence mode = RfEquivalence::exact) {
    if (na.a_r() <= 0.0) return 1.0;
    if (mode == RfEquivalence::surrogate)
        return detail::no_ho_direction_averaged(na, detail::rf_void_exponent<RfEquivalence::surrogate>,
                                                [&](double r) { return na.pdf_rf(r); }, na.r_max_rf());
    return detail::no_ho_direction_averaged(na, detail::rf_void_exponent<RfEquivalence::exact>,
                                            [&](double r) { return na.pdf_rf_exact(r); }, na.r_max_rf());
}

/// P(no HO | served by THz) when moving straight away from the serving BS.
inline double no_ho_prob_straight_line_thz(const NetworkAnalysis& na) {
    if (na.a_t() <= 0.0) return 1.0;
    return detail::no_ho_straight(
        na, detail::thz_void_exponent, [&](double r) { return na.pdf_thz(r); }, na.r_max_thz());
}

inline double no_ho_prob_straight_line_rf(const NetworkAnalysis& na, RfEquivalence mode = RfEquivalence::exact) {
    if (na.a_r() <= 0.0) return 1.0;
    if (mode == RfEquivalence::surrogate)
        return detail::no_ho_straight(na, detail::rf_void_exponent<RfEquivalence::surrogate>,
                                      [&](double r) { return na.pdf_rf(r); }, na.r_max_rf());
    return detail::no_ho_straight(na, detail::rf_void_exponent<RfEquivalence::exact>,
                                  [&](double r) { return na.pdf_rf_exact(r); }, na.r_max_rf());
}

inline HandoffResult overall_ho_probability(const NetworkAnalysis& na, RfEquivalence mode = RfEquivalence::exact) {
    HandoffResult h;
    if (na.scenario().mobility.speed == 0.0) return h;
    const double stay_t = no_ho_prob_given_thz(na);
    const double stay_r = no_ho_prob_given_rf(na, mode);
    h.p_ho_from_thz = 1.0 - stay_t;
    h.p_ho_from_rf = 1.0 - stay_r;
    h.p_overall = std::clamp(1.0 - na.a_r() * stay_r - na.a_t() * stay_t, 0.0, 1.0);
    return h;
}

inline HandoffResult overall_ho_probability(const Scenario& s, RfEquivalence mode = RfEquivalence::exact) {
    return overall_ho_probability(NetworkAnalysis(s), mode);
}

}  // namespace hybridnet
