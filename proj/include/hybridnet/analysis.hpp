#pragma once

// Tier association, conditional serving-distance densities, equivalent
// distances and the power-law surrogate exponent mu for the THz tier.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hybridnet/model.hpp"
#include "hybridnet/numerics.hpp"

namespace hybridnet {

struct AssociationResult {
    double a_t = 0.0;
    double a_r = 0.0;
    double mu = 0.0;
};

namespace detail {

// A_T needs to hold 1e-6 against the closed form, so it is integrated tighter
// than the library default.
inline numerics::QuadratureSpec association_spec() { return {1e-11, 1e-13, 4000}; }

inline double distance_cutoff(double intensity) {
    return intensity > 0.0 ? numerics::truncation_radius(intensity) : numerics::kInfinity;
}

/// Probability that no RBS beats a TBS at distance d.
inline double rf_void_beyond_thz(const Scenario& s, const DerivedConstants& c, double d) {
    const double alpha = s.rf.pathloss_exponent;
    const double e = std::pow(c.q * d * d, 2.0 / alpha) * std::exp(2.0 * s.ka() * d / alpha);
    return std::exp(-std::numbers::pi * s.rf.intensity * e);
}

/// Probability that no TBS beats an RBS at distance r, power-law surrogate with exponent mu.
inline double thz_void_beyond_rf(const Scenario& s, const DerivedConstants& c, double mu, double r) {
    const double alpha = s.rf.pathloss_exponent;
    const double e = std::pow(std::pow(r, alpha) / c.q, 2.0 / (2.0 + mu));
    return std::exp(-std::numbers::pi * s.thz.intensity * e);
}

}  // namespace detail

inline double nearest_neighbor_pdf(double intensity, double r) {
    return 2.0 * std::numbers::pi * intensity * r * std::exp(-std::numbers::pi * intensity * r * r);
}

/// A_T: probability that the strongest long-term signal comes from the THz tier.
inline double association_prob_thz(const Scenario& s) {
    const double lt = s.thz.intensity;
    const double lr = s.rf.intensity;
    if (lt <= 0.0 && lr <= 0.0) throw ValidationError("intensity", "both tiers are empty");
    if (lt <= 0.0) return 0.0;
    if (lr <= 0.0) return 1.0;
    const auto c = derive(s);
    const double value = numerics::integrate(
        [&](double d) { return detail::rf_void_beyond_thz(s, c, d) * nearest_neighbor_pdf(lt, d); }, 0.0,
        detail::distance_cutoff(lt), detail::association_spec());
    return std::clamp(value, 0.0, 1.0);
}

/// A_T for alpha = 4 with absorption ignored, via erfc.
inline double association_prob_thz_closed_form_alpha4(const Scenario& s) {
    if (s.rf.pathloss_exponent != 4.0)
        throw std::domain_error("association_prob_thz_closed_form_alpha4: requires alpha = 4");
    const double lt = s.thz.intensity;
    const double lr = s.rf.intensity;
    if (lt <= 0.0) throw std::domain_error("association_prob_thz_closed_form_alpha4: requires lambda_T > 0");
    const double q = derive(s).q;
    const double x = 0.5 * lr * std::sqrt(std::numbers::pi * q / lt);
    // exp(x^2) erfc(x), switched to its asymptotic series where exp would overflow.
    double scaled;
    if (x < 25.0) {
        scaled = std::exp(x * x) * numerics::erfc(x);
    } else {
        const double inv2 = 1.0 / (x * x);
        scaled = (1.0 - 0.5 * inv2 + 0.75 * inv2 * inv2 - 1.875 * inv2 * inv2 * inv2) / (x * std::sqrt(std::numbers::pi));
    }
    return 1.0 - 0.5 * std::numbers::pi * lr * std::sqrt(q / lt) * scaled;
}

/// Association probability with the RF tier under the surrogate exponent mu.
inline double approx_association_prob_rf(const Scenario& s, double mu) {
    const double lr = s.rf.intensity;
    if (lr <= 0.0) return 0.0;
    if (s.thz.intensity <= 0.0) return 1.0;
    const auto c = derive(s);
    return numerics::integrate(
        [&](double r) { return detail::thz_void_beyond_rf(s, c, mu, r) * nearest_neighbor_pdf(lr, r); }, 0.0,
        detail::distance_cutoff(lr), detail::association_spec());
}

/// r_R' such that an RBS there delivers the same long-term power as a TBS at r_T.
inline double equivalent_distance_rf_of_thz(const Scenario& s, double r_t) {
    const double alpha = s.rf.pathloss_exponent;
    return std::exp(s.ka() * r_t / alpha) * std::pow(derive(s).q * r_t * r_t, 1.0 / alpha);
}

/// r_T' under the surrogate r^mu ~ e^{K r}; exact when K = 0 and mu = 0.
inline double equivalent_distance_thz_of_rf(const Scenario& s, double mu, double r_r) {
    return std::pow(std::pow(r_r, s.rf.pathloss_exponent) / derive(s).q, 1.0 / (2.0 + mu));
}

/// Exact inverse of the THz power law: the d with d^2 e^{K d} = r^alpha / Q.
inline double exact_equivalent_distance_thz_of_rf(const Scenario& s, double r_r) {
    const double target = std::pow(r_r, s.rf.pathloss_exponent) / derive(s).q;
    if (target <= 0.0) return 0.0;
    const double k = s.ka();
    if (k == 0.0) return std::sqrt(target);
    // log form keeps the bracket well scaled: 2 ln d + K d = ln target
    const double lt = std::log(target);
    double hi = std::sqrt(target);
    double lo = 0.0;
    auto g = [&](double d) { return d <= 0.0 ? -numerics::kInfinity : 2.0 * std::log(d) + k * d - lt; };
    return numerics::find_root(g, lo, hi, 1e-12 * hi);
}

/// mu solving A~_R(mu) = 1 - A_T, bisected on [0, 10] with the upper end doubled as needed.
inline double solve_correction_factor(const Scenario& s, double a_t) {
    const double a_r = 1.0 - a_t;
    if (s.ka() == 0.0 || s.rf.intensity <= 0.0 || s.thz.intensity <= 0.0) return 0.0;
    auto residual = [&](double mu) { return approx_association_prob_rf(s, mu) - a_r; };
    const double r0 = residual(0.0);
    if (r0 >= -1e-9) return 0.0;
    double hi = 10.0;
    double r_hi = residual(hi);
    for (int i = 0; i < 6 && r_hi < 0.0; ++i) {
        hi *= 2.0;
        r_hi = residual(hi);
    }
    if (r_hi < 0.0) throw BracketError("solve_correction_factor: no root for mu", r0, r_hi);
    return numerics::find_root(residual, 0.0, hi, 1e-10);
}

inline double solve_correction_factor(const Scenario& s) {
    return solve_correction_factor(s, association_prob_thz(s));
}

/// Scenario bound to its association probabilities and mu, computed once.
class NetworkAnalysis {
public:
    explicit NetworkAnalysis(Scenario s, numerics::QuadratureSpec spec = {})
        : s_(std::move(s)), spec_(spec), c_(derive(s_)), ka_(s_.ka()) {
        s_.validate();
        spec_.validate();
        a_t_ = association_prob_thz(s_);
        mu_ = solve_correction_factor(s_, a_t_);
    }

    const Scenario& scenario() const { return s_; }
    const DerivedConstants& constants() const { return c_; }
    const numerics::QuadratureSpec& spec() const { return spec_; }
    double ka() const { return ka_; }
    double a_t() const { return a_t_; }
    double a_r() const { return 1.0 - a_t_; }
    double mu() const { return mu_; }
    AssociationResult association() const { return {a_t_, 1.0 - a_t_, mu_}; }

    double r_max_thz() const { return detail::distance_cutoff(s_.thz.intensity); }
    double r_max_rf() const { return detail::distance_cutoff(s_.rf.intensity); }

    /// Serving-distance density given THz association.
    double pdf_thz(double r) const {
        if (a_t_ <= 0.0 || r < 0.0) return 0.0;
        return nearest_neighbor_pdf(s_.thz.intensity, r) * detail::rf_void_beyond_thz(s_, c_, r) / a_t_;
    }

    /// Serving-distance density given RF association, surrogate exponent mu.
    double pdf_rf(double r, double mu) const {
        if (a_t_ >= 1.0 || r < 0.0) return 0.0;
        return nearest_neighbor_pdf(s_.rf.intensity, r) * detail::thz_void_beyond_rf(s_, c_, mu, r) / (1.0 - a_t_);
    }
    double pdf_rf(double r) const { return pdf_rf(r, mu_); }

    /// Serving-distance density given RF association, THz void radius solved exactly.
    double pdf_rf_exact(double r) const {
        if (a_t_ >= 1.0 || r < 0.0) return 0.0;
        const double t = equivalent_thz_exact(r);
        return nearest_neighbor_pdf(s_.rf.intensity, r) * std::exp(-std::numbers::pi * s_.thz.intensity * t * t) /
               (1.0 - a_t_);
    }

    double equivalent_rf(double r_t) const {
        const double alpha = s_.rf.pathloss_exponent;
        return std::exp(ka_ * r_t / alpha) * std::pow(c_.q * r_t * r_t, 1.0 / alpha);
    }
    double equivalent_thz(double r_r) const {
        return std::pow(std::pow(r_r, s_.rf.pathloss_exponent) / c_.q, 1.0 / (2.0 + mu_));
    }

    /// THz distance d with d^2 e^{K d} = bias^-1 r^alpha / Q, solved exactly.
    double equivalent_thz_exact(double r_r, double bias = 1.0) const {
        if (r_r <= 0.0) return 0.0;
        const double log_target = s_.rf.pathloss_exponent * std::log(r_r) - std::log(c_.q * bias);
        const double plain = std::exp(0.5 * log_target);
        if (ka_ == 0.0) return plain;
        auto g = [&](double d) { return d <= 0.0 ? -numerics::kInfinity : 2.0 * std::log(d) + ka_ * d - log_target; };
        return numerics::find_root(g, 0.0, plain, 1e-13 * plain);
    }

private:
    Scenario s_;
    numerics::QuadratureSpec spec_;
    DerivedConstants c_;
    double ka_;
    double a_t_ = 0.0;
    double mu_ = 0.0;
};

inline double conditional_distance_pdf_thz(const Scenario& s, double r) { return NetworkAnalysis(s).pdf_thz(r); }

inline double conditional_distance_pdf_rf(const Scenario& s, double mu, double r) {
    return NetworkAnalysis(s).pdf_rf(r, mu);
}

}  // namespace hybridnet
