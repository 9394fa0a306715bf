#pragma once

// Coverage probabilities. THz links are inverted from the characteristic
// function of S(r) - tau I (Gil-Pelaez); RF links use the Rayleigh-fading
// closed form with the Gauss hypergeometric interference kernel.
//
// Internally all THz powers are divided by P_T gamma_T / r0^2, so the margin,
// the noise term and the interference are O(1) numbers and the inversion
// frequency is dimensionless.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hybridnet/analysis.hpp"
#include "hybridnet/handoff.hpp"
#include "hybridnet/numerics.hpp"

namespace hybridnet {

using cplx = std::complex<double>;

struct CoverageConfig {
    int lt_series_terms = 3;       // L
    double lt_epsilon = 0.01;      // index offset of the interference series
    bool integer_index = true;     // sum l = 2..L; false sums l = 1+eps..L+eps
    bool interference_limited_rf = true;
    bool molecular_noise = true;   // absorption re-radiation in the THz denominator
    RfEquivalence rf_equivalence = RfEquivalence::exact;
    numerics::QuadratureSpec quadrature{1e-6, 1e-9, 2000};

    void validate() const {
        if (lt_series_terms < 1) throw ValidationError("lt_series_terms", "must be >= 1");
        if (!(lt_epsilon > 0.0 && lt_epsilon < 1.0)) throw ValidationError("lt_epsilon", "must lie in (0, 1)");
        if (integer_index && lt_series_terms < 2) throw ValidationError("lt_series_terms", "integer mode needs L >= 2");
        quadrature.validate();
    }
};

struct BlockageModel {
    double blocker_intensity = 0.0;  // 1/m^2
    double mean_length = 0.0;        // m
    double mean_width = 0.0;         // m

    double xi() const { return 2.0 * blocker_intensity * (mean_width + mean_length) / std::numbers::pi; }
    double p() const { return blocker_intensity * mean_width * mean_length; }
    double p_los(double r) const { return std::exp(-(xi() * r + p())); }

    void validate() const {
        if (!(blocker_intensity >= 0.0)) throw ValidationError("blockage.blocker_intensity", "must be >= 0");
        if (!(mean_length >= 0.0)) throw ValidationError("blockage.mean_length", "must be >= 0");
        if (!(mean_width >= 0.0)) throw ValidationError("blockage.mean_width", "must be >= 0");
        if (!(p() < 1.0)) throw std::domain_error("blockage: blocked area fraction p must be < 1");
    }
};

/// Gain error chi on the desired link, described by its Laplace transform
/// L_chi(s) = E[exp(-s chi)]. The optional quantile lets the simulator draw chi.
struct MisalignmentModel {
    std::function<cplx(cplx)> lt;
    std::function<double(double)> quantile;
    double max_gain = std::numeric_limits<double>::infinity();  // sup of the support of chi

    /// chi takes value values[k] with probability weights[k].
    static MisalignmentModel discrete(std::vector<double> values, std::vector<double> weights) {
        if (values.empty() || values.size() != weights.size())
            throw ValidationError("misalignment", "values and weights must be nonempty and of equal length");
        double total = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0)) throw ValidationError("misalignment", "weights must be >= 0");
            total += w;
        }
        for (double x : values)
            if (!(x >= 0.0)) throw ValidationError("misalignment", "gain values must be >= 0");
        for (double& w : weights) w /= total;
        MisalignmentModel m;
        m.lt = [values, weights](cplx s) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < values.size(); ++k) acc += weights[k] * std::exp(-s * values[k]);
            return acc;
        };
        m.max_gain = *std::max_element(values.begin(), values.end());
        m.quantile = [values, weights](double u) {
            double c = 0.0;
            for (std::size_t k = 0; k < values.size(); ++k) {
                c += weights[k];
                if (u < c) return values[k];
            }
            return values.back();
        };
        return m;
    }
};

namespace detail {

/// log of the interference Laplace transform in normalized form:
/// coef * sum_l (-w)^l / ((2l-2) Gamma(l+1)), coef = 2 pi lambda_T r0^2 and
/// w = s F P gamma / r0^2.
inline cplx log_lt_series(const CoverageConfig& cfg, double coef, cplx w) {
    if (w == cplx(0.0) || coef == 0.0) return 0.0;
    cplx acc = 0.0;
    const cplx minus_w = -w;
    const int first = cfg.integer_index ? 2 : 1;
    for (int i = first; i <= cfg.lt_series_terms; ++i) {
        const double l = cfg.integer_index ? static_cast<double>(i) : i + cfg.lt_epsilon;
        acc += std::pow(minus_w, l) / ((2.0 * l - 2.0) * std::tgamma(l + 1.0));
    }
    return coef * acc;
}

/// ½ - (1/pi) int_0^inf Im[phi(w)]/w dw, clamped to [0, 1].
template <class Phi>
double gil_pelaez(Phi&& phi, const numerics::QuadratureSpec& spec, double scale) {
    auto g = [&](double w) { return std::imag(phi(w)) / w; };
    const double integral = numerics::integrate_oscillatory_semiinfinite(g, spec, scale);
    return std::clamp(0.5 - integral / std::numbers::pi, 0.0, 1.0);
}

inline numerics::QuadratureSpec inversion_spec(const CoverageConfig& cfg) {
    numerics::QuadratureSpec s = cfg.quadrature;
    s.relative_tolerance = std::min(s.relative_tolerance, 1e-8);
    s.absolute_tolerance = std::min(s.absolute_tolerance, 1e-10);
    return s;
}

}  // namespace detail

/// Laplace transform of the aggregate THz interference (plus interferer
/// absorption noise) seen at a user served from r0, truncated series form.
inline cplx lt_aggregate_thz_interference(const Scenario& s, const CoverageConfig& cfg, cplx z, double r0) {
    if (!(r0 > 0.0)) throw std::domain_error("lt_aggregate_thz_interference: r0 must be > 0");
    const auto c = derive(s);
    const double coef = 2.0 * std::numbers::pi * s.thz.intensity * r0 * r0;
    const cplx w = z * c.f * c.gamma_t * s.thz.tx_power / (r0 * r0);
    return std::exp(detail::log_lt_series(cfg, coef, w));
}

/// Conditional THz coverage at fixed serving distance, with its components
/// exposed so the simulator tests and the extensions share one kernel.
class ThzLink {
public:
    ThzLink(const NetworkAnalysis& na, const CoverageConfig& cfg, double tau)
        : na_(na), cfg_(cfg), tau_(tau), spec_(detail::inversion_spec(cfg)) {
        cfg_.validate();
        if (!(tau >= 0.0)) throw std::domain_error("coverage: tau must be >= 0");
        const auto& s = na.scenario();
        p_gamma_ = na.constants().gamma_t * s.thz.tx_power;
        n0_ = s.thz.thermal_noise;
        lambda_ = s.thz.intensity;
        f_ = na.constants().f;
        k_ = na.ka();
    }

    double tau() const { return tau_; }

    /// Normalized margin S(r0) / (P gamma / r0^2).
    double margin(double r0) const {
        const double e = std::exp(-k_ * r0);
        return cfg_.molecular_noise ? (1.0 + tau_) * e - tau_ : e;
    }

    /// Normalized noise term tau N0 / (P gamma / r0^2).
    double noise(double r0) const { return tau_ * n0_ * r0 * r0 / p_gamma_; }

    /// Characteristic function factor of -tau I at frequency w.
    cplx interference_cf(double r0, double w) const {
        const double coef = 2.0 * std::numbers::pi * lambda_ * r0 * r0;
        if (coef == 0.0) return 1.0;
        if (cfg_.molecular_noise || k_ == 0.0) {
            // L(-j w tau): the series variable is -j w tau F
            return std::exp(detail::log_lt_series(cfg_, coef, cplx(0.0, -w * tau_ * f_)));
        }
        // Without absorption noise the interferers keep their e^{-K d} loss;
        // the PGFL is integrated directly since the series has no closed form.
        // Beyond x_c the phase y = a e^{-K x}/x^2 is below kSmallPhase, where
        // 1 - e^{jy} ~ -jy and the remainder is a E1(K x_c).
        constexpr double kSmallPhase = 1e-5;
        const double a = w * tau_ * f_ * r0 * r0;
        auto phase = [&](double x) { return a * std::exp(-k_ * x) / (x * x); };
        double x_c = r0;
        if (phase(r0) > kSmallPhase) {
            double hi = 2.0 * r0;
            while (phase(hi) > kSmallPhase) hi *= 2.0;
            x_c = numerics::find_root([&](double x) { return std::log(phase(x) / kSmallPhase); }, r0, hi, 1e-9 * hi);
        }
        // Where the phase exceeds kLargePhase, cos and sin average out.
        constexpr double kLargePhase = 100.0;
        double x_b = r0;
        if (phase(r0) > kLargePhase)
            x_b = numerics::find_root([&](double x) { return std::log(phase(x) / kLargePhase); }, r0, x_c, 1e-9 * x_c);
        auto re = [&](double x) { return (1.0 - std::cos(phase(x))) * x; };
        auto im = [&](double x) { return -std::sin(phase(x)) * x; };
        numerics::QuadratureSpec inner{1e-9, 1e-12, 4000};
        const double ire = 0.5 * (x_b * x_b - r0 * r0) + numerics::integrate(re, x_b, x_c, inner);
        const double iim = numerics::integrate(im, x_b, x_c, inner) - a * -std::expint(-k_ * x_c);
        // 1 - exp(j arg) = (1 - cos) - j sin
        return std::exp(-2.0 * std::numbers::pi * lambda_ * cplx(ire, iim));
    }

    double frequency_scale(double net) const {
        const double a = std::abs(net) > 0.0 ? 1.0 / std::abs(net) : 1.0;
        const double b = (tau_ * f_ > 0.0) ? 1.0 / (tau_ * f_) : a;
        return std::min(a, b);
    }

    /// P(SINR > tau | r0).
    double conditional(double r0) const {
        if (!(r0 > 0.0)) throw std::domain_error("coverage: r0 must be > 0");
        if (tau_ == 0.0) return 1.0;
        const double m = margin(r0);
        const double n = noise(r0);
        // Interference is nonnegative, so a nonpositive margin is never covered.
        if (m - n <= 0.0) return 0.0;
        if (lambda_ == 0.0) return 1.0;
        auto phi = [&](double w) { return std::exp(cplx(0.0, -w * (m - n))) * interference_cf(r0, w); };
        return detail::gil_pelaez(phi, spec_, frequency_scale(m - n));
    }

    /// Conditional coverage with the desired-link gain chi ~ mis.
    double conditional_misaligned(double r0, const MisalignmentModel& mis) const {
        if (!(r0 > 0.0)) throw std::domain_error("coverage: r0 must be > 0");
        const double m = margin(r0);
        const double n = noise(r0);
        if (m <= 0.0) return 0.0;
        // no gain draw can beat the noise: not covered, as in conditional()
        if (std::isfinite(mis.max_gain) && mis.max_gain * m - n <= 0.0) return 0.0;
        auto phi = [&](double w) {
            return mis.lt(cplx(0.0, w * m)) * interference_cf(r0, w) * std::exp(cplx(0.0, w * n));
        };
        return detail::gil_pelaez(phi, spec_, frequency_scale(m - n));
    }

    /// Noise-limited conditional coverage through the Dirichlet integral.
    double conditional_noise_limited(double r0) const {
        const double net = margin(r0) - noise(r0);
        if (net == 0.0) return 0.5;
        auto phi = [&](double w) { return std::exp(cplx(0.0, -w * net)); };
        return detail::gil_pelaez(phi, spec_, 1.0 / std::abs(net));
    }

    /// Largest serving distance with positive net margin (or the PDF cutoff);
    /// `gain` scales the desired signal.
    double coverage_radius(double r_limit, double gain = 1.0) const {
        auto net = [&](double r) { return gain * margin(r) - noise(r); };
        if (net(r_limit) > 0.0) return r_limit;
        return numerics::find_root(net, 0.0, r_limit, 1e-10 * r_limit);
    }

    /// Largest serving distance with positive margin, ignoring noise.
    double margin_radius(double r_limit) const {
        if (margin(r_limit) > 0.0) return r_limit;
        return numerics::find_root([&](double r) { return margin(r); }, 0.0, r_limit, 1e-10 * r_limit);
    }

private:
    const NetworkAnalysis& na_;
    CoverageConfig cfg_;
    double tau_;
    numerics::QuadratureSpec spec_;
    double p_gamma_ = 0.0;
    double n0_ = 0.0;
    double lambda_ = 0.0;
    double f_ = 0.0;
    double k_ = 0.0;
};

inline double coverage_thz_conditional(const NetworkAnalysis& na, const CoverageConfig& cfg, double tau, double r0) {
    return ThzLink(na, cfg, tau).conditional(r0);
}

namespace detail {

template <class Weight>
double average_thz(const NetworkAnalysis& na, const CoverageConfig& cfg, double upper, Weight weight) {
    if (na.a_t() <= 0.0 || upper <= 0.0) return 0.0;
    return std::clamp(numerics::integrate([&](double r) { return r > 0.0 ? weight(r) * na.pdf_thz(r) : 0.0; }, 0.0,
                                          upper, cfg.quadrature),
                      0.0, 1.0);
}

}  // namespace detail

/// THz coverage averaged over the serving-distance density.
inline double coverage_thz(const NetworkAnalysis& na, const CoverageConfig& cfg, double tau) {
    if (tau == 0.0) return 1.0;
    const ThzLink link(na, cfg, tau);
    const double upper = link.coverage_radius(na.r_max_thz());
    return detail::average_thz(na, cfg, upper, [&](double r) { return link.conditional(r); });
}

/// RF coverage with Rayleigh fading and PPP interference beyond the serving distance.
inline double coverage_rf(const NetworkAnalysis& na, const CoverageConfig& cfg, double tau) {
    cfg.validate();
    if (na.a_r() <= 0.0) return 0.0;
    if (tau == 0.0) return 1.0;
    const auto& s = na.scenario();
    const double alpha = s.rf.pathloss_exponent;
    const double y = numerics::gauss_2f1_coverage_kernel(tau, alpha);
    const double snr_coef = tau * s.rf.thermal_noise / (s.rf.tx_power * na.constants().gamma_r);
    auto integrand = [&](double r) {
        double v = std::exp(-std::numbers::pi * r * r * s.rf.intensity * y);
        if (!cfg.interference_limited_rf) v *= std::exp(-snr_coef * std::pow(r, alpha));
        return v * (cfg.rf_equivalence == RfEquivalence::exact ? na.pdf_rf_exact(r) : na.pdf_rf(r));
    };
    return std::clamp(numerics::integrate(integrand, 0.0, na.r_max_rf(), cfg.quadrature), 0.0, 1.0);
}

struct CoverageResult {
    double tau_t = 0.0;
    double tau_r = 0.0;
    double c_t = 0.0;
    double c_r = 0.0;
    double c = 0.0;
};

inline CoverageResult coverage_total(const NetworkAnalysis& na, const CoverageConfig& cfg) {
    const auto& s = na.scenario();
    CoverageResult out;
    out.tau_t = rate_to_sinr_threshold(s.rate_threshold, s.thz.bandwidth);
    out.tau_r = rate_to_sinr_threshold(s.rate_threshold, s.rf.bandwidth);
    out.c_t = na.a_t() > 0.0 ? coverage_thz(na, cfg, out.tau_t) : 0.0;
    out.c_r = na.a_r() > 0.0 ? coverage_rf(na, cfg, out.tau_r) : 0.0;
    out.c = na.a_t() * out.c_t + na.a_r() * out.c_r;
    return out;
}

inline double coverage_with_mobility(double coverage, double ho_cost, double p_ho) {
    if (!(ho_cost >= 0.0 && ho_cost <= 1.0)) throw ValidationError("mobility.ho_cost", "must lie in [0, 1]");
    return coverage * (1.0 - ho_cost * p_ho);
}

inline double coverage_with_mobility(const NetworkAnalysis& na, const CoverageConfig& cfg) {
    const double c = coverage_total(na, cfg).c;
    return coverage_with_mobility(c, na.scenario().mobility.ho_cost, overall_ho_probability(na, cfg.rf_equivalence).p_overall);
}

/// Noise-limited THz coverage evaluated through the Dirichlet integral at every serving distance.
inline double coverage_thz_noise_limited(const NetworkAnalysis& na, const CoverageConfig& cfg, double tau) {
    const ThzLink link(na, cfg, tau);
    return detail::average_thz(na, cfg, na.r_max_thz(), [&](double r) { return link.conditional_noise_limited(r); });
}

/// Same quantity as P(r0 < r*) with r* the root of the net margin.
inline double coverage_thz_noise_limited_by_root(const NetworkAnalysis& na, const CoverageConfig& cfg, double tau) {
    const ThzLink link(na, cfg, tau);
    const double upper = link.coverage_radius(na.r_max_thz());
    return detail::average_thz(na, cfg, upper, [](double) { return 1.0; });
}

inline double coverage_thz_with_misalignment(const NetworkAnalysis& na, const CoverageConfig& cfg, double tau,
                                             const MisalignmentModel& mis) {
    if (!mis.lt) throw ValidationError("misalignment", "Laplace transform is not set");
    const ThzLink link(na, cfg, tau);
    const double upper = std::isfinite(mis.max_gain) ? link.coverage_radius(na.r_max_thz(), mis.max_gain)
                                                     : link.margin_radius(na.r_max_thz());
    return detail::average_thz(na, cfg, upper, [&](double r) { return link.conditional_misaligned(r, mis); });
}

inline double coverage_thz_with_blockage(const NetworkAnalysis& na, const CoverageConfig& cfg, double tau,
                                         const BlockageModel& b) {
    b.validate();
    if (tau == 0.0) {
        return detail::average_thz(na, cfg, na.r_max_thz(), [&](double r) { return b.p_los(r); });
    }
    const ThzLink link(na, cfg, tau);
    const double upper = link.coverage_radius(na.r_max_thz());
    return detail::average_thz(na, cfg, upper, [&](double r) { return b.p_los(r) * link.conditional(r); });
}

/// Hybrid coverage with LOS blockage on the THz links.
inline CoverageResult coverage_total_with_blockage(const NetworkAnalysis& na, const CoverageConfig& cfg,
                                                   const BlockageModel& b) {
    const auto& s = na.scenario();
    CoverageResult out;
    out.tau_t = rate_to_sinr_threshold(s.rate_threshold, s.thz.bandwidth);
    out.tau_r = rate_to_sinr_threshold(s.rate_threshold, s.rf.bandwidth);
    out.c_t = na.a_t() > 0.0 ? coverage_thz_with_blockage(na, cfg, out.tau_t, b) : 0.0;
    out.c_r = na.a_r() > 0.0 ? coverage_rf(na, cfg, out.tau_r) : 0.0;
    out.c = na.a_t() * out.c_t + na.a_r() * out.c_r;
    return out;
}

}  // namespace hybridnet
