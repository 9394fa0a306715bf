#pragma once

// Numerical kernels shared by the analytical modules: adaptive Gauss-Kronrod
// quadrature on finite and semi-infinite ranges, an oscillatory tail
// integrator for inversion integrals, bisection, and the special functions
// that show up in the coverage expressions.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "hybridnet/errors.hpp"

namespace hybridnet::numerics {

struct QuadratureSpec {
    double relative_tolerance = 1e-6;
    double absolute_tolerance = 1e-10;
    int max_subdivisions = 2000;

    void validate() const {
        if (!(relative_tolerance > 0.0)) throw ValidationError("relative_tolerance", "must be > 0");
        if (!(absolute_tolerance > 0.0)) throw ValidationError("absolute_tolerance", "must be > 0");
        if (max_subdivisions < 1) throw ValidationError("max_subdivisions", "must be >= 1");
    }
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Left endpoint offset for inversion integrands with a removable 1/w singularity.
inline constexpr double kOscillatoryOrigin = 1e-8;

/// Radius beyond which a nearest-neighbour distance of a PPP with intensity
/// `lambda` carries less than 1e-10 of its mass.
inline double truncation_radius(double lambda) {
    return std::sqrt(std::log(1e10) / (std::numbers::pi * lambda));
}

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double result;
    double error;
};

template <class F>
Segment kronrod15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f_center = f(center);
    double res_g = f_center * kWg[3];
    double res_k = f_center * kWgk[7];
    double res_abs = std::abs(res_k);
    std::array<double, 7> f1{};
    std::array<double, 7> f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double v1 = f(center - dx);
        const double v2 = f(center + dx);
        f1[j] = v1;
        f2[j] = v2;
        res_k += kWgk[j] * (v1 + v2);
        res_abs += kWgk[j] * (std::abs(v1) + std::abs(v2));
        if (j % 2 == 1) res_g += kWg[j / 2] * (v1 + v2);
    }
    const double mean = res_k * 0.5;
    double res_asc = kWgk[7] * std::abs(f_center - mean);
    for (int j = 0; j < 7; ++j) res_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    const double abs_half = std::abs(half);
    res_abs *= abs_half;
    res_asc *= abs_half;
    double err = std::abs((res_k - res_g) * half);
    if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * res_abs, err);
    return {a, b, res_k * half, err};
}

template <class F>
double adaptive_finite(F& f, double a, double b, const QuadratureSpec& spec) {
    auto by_error = [](const Segment& x, const Segment& y) { return x.error < y.error; };
    std::vector<Segment> heap;
    heap.reserve(64);
    heap.push_back(kronrod15(f, a, b));
    double total = heap.front().result;
    double total_err = heap.front().error;
    int subdivisions = 1;
    while (true) {
        if (!std::isfinite(total)) throw ConvergenceError("integrand produced a non-finite value", total, total_err);
        const double tol = std::max(spec.relative_tolerance * std::abs(total), spec.absolute_tolerance);
        if (total_err <= tol) return total;
        if (subdivisions >= spec.max_subdivisions)
            throw ConvergenceError("adaptive quadrature exceeded max_subdivisions", total, total_err);

        std::pop_heap(heap.begin(), heap.end(), by_error);
        const Segment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Cannot bisect further at double precision; accept the estimate.
            heap.push_back({worst.a, worst.b, worst.result, 0.0});
            std::push_heap(heap.begin(), heap.end(), by_error);
            total_err -= worst.error;
            continue;
        }
        const Segment left = kronrod15(f, worst.a, mid);
        const Segment right = kronrod15(f, mid, worst.b);
        total += left.result + right.result - worst.result;
        total_err += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_error);
        ++subdivisions;
        if (total_err < 0.0) {
            total_err = 0.0;
            for (const auto& s : heap) total_err += s.error;
        }
    }
}

/// Wynn epsilon acceleration of a sequence of partial sums.
class WynnEpsilon {
public:
    double next(double partial_sum) {
        table_.push_back(partial_sum);
        double aux = 0.0;
        for (std::size_t j = table_.size() - 1; j > 0; --j) {
            const double prev = aux;
            aux = table_[j - 1];
            const double diff = table_[j] - aux;
            table_[j - 1] = std::abs(diff) <= kSmall ? kBig : prev + 1.0 / diff;
        }
        double value = (table_.size() % 2 == 1) ? table_[0] : table_[1];
        if (std::abs(value) > 0.01 * kBig) value = last_;
        last_delta_ = std::abs(value - last_);
        last_ = value;
        return value;
    }

    double last_delta() const { return last_delta_; }

private:
    static constexpr double kSmall = 1e-300;
    static constexpr double kBig = 1e300;
    std::vector<double> table_;
    double last_ = 0.0;
    double last_delta_ = kBig;
};

}  // namespace detail

/// Adaptive Gauss-Kronrod integral of `f` over [a, b]; `b` may be +infinity,
/// handled through x = a + t/(1-t).
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
    spec.validate();
    if (!(a < b)) {
        if (a == b) return 0.0;
        throw std::invalid_argument("integrate: requires a < b");
    }
    if (std::isinf(b)) {
        auto mapped = [&f, a](double t) {
            const double one_minus = 1.0 - t;
            const double x = a + t / one_minus;
            const double v = f(x) / (one_minus * one_minus);
            return std::isfinite(v) ? v : 0.0;
        };
        return detail::adaptive_finite(mapped, 0.0, 1.0, spec);
    }
    auto plain = [&f](double x) { return f(x); };
    return detail::adaptive_finite(plain, a, b, spec);
}

/// Integral over (0, inf) of an integrand with a removable singularity at 0
/// and either a decaying or an oscillating tail. `scale` is the abscissa at
/// which the integrand starts to vary appreciably (1 in natural units).
///
/// The head [0, w0] uses the limiting value g(w0). The range is then extended
/// in doubling panels; once a panel shows several sign changes the tail is
/// summed cycle by cycle between consecutive zeros and accelerated with the
/// Wynn epsilon algorithm.
template <class G>
double integrate_oscillatory_semiinfinite(G&& g, const QuadratureSpec& spec = {}, double scale = 1.0) {
    spec.validate();
    constexpr int kMaxPanels = 200;
    constexpr int kMaxCycles = 20000;
    constexpr int kSamples = 33;
    constexpr int kOscillationTrigger = 4;

    const double w0 = kOscillatoryOrigin * scale;
    double total = w0 * g(w0);
    double lo = w0;
    double hi = scale;
    auto sign_of = [](double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); };

    for (int panel = 0; panel < kMaxPanels; ++panel) {
        // Probe the panel for oscillation.
        int changes = 0;
        int last_sign = 0;
        double l1 = 0.0;
        for (int i = 0; i < kSamples; ++i) {
            const double x = lo + (hi - lo) * i / (kSamples - 1);
            const double v = g(x);
            l1 += std::abs(v);
            const int s = sign_of(v);
            if (s != 0 && last_sign != 0 && s != last_sign) ++changes;
            if (s != 0) last_sign = s;
        }
        l1 *= (hi - lo) / kSamples;

        if (changes < kOscillationTrigger) {
            const double piece = integrate(g, lo, hi, spec);
            total += piece;
            const double tol = std::max(spec.relative_tolerance * std::abs(total), spec.absolute_tolerance);
            if (std::abs(piece) <= tol && l1 <= tol) return total;
            lo = hi;
            hi *= 2.0;
            continue;
        }

        // Cycle mode: integrate between successive zeros of g.
        double half_period = (hi - lo) / changes;
        detail::WynnEpsilon accel;
        double x = lo;
        double fx = g(x);
        int converged_streak = 0;
        bool resume_geometric = false;
        for (int cycle = 0; cycle < kMaxCycles; ++cycle) {
            // Locate the next sign change beyond x.
            const double step = half_period / 8.0;
            double a = x;
            double fa = fx;
            double b = a;
            double fb = fa;
            bool found = false;
            double scan_l1 = 0.0;
            for (int k = 0; k < 512; ++k) {
                b = a + step;
                fb = g(b);
                scan_l1 += std::abs(fb) * step;
                if (sign_of(fa) != 0 && sign_of(fb) != 0 && sign_of(fa) != sign_of(fb)) {
                    found = true;
                    break;
                }
                if (sign_of(fa) == 0) fa = fb;
                a = b;
                if (sign_of(fb) != 0) fa = fb;
            }
            if (!found) {
                const double tol = std::max(spec.relative_tolerance * std::abs(total), spec.absolute_tolerance);
                total += integrate(g, x, b, spec);
                if (scan_l1 <= tol) return total;
                lo = b;
                hi = 2.0 * b;
                resume_geometric = true;
                break;
            }
            double zl = a;
            double zr = b;
            double fzl = fa;
            for (int it = 0; it < 200 && zr - zl > 1e-15 * std::abs(zr); ++it) {
                const double m = 0.5 * (zl + zr);
                const double fm = g(m);
                if (fm == 0.0) {
                    zl = zr = m;
                    break;
                }
                if (sign_of(fm) == sign_of(fzl)) {
                    zl = m;
                    fzl = fm;
                } else {
                    zr = m;
                }
            }
            const double zero = 0.5 * (zl + zr);
            const double term = integrate(g, x, zero, spec);
            total += term;
            half_period = std::max(zero - x, 1e-3 * half_period);
            x = zero;
            fx = fb;  // value just beyond the zero, sign of the next lobe

            const double estimate = accel.next(total);
            const double tol = std::max(spec.relative_tolerance * std::abs(estimate), spec.absolute_tolerance);
            if (std::abs(term) <= 0.1 * spec.absolute_tolerance) return total;
            converged_streak = (cycle > 2 && accel.last_delta() <= tol) ? converged_streak + 1 : 0;
            if (converged_streak >= 3) return estimate;
        }
        if (!resume_geometric) throw ConvergenceError("oscillatory tail did not converge", total, 0.0);
    }
    throw ConvergenceError("semi-infinite range did not reach a negligible tail", total, 0.0);
}

/// Bisection on a bracketing interval.
template <class F>
double find_root(F&& f, double lo, double hi, double tol) {
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) throw BracketError("find_root: no sign change in bracket", f_lo, f_hi);
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double f_mid = f(mid);
        if (f_mid == 0.0) return mid;
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Complementary error function.
inline double erfc(double x) { return std::erfc(x); }

/// Interference kernel Y(tau, alpha) = 2 tau/(alpha-2) 2F1(1, 1-2/alpha; 2-2/alpha; -tau),
/// with 2F1 from its Euler integral. For a=1, c-b=1 the Euler integrand is
/// t^{b-1}/(1+tau t); substituting t = s^{1/b} removes the endpoint singularity
/// and leaves b * 2F1 = b * int_0^1 ds / (1 + tau s^{1/b}) / b.
inline double gauss_2f1_coverage_kernel(double tau, double alpha, const QuadratureSpec& spec = {}) {
    if (!(alpha > 2.0)) throw std::domain_error("gauss_2f1_coverage_kernel: path-loss exponent must exceed 2");
    if (tau < 0.0) throw std::domain_error("gauss_2f1_coverage_kernel: tau must be >= 0");
    if (tau == 0.0) return 0.0;
    const double power = alpha / (alpha - 2.0);  // 1/b with b = 1 - 2/alpha
    QuadratureSpec tight = spec;
    tight.relative_tolerance = std::min(spec.relative_tolerance, 1e-12);
    tight.absolute_tolerance = std::min(spec.absolute_tolerance, 1e-14);
    const double hyp = integrate([&](double s) { return 1.0 / (1.0 + tau * std::pow(s, power)); }, 0.0, 1.0, tight);
    return 2.0 * tau / (alpha - 2.0) * hyp;
}

}  // namespace hybridnet::numerics
