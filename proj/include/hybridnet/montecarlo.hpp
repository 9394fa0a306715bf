#pragma once

// Monte-Carlo estimates of association, handoff and coverage for a user at
// the origin of two independent PPPs.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <thread>
#include <utility>
#include <vector>

#include "hybridnet/coverage.hpp"
#include "hybridnet/model.hpp"

namespace hybridnet {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(p0);
            const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        }
        return ctr;
    }
};

/// Independent stream addressed by (seed, trial, tag). Satisfies UniformRandomBitGenerator.
class RandomStream {
public:
    using result_type = std::uint32_t;

    RandomStream(std::uint64_t seed, std::uint64_t trial, std::uint32_t tag)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          ctr_{static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32), tag, 0u} {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        if (used_ == 4) {
            block_ = Philox4x32::generate(ctr_, key_);
            ++ctr_[3];
            used_ = 0;
        }
        return block_[used_++];
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        const std::uint64_t hi = (*this)();
        const std::uint64_t lo = (*this)();
        return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1), safe for logarithms.
    double uniform_open() { return uniform() + 0x1.0p-54; }

    double exponential() { return -std::log(uniform_open()); }

private:
    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    Philox4x32::Counter block_{};
    int used_ = 4;
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    double r = 0.0;  // distance from the origin
};

/// Homogeneous PPP on the disc of given radius, generated outward from the
/// origin (squared radii have exponential increments), so the output is
/// sorted by distance and a larger radius extends the same realization.
inline std::vector<Point2> sample_ppp(double intensity, double radius, RandomStream& rng) {
    if (!(intensity >= 0.0)) throw ValidationError("intensity", "must be >= 0");
    std::vector<Point2> pts;
    if (intensity == 0.0 || radius <= 0.0) return pts;
    const double r2_max = radius * radius;
    const double step = 1.0 / (std::numbers::pi * intensity);
    double r2 = 0.0;
    while (true) {
        r2 += rng.exponential() * step;
        if (r2 > r2_max) break;
        const double phi = 2.0 * std::numbers::pi * rng.uniform();
        const double r = std::sqrt(r2);
        pts.push_back({r * std::cos(phi), r * std::sin(phi), r});
    }
    return pts;
}

struct SimConfig {
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    double window_radius = 500.0;
    double guard_factor = 2.0;
    unsigned threads = 1;  // 0 selects the hardware concurrency

    void validate() const {
        if (trials < 1) throw ValidationError("trials", "must be >= 1");
        if (!(window_radius > 0.0)) throw ValidationError("window_radius", "must be > 0");
        if (!(guard_factor >= 1.0)) throw ValidationError("guard_factor", "must be >= 1");
    }
};

enum class Tier { rf, thz };

struct TrialOutcome {
    Tier associated_tier = Tier::rf;
    double serving_distance = 0.0;
    bool ho_occurred = false;
    double sinr = 0.0;
    bool covered = false;
    bool covered_with_mobility = false;
};

struct TrialOptions {
    bool handoff = false;
    std::optional<double> direction;  // fixed angle from the away-from-BS direction
    bool coverage = false;
    bool with_mobility = false;
    bool molecular_noise = true;
    bool interference_limited_rf = true;
    std::optional<BlockageModel> blockage;
    const MisalignmentModel* misalignment = nullptr;
    bool keep_outcomes = false;
};

struct Proportion {
    double value = 0.0;
    double standard_error = 0.0;
    std::uint64_t n = 0;
};

inline Proportion make_proportion(std::uint64_t hits, std::uint64_t n) {
    Proportion p;
    p.n = n;
    if (n == 0) return p;
    p.value = static_cast<double>(hits) / static_cast<double>(n);
    p.standard_error = std::sqrt(p.value * (1.0 - p.value) / static_cast<double>(n));
    return p;
}

struct SimSummary {
    std::uint64_t trials = 0;
    std::uint64_t redraws = 0;
    std::uint64_t n_thz = 0;
    std::uint64_t n_rf = 0;
    std::uint64_t ho_thz = 0;
    std::uint64_t ho_rf = 0;
    std::uint64_t covered_thz = 0;
    std::uint64_t covered_rf = 0;
    std::uint64_t covered_mobile = 0;
    std::vector<TrialOutcome> outcomes;

    Proportion a_t() const { return make_proportion(n_thz, trials); }
    Proportion p_ho_thz() const { return make_proportion(ho_thz, n_thz); }
    Proportion p_ho_rf() const { return make_proportion(ho_rf, n_rf); }
    Proportion p_ho() const { return make_proportion(ho_thz + ho_rf, trials); }
    Proportion c_t() const { return make_proportion(covered_thz, n_thz); }
    Proportion c_r() const { return make_proportion(covered_rf, n_rf); }
    Proportion coverage() const { return make_proportion(covered_thz + covered_rf, trials); }
    Proportion coverage_with_mobility() const { return make_proportion(covered_mobile, trials); }
};

namespace detail {

enum StreamTag : std::uint32_t { kThzSites = 0, kRfSites = 1, kMotion = 2, kAlignment = 3, kFading = 4, kLink = 5 };

inline std::uint32_t tag(StreamTag t, std::uint32_t attempt) { return static_cast<std::uint32_t>(t) | (attempt << 4); }

class TrialRunner {
public:
    TrialRunner(const Scenario& s, const SimConfig& cfg, const TrialOptions& opt)
        : s_(s), cfg_(cfg), opt_(opt), c_(derive(s)), ka_(s.ka()) {
        outer_ = cfg.window_radius * cfg.guard_factor;
        tau_t_ = rate_to_sinr_threshold(s.rate_threshold, s.thz.bandwidth);
        tau_r_ = rate_to_sinr_threshold(s.rate_threshold, s.rf.bandwidth);
        p_t_ = c_.gamma_t * s.thz.tx_power;
        p_r_ = c_.gamma_r * s.rf.tx_power;
    }

    std::uint32_t run(std::uint64_t trial, TrialOutcome& out) const {
        std::uint32_t attempt = 0;
        std::vector<Point2> thz;
        std::vector<Point2> rf;
        while (true) {
            RandomStream g_t(cfg_.seed, trial, tag(kThzSites, attempt));
            RandomStream g_r(cfg_.seed, trial, tag(kRfSites, attempt));
            thz = sample_ppp(s_.thz.intensity, outer_, g_t);
            rf = sample_ppp(s_.rf.intensity, outer_, g_r);
            if (!thz.empty() || !rf.empty()) break;
            ++attempt;
        }
        const double pow_t = thz.empty() ? 0.0 : thz_power(thz[0].r);
        const double pow_r = rf.empty() ? 0.0 : rf_power(rf[0].r);
        const bool on_thz = rf.empty() || (!thz.empty() && pow_t > pow_r);
        out = TrialOutcome{};
        out.associated_tier = on_thz ? Tier::thz : Tier::rf;
        const Point2& serving = on_thz ? thz[0] : rf[0];
        out.serving_distance = serving.r;

        RandomStream motion(cfg_.seed, trial, tag(kMotion, attempt));
        if (opt_.handoff || opt_.with_mobility) out.ho_occurred = handoff(thz, rf, on_thz, serving, motion);

        if (opt_.coverage || opt_.with_mobility) {
            if (on_thz) {
                out.sinr = thz_sinr(thz, trial, attempt);
            } else {
                out.sinr = rf_sinr(rf, trial, attempt);
            }
            bool covered = out.sinr > (on_thz ? tau_t_ : tau_r_);
            if (on_thz && opt_.blockage) {
                RandomStream link(cfg_.seed, trial, tag(kLink, attempt));
                link.uniform();  // first draw is reserved for the misalignment gain
                if (!(link.uniform() < opt_.blockage->p_los(serving.r))) covered = false;
            }
            out.covered = covered;
            const bool killed = out.ho_occurred && motion.uniform() < s_.mobility.ho_cost;
            out.covered_with_mobility = covered && !killed;
        }
        return attempt;
    }

private:
    double thz_power(double d) const { return p_t_ * std::exp(-ka_ * d) / (d * d); }
    double rf_power(double r) const { return p_r_ / std::pow(r, s_.rf.pathloss_exponent); }

    /// Nearest site to p excluding index `skip`; sites are sorted by |site|.
    static std::pair<double, bool> nearest_to(const std::vector<Point2>& sites, double px, double py, double pr,
                                              std::ptrdiff_t skip) {
        double best2 = std::numeric_limits<double>::infinity();
        bool found = false;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            const double lower = sites[i].r - pr;
            if (found && lower > 0.0 && lower * lower >= best2) break;
            if (static_cast<std::ptrdiff_t>(i) == skip) continue;
            const double dx = sites[i].x - px;
            const double dy = sites[i].y - py;
            const double d2 = dx * dx + dy * dy;
            if (d2 < best2) {
                best2 = d2;
                found = true;
            }
        }
        return {std::sqrt(best2), found};
    }

    bool handoff(const std::vector<Point2>& thz, const std::vector<Point2>& rf, bool on_thz, const Point2& serving,
                 RandomStream& motion) const {
        const double v = s_.mobility.speed;
        const double draw = motion.uniform();
        const double sign = motion.uniform() < 0.5 ? -1.0 : 1.0;
        if (v == 0.0) return false;
        const double theta = opt_.direction ? *opt_.direction : std::numbers::pi * draw;
        // unit vector pointing away from the serving BS, rotated by +-theta
        const double ux = -serving.x / serving.r;
        const double uy = -serving.y / serving.r;
        const double c = std::cos(sign * theta);
        const double sn = std::sin(sign * theta);
        const double px = v * (c * ux - sn * uy);
        const double py = v * (sn * ux + c * uy);
        const double sx = serving.x - px;
        const double sy = serving.y - py;
        const double d_serv = std::sqrt(sx * sx + sy * sy);
        const double held = s_.mobility.hysteresis * (on_thz ? thz_power(d_serv) : rf_power(d_serv));
        const auto [dt, ft] = nearest_to(thz, px, py, v, on_thz ? 0 : -1);
        const auto [dr, fr] = nearest_to(rf, px, py, v, on_thz ? -1 : 0);
        const double best_t = ft ? thz_power(dt) : 0.0;
        const double best_r = fr ? rf_power(dr) : 0.0;
        return std::max(best_t, best_r) > held;
    }

    double thz_sinr(const std::vector<Point2>& thz, std::uint64_t trial, std::uint32_t attempt) const {
        RandomStream align(cfg_.seed, trial, tag(kAlignment, attempt));
        RandomStream link(cfg_.seed, trial, tag(kLink, attempt));
        const double chi = opt_.misalignment ? opt_.misalignment->quantile(link.uniform()) : 1.0;
        const double r = thz[0].r;
        const double full = p_t_ / (r * r);
        const double attenuation = std::exp(-ka_ * r);
        const double signal = chi * full * attenuation;
        double denom = s_.thz.thermal_noise;
        if (opt_.molecular_noise) denom += chi * full * (1.0 - attenuation);
        for (std::size_t i = 1; i < thz.size(); ++i) {
            if (!(align.uniform() < c_.f)) continue;
            const double d = thz[i].r;
            // interference plus its absorption noise is the unattenuated power
            denom += opt_.molecular_noise ? p_t_ / (d * d) : thz_power(d);
        }
        return signal / denom;
    }

    double rf_sinr(const std::vector<Point2>& rf, std::uint64_t trial, std::uint32_t attempt) const {
        RandomStream fading(cfg_.seed, trial, tag(kFading, attempt));
        const double signal = fading.exponential() * rf_power(rf[0].r);
        double denom = opt_.interference_limited_rf ? 0.0 : s_.rf.thermal_noise;
        for (std::size_t i = 1; i < rf.size(); ++i) denom += fading.exponential() * rf_power(rf[i].r);
        if (denom == 0.0) return std::numeric_limits<double>::infinity();
        return signal / denom;
    }

    const Scenario& s_;
    const SimConfig& cfg_;
    const TrialOptions& opt_;
    DerivedConstants c_;
    double ka_;
    double outer_ = 0.0;
    double tau_t_ = 0.0;
    double tau_r_ = 0.0;
    double p_t_ = 0.0;
    double p_r_ = 0.0;
};

}  // namespace detail

/// Runs cfg.trials independent trials. Results depend only on (scenario,
/// cfg.seed, options), never on the thread count.
inline SimSummary simulate(const Scenario& s, const SimConfig& cfg, const TrialOptions& opt) {
    s.validate();
    cfg.validate();
    if (opt.blockage) opt.blockage->validate();
    if (opt.misalignment && !opt.misalignment->quantile)
        throw ValidationError("misalignment", "simulation needs a quantile function");
    const detail::TrialRunner runner(s, cfg, opt);

    unsigned workers = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, cfg.trials));

    struct Tally {
        std::uint64_t redraws = 0, n_thz = 0, n_rf = 0, ho_thz = 0, ho_rf = 0, cov_thz = 0, cov_rf = 0, cov_m = 0;
    };
    std::vector<Tally> tallies(workers);
    SimSummary out;
    out.trials = cfg.trials;
    if (opt.keep_outcomes) out.outcomes.resize(cfg.trials);

    auto work = [&](unsigned w) {
        Tally& t = tallies[w];
        TrialOutcome o;
        for (std::uint64_t i = w; i < cfg.trials; i += workers) {
            t.redraws += runner.run(i, o);
            if (o.associated_tier == Tier::thz) {
                ++t.n_thz;
                t.ho_thz += o.ho_occurred;
                t.cov_thz += o.covered;
            } else {
                ++t.n_rf;
                t.ho_rf += o.ho_occurred;
                t.cov_rf += o.covered;
            }
            t.cov_m += o.covered_with_mobility;
            if (opt.keep_outcomes) out.outcomes[i] = o;
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    for (const auto& t : tallies) {
        out.redraws += t.redraws;
        out.n_thz += t.n_thz;
        out.n_rf += t.n_rf;
        out.ho_thz += t.ho_thz;
        out.ho_rf += t.ho_rf;
        out.covered_thz += t.cov_thz;
        out.covered_rf += t.cov_rf;
        out.covered_mobile += t.cov_m;
    }
    return out;
}

inline SimSummary simulate_association(const Scenario& s, const SimConfig& cfg) { return simulate(s, cfg, {}); }

inline SimSummary simulate_handoff(const Scenario& s, const SimConfig& cfg, std::optional<double> direction = {}) {
    TrialOptions opt;
    opt.handoff = true;
    opt.direction = direction;
    return simulate(s, cfg, opt);
}

struct CoverageExtensions {
    std::optional<BlockageModel> blockage;
    const MisalignmentModel* misalignment = nullptr;
    bool molecular_noise = true;
    bool interference_limited_rf = true;
};

inline SimSummary simulate_coverage(const Scenario& s, const SimConfig& cfg, bool with_mobility,
                                    const CoverageExtensions& ext = {}) {
    TrialOptions opt;
    opt.coverage = true;
    opt.with_mobility = with_mobility;
    opt.handoff = with_mobility;
    opt.blockage = ext.blockage;
    opt.misalignment = ext.misalignment;
    opt.molecular_noise = ext.molecular_noise;
    opt.interference_limited_rf = ext.interference_limited_rf;
    return simulate(s, cfg, opt);
}

/// Per-trial dump: trial,tier,serving_distance_m,ho,sinr_db,covered
inline void write_trial_csv(std::ostream& os, const std::vector<TrialOutcome>& outcomes) {
    os << "trial,tier,serving_distance_m,ho,sinr_db,covered\n";
    char buf[160];
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        const double db = o.sinr > 0.0 ? 10.0 * std::log10(o.sinr) : -std::numeric_limits<double>::infinity();
        std::snprintf(buf, sizeof buf, "%zu,%s,%.9g,%d,%.9g,%d\n", i, o.associated_tier == Tier::thz ? "thz" : "rf",
                      o.serving_distance, o.ho_occurred ? 1 : 0, db, o.covered ? 1 : 0);
        os << buf;
    }
}

}  // namespace hybridnet
