#pragma once

// Batch commands behind the command-line tool: absorption tables, single
// scenario evaluation, parameter sweeps and the figure presets. Each command
// returns a ResultTable plus the number of analytic/Monte-Carlo pairs that
// disagree by more than max(3 SE, 0.02).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hybridnet/coverage.hpp"
#include "hybridnet/handoff.hpp"
#include "hybridnet/montecarlo.hpp"
#include "hybridnet/result_table.hpp"
#include "hybridnet/scenario_io.hpp"

namespace hybridnet::cli {

enum class Metric { a_t, mu, p_h, p_ht, p_hr, c_t, c_r, c, c_m };

inline constexpr std::array<Metric, 9> kAllMetrics = {Metric::a_t, Metric::mu,  Metric::p_h, Metric::p_ht, Metric::p_hr,
                                                      Metric::c_t, Metric::c_r, Metric::c,   Metric::c_m};

inline const char* metric_name(Metric m) {
    switch (m) {
        case Metric::a_t: return "A_T";
        case Metric::mu: return "mu";
        case Metric::p_h: return "P_H";
        case Metric::p_ht: return "P_HT";
        case Metric::p_hr: return "P_HR";
        case Metric::c_t: return "C_T";
        case Metric::c_r: return "C_R";
        case Metric::c: return "C";
        case Metric::c_m: return "C_M";
    }
    return "?";
}

inline Metric parse_metric(const std::string& name) {
    for (Metric m : kAllMetrics)
        if (name == metric_name(m)) return m;
    throw ValidationError("metrics", "unknown metric '" + name + "'");
}

enum class SweepVariable { velocity, ka, lambda_t, lambda_r, rate_threshold, blocker_intensity };

inline const char* variable_name(SweepVariable v) {
    switch (v) {
        case SweepVariable::velocity: return "velocity";
        case SweepVariable::ka: return "ka";
        case SweepVariable::lambda_t: return "lambda_T";
        case SweepVariable::lambda_r: return "lambda_R";
        case SweepVariable::rate_threshold: return "rate_threshold";
        case SweepVariable::blocker_intensity: return "blocker_intensity";
    }
    return "?";
}

inline SweepVariable parse_variable(const std::string& name) {
    for (auto v : {SweepVariable::velocity, SweepVariable::ka, SweepVariable::lambda_t, SweepVariable::lambda_r,
                   SweepVariable::rate_threshold, SweepVariable::blocker_intensity})
        if (name == variable_name(v)) return v;
    throw ValidationError("variable", "unknown sweep variable '" + name + "'");
}

struct SweepSpec {
    SweepVariable variable = SweepVariable::velocity;
    std::vector<double> values;
    std::vector<Metric> metrics{kAllMetrics.begin(), kAllMetrics.end()};

    void validate() const {
        if (values.empty()) throw ValidationError("values", "must be nonempty");
        for (std::size_t i = 1; i < values.size(); ++i)
            if (!(values[i] > values[i - 1])) throw ValidationError("values", "must be strictly increasing");
        if (metrics.empty()) throw ValidationError("metrics", "must be nonempty");
    }
};

struct RunOptions {
    std::uint64_t seed = 1;
    std::uint64_t trials = 100000;  // 0 skips the Monte-Carlo rows
    unsigned threads = 1;
    bool montecarlo = false;
};

struct CommandResult {
    ResultTable table;
    int mismatches = 0;
};

/// Metric values at one operating point; `se` is set for Monte-Carlo estimates.
struct PointValues {
    std::array<std::optional<double>, 9> value;
    std::array<std::optional<double>, 9> se;

    std::optional<double>& operator[](Metric m) { return value[static_cast<std::size_t>(m)]; }
    const std::optional<double>& operator[](Metric m) const { return value[static_cast<std::size_t>(m)]; }
};

namespace detail {

inline bool wants(const std::vector<Metric>& ms, std::initializer_list<Metric> any) {
    for (Metric m : ms)
        for (Metric a : any)
            if (m == a) return true;
    return false;
}

}  // namespace detail

inline void apply_variable(ScenarioFile& f, SweepVariable v, double x) {
    switch (v) {
        case SweepVariable::velocity: f.scenario.mobility.speed = x; break;
        case SweepVariable::ka: f.scenario.thz.absorption = x; break;
        case SweepVariable::lambda_t: f.scenario.thz.intensity = x; break;
        case SweepVariable::lambda_r: f.scenario.rf.intensity = x; break;
        case SweepVariable::rate_threshold: f.scenario.rate_threshold = x; break;
        case SweepVariable::blocker_intensity:
            if (!f.blockage)
                throw ValidationError("blockage", "a blocker_intensity sweep needs blockage.mean_length and mean_width");
            f.blockage->blocker_intensity = x;
            break;
    }
    f.scenario.validate();
    if (f.blockage) f.blockage->validate();
}

inline PointValues evaluate_analytic(const ScenarioFile& f, const std::vector<Metric>& metrics) {
    using detail::wants;
    const NetworkAnalysis na(f.scenario);
    const auto& cfg = f.coverage;
    PointValues p;
    p[Metric::a_t] = na.a_t();
    p[Metric::mu] = na.mu();
    HandoffResult ho;
    if (wants(metrics, {Metric::p_h, Metric::p_ht, Metric::p_hr, Metric::c_m})) {
        ho = overall_ho_probability(na, cfg.rf_equivalence);
        p[Metric::p_h] = ho.p_overall;
        p[Metric::p_ht] = ho.p_ho_from_thz;
        p[Metric::p_hr] = ho.p_ho_from_rf;
    }
    if (wants(metrics, {Metric::c_t, Metric::c_r, Metric::c, Metric::c_m})) {
        const CoverageResult c = f.blockage ? coverage_total_with_blockage(na, cfg, *f.blockage) : coverage_total(na, cfg);
        p[Metric::c_t] = c.c_t;
        p[Metric::c_r] = c.c_r;
        p[Metric::c] = c.c;
        p[Metric::c_m] = coverage_with_mobility(c.c, f.scenario.mobility.ho_cost, ho.p_overall);
    }
    return p;
}

inline PointValues evaluate_montecarlo(const ScenarioFile& f, const std::vector<Metric>& metrics,
                                       const RunOptions& run) {
    using detail::wants;
    SimConfig sc;
    sc.trials = run.trials;
    sc.seed = run.seed;
    sc.threads = run.threads;
    sc.window_radius = f.scenario.region_radius;
    TrialOptions opt;
    opt.handoff = wants(metrics, {Metric::p_h, Metric::p_ht, Metric::p_hr, Metric::c_m});
    opt.coverage = wants(metrics, {Metric::c_t, Metric::c_r, Metric::c, Metric::c_m});
    opt.with_mobility = wants(metrics, {Metric::c_m});
    opt.molecular_noise = f.coverage.molecular_noise;
    opt.interference_limited_rf = f.coverage.interference_limited_rf;
    opt.blockage = f.blockage;
    const SimSummary sum = simulate(f.scenario, sc, opt);

    PointValues p;
    auto put = [&](Metric m, const Proportion& q) {
        p.value[static_cast<std::size_t>(m)] = q.value;
        p.se[static_cast<std::size_t>(m)] = q.standard_error;
    };
    put(Metric::a_t, sum.a_t());
    if (opt.handoff) {
        put(Metric::p_h, sum.p_ho());
        put(Metric::p_ht, sum.p_ho_thz());
        put(Metric::p_hr, sum.p_ho_rf());
    }
    if (opt.coverage) {
        put(Metric::c_t, sum.c_t());
        put(Metric::c_r, sum.c_r());
        put(Metric::c, sum.coverage());
    }
    if (opt.with_mobility) put(Metric::c_m, sum.coverage_with_mobility());
    return p;
}

/// Analytic/Monte-Carlo pairs with |delta| > max(3 SE, 0.02).
inline int count_mismatches(const PointValues& analytic, const PointValues& mc, const std::vector<Metric>& metrics) {
    int bad = 0;
    for (Metric m : metrics) {
        const auto i = static_cast<std::size_t>(m);
        if (!analytic.value[i] || !mc.value[i] || !mc.se[i]) continue;
        if (std::abs(*analytic.value[i] - *mc.value[i]) > std::max(3.0 * *mc.se[i], 0.02)) ++bad;
    }
    return bad;
}

namespace detail {

/// Fixed descriptive columns (figure presets), the sweep column, the method,
/// the metrics, then 95 % interval columns when Monte-Carlo rows are present.
class TableBuilder {
public:
    TableBuilder(std::vector<std::string> tag_columns, std::optional<std::string> variable,
                 std::vector<Metric> metrics, bool with_ci)
        : tags_(std::move(tag_columns)), variable_(std::move(variable)), metrics_(std::move(metrics)),
          with_ci_(with_ci), table_(columns()) {}

    ResultTable& table() { return table_; }

    void add(const std::vector<ResultTable::Cell>& tag_values, std::optional<double> x, const char* method,
             const PointValues& p) {
        std::vector<ResultTable::Cell> row(tag_values);
        if (variable_) row.emplace_back(*x);
        row.emplace_back(std::string(method));
        for (Metric m : metrics_) {
            const auto& v = p[m];
            row.push_back(v ? ResultTable::Cell(*v) : ResultTable::Cell());
        }
        if (with_ci_) {
            for (Metric m : metrics_) {
                const auto i = static_cast<std::size_t>(m);
                if (p.value[i] && p.se[i]) {
                    row.emplace_back(std::max(0.0, *p.value[i] - 1.96 * *p.se[i]));
                    row.emplace_back(std::min(1.0, *p.value[i] + 1.96 * *p.se[i]));
                } else {
                    row.emplace_back();
                    row.emplace_back();
                }
            }
        }
        table_.add_row(std::move(row));
    }

private:
    std::vector<std::string> columns() const {
        std::vector<std::string> c(tags_);
        if (variable_) c.push_back(*variable_);
        c.push_back("method");
        for (Metric m : metrics_) c.push_back(metric_name(m));
        if (with_ci_) {
            for (Metric m : metrics_) {
                c.push_back(std::string(metric_name(m)) + "_ci_lo");
                c.push_back(std::string(metric_name(m)) + "_ci_hi");
            }
        }
        return c;
    }

    std::vector<std::string> tags_;
    std::optional<std::string> variable_;
    std::vector<Metric> metrics_;
    bool with_ci_;
    ResultTable table_;
};

inline std::string describe_run(const RunOptions& run) {
    if (!run.montecarlo) return "montecarlo: off";
    return "montecarlo: trials=" + std::to_string(run.trials) + " seed=" + std::to_string(run.seed);
}

inline void describe_config(ResultTable& t, const ScenarioFile& f) {
    const auto& c = f.coverage;
    t.add_note(std::string("coverage: lt_series_terms=") + std::to_string(c.lt_series_terms) +
               (c.integer_index ? " index=integer" : " index=offset eps=" + ResultTable::format_number(c.lt_epsilon)) +
               (c.molecular_noise ? " molecular_noise=on" : " molecular_noise=off") +
               (c.rf_equivalence == RfEquivalence::exact ? " rf_equivalence=exact" : " rf_equivalence=surrogate"));
}

}  // namespace detail

/// K_a on a log-spaced grid [f_lo, f_hi] for the lines in `catalog_path`.
inline CommandResult cmd_absorption(const std::string& catalog_path, double f_lo, double f_hi, int n_points,
                                    const AmbientConditions& cond = {}) {
    if (!(f_lo > 0.0)) throw ValidationError("f_lo", "must be > 0");
    if (!(f_hi >= f_lo)) throw ValidationError("f_hi", "must be >= f_lo");
    if (n_points < 1) throw ValidationError("n_points", "must be >= 1");
    cond.validate();
    AbsorptionMedium medium{load_line_catalog(catalog_path), cond};
    medium.validate();
    CommandResult r{ResultTable({"f_hz", "ka_per_m"})};
    r.table.add_note("catalog: " + catalog_path + " (" + std::to_string(medium.lines.size()) + " lines)");
    r.table.add_note("ambient: p=" + ResultTable::format_number(cond.pressure) +
                     " atm T=" + ResultTable::format_number(cond.temperature) + " K");
    for (int i = 0; i < n_points; ++i) {
        const double f = n_points == 1 ? f_lo : f_lo * std::pow(f_hi / f_lo, static_cast<double>(i) / (n_points - 1));
        r.table.add_row({f, molecular_absorption_coefficient(medium, f)});
    }
    return r;
}

inline CommandResult cmd_evaluate(const ScenarioFile& f, const RunOptions& run) {
    const std::vector<Metric> metrics(kAllMetrics.begin(), kAllMetrics.end());
    detail::TableBuilder b({}, std::nullopt, metrics, run.montecarlo);
    b.table().add_note(detail::describe_run(run));
    detail::describe_config(b.table(), f);
    const PointValues a = evaluate_analytic(f, metrics);
    b.add({}, std::nullopt, "analytic", a);
    int bad = 0;
    if (run.montecarlo) {
        const PointValues m = evaluate_montecarlo(f, metrics, run);
        b.add({}, std::nullopt, "montecarlo", m);
        bad = count_mismatches(a, m, metrics);
    }
    return {b.table(), bad};
}

inline CommandResult cmd_sweep(const ScenarioFile& base, const SweepSpec& spec, const RunOptions& run) {
    spec.validate();
    detail::TableBuilder b({}, std::string(variable_name(spec.variable)), spec.metrics, run.montecarlo);
    b.table().add_note(detail::describe_run(run));
    detail::describe_config(b.table(), base);
    int bad = 0;
    for (double x : spec.values) {
        ScenarioFile f = base;
        apply_variable(f, spec.variable, x);
        const PointValues a = evaluate_analytic(f, spec.metrics);
        b.add({}, x, "analytic", a);
        if (run.montecarlo) {
            const PointValues m = evaluate_montecarlo(f, spec.metrics, run);
            b.add({}, x, "montecarlo", m);
            bad += count_mismatches(a, m, spec.metrics);
        }
    }
    return {b.table(), bad};
}

/// One curve of a figure preset: descriptive tag values and the scenario.
struct FigureSeries {
    std::vector<ResultTable::Cell> tags;
    ScenarioFile scenario;
};

struct FigurePreset {
    std::string id;
    std::vector<std::string> notes;
    std::vector<std::string> tag_columns;
    SweepSpec sweep;
    std::vector<FigureSeries> series;
};

inline const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {"fig3a", "fig3b", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
    return ids;
}

/// Blocker geometry used by the blockage preset.
inline BlockageModel preset_blockage(double intensity) { return {intensity, 5.0, 2.0}; }

inline FigurePreset figure_preset(const std::string& id) {
    auto base = [](double ka) {
        ScenarioFile f;
        f.scenario = default_scenario(ka);
        return f;
    };
    const std::vector<double> velocities = {10.0, 20.0, 30.0, 40.0, 50.0, 56.0};
    const std::string defaults = "defaults: lambda_R=1e-5 lambda_T=1e-4 P_T=0.2 W P_R=2 W f_T=3 THz f_R=2 GHz "
                                 "G_T=25 dB beamwidth=10 deg alpha=4 eta=0.5 hysteresis=1";
    FigurePreset p;
    p.id = id;
    p.notes.push_back("figure: " + id);
    p.notes.push_back(defaults);
    using M = Metric;
    if (id == "fig3a") {
        p.notes.push_back("handoff from THz vs velocity for three density pairs, ka=0.01");
        p.tag_columns = {"lambda_R", "lambda_T"};
        p.sweep = {SweepVariable::velocity, velocities, {M::a_t, M::p_ht}};
        for (auto [lr, lt] : {std::pair{1e-5, 1e-4}, std::pair{1e-5, 5e-4}, std::pair{1e-3, 5e-4}}) {
            auto f = base(0.01);
            f.scenario.rf.intensity = lr;
            f.scenario.thz.intensity = lt;
            p.series.push_back({{lr, lt}, f});
        }
    } else if (id == "fig3b" || id == "fig4") {
        const double k_hi = id == "fig3b" ? 0.05 : 0.2;
        p.notes.push_back(id == "fig3b" ? "conditional handoff vs velocity, ka in {0.01, 0.05}"
                                        : "overall handoff vs velocity, ka in {0.01, 0.2}");
        p.tag_columns = {"ka"};
        p.sweep = {SweepVariable::velocity, velocities, {M::a_t, M::mu, M::p_ht, M::p_hr, M::p_h}};
        for (double k : {0.01, k_hi}) p.series.push_back({{k}, base(k)});
    } else if (id == "fig5") {
        p.notes.push_back("static coverage vs rate threshold, molecular noise on/off, ka in {0.01, 0.05}");
        p.tag_columns = {"ka", "molecular_noise"};
        p.sweep = {SweepVariable::rate_threshold, {0.1e9, 0.25e9, 0.5e9, 1e9, 2e9, 5e9}, {M::a_t, M::c_t, M::c_r, M::c}};
        for (double k : {0.01, 0.05})
            for (bool noise : {true, false}) {
                auto f = base(k);
                f.coverage.molecular_noise = noise;
                p.series.push_back({{k, std::string(noise ? "on" : "off")}, f});
            }
    } else if (id == "fig6") {
        p.notes.push_back("static coverage vs THz density, molecular noise on/off, ka in {0.01, 0.05}, R_th=1 Gbps");
        p.tag_columns = {"ka", "molecular_noise"};
        p.sweep = {SweepVariable::lambda_t, {5e-5, 1e-4, 2e-4, 5e-4, 1e-3}, {M::a_t, M::c_t, M::c_r, M::c}};
        for (double k : {0.01, 0.05})
            for (bool noise : {true, false}) {
                auto f = base(k);
                f.coverage.molecular_noise = noise;
                p.series.push_back({{k, std::string(noise ? "on" : "off")}, f});
            }
    } else if (id == "fig7") {
        p.notes.push_back("mobility-aware coverage vs velocity, ka=0.05, molecular noise on/off, R_th=0.25 Gbps");
        p.tag_columns = {"molecular_noise"};
        p.sweep = {SweepVariable::velocity, {0.0, 10.0, 20.0, 30.0, 40.0, 50.0, 56.0}, {M::mu, M::p_h, M::c, M::c_m}};
        for (bool noise : {true, false}) {
            auto f = base(0.05);
            f.scenario.rate_threshold = 0.25e9;
            f.coverage.molecular_noise = noise;
            p.series.push_back({{std::string(noise ? "on" : "off")}, f});
        }
    } else if (id == "fig8") {
        p.notes.push_back("mobility-aware coverage vs ka at v=56, R_th=0.25 Gbps, four THz densities");
        p.tag_columns = {"lambda_T"};
        p.sweep = {SweepVariable::ka,
                   {0.01, 0.02, 0.03, 0.05, 0.07, 0.1, 0.15, 0.2, 0.25, 0.3},
                   {M::a_t, M::p_h, M::c, M::c_m}};
        for (double lt : {5e-5, 1e-4, 5e-4, 1e-3}) {
            auto f = base(0.01);
            f.scenario.thz.intensity = lt;
            f.scenario.mobility.speed = 56.0;
            f.scenario.rate_threshold = 0.25e9;
            p.series.push_back({{lt}, f});
        }
    } else if (id == "fig9") {
        p.notes.push_back("mobility-aware coverage vs blocker density, blockers 5 m x 2 m, v=30, ka=0.01, "
                          "R_th=0.25 Gbps");
        p.tag_columns = {"ka"};
        p.sweep = {SweepVariable::blocker_intensity, {0.0, 0.005, 0.01, 0.02, 0.05}, {M::c_t, M::c, M::c_m}};
        auto f = base(0.01);
        f.scenario.mobility.speed = 30.0;
        f.scenario.rate_threshold = 0.25e9;
        f.blockage = preset_blockage(0.0);
        p.series.push_back({{0.01}, f});
    } else {
        throw ValidationError("figure", "unknown figure id '" + id + "'");
    }
    return p;
}

inline CommandResult cmd_reproduce(const std::string& figure_id, const RunOptions& run) {
    const FigurePreset p = figure_preset(figure_id);
    detail::TableBuilder b(p.tag_columns, std::string(variable_name(p.sweep.variable)), p.sweep.metrics,
                           run.montecarlo);
    for (const auto& n : p.notes) b.table().add_note(n);
    b.table().add_note(detail::describe_run(run));
    detail::describe_config(b.table(), p.series.front().scenario);
    int bad = 0;
    for (const auto& s : p.series) {
        for (double x : p.sweep.values) {
            ScenarioFile f = s.scenario;
            apply_variable(f, p.sweep.variable, x);
            const PointValues a = evaluate_analytic(f, p.sweep.metrics);
            b.add(s.tags, x, "analytic", a);
            if (run.montecarlo) {
                const PointValues m = evaluate_montecarlo(f, p.sweep.metrics, run);
                b.add(s.tags, x, "montecarlo", m);
                bad += count_mismatches(a, m, p.sweep.metrics);
            }
        }
    }
    return {b.table(), bad};
}

}  // namespace hybridnet::cli
