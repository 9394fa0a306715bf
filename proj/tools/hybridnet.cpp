// Command-line front-end: absorption tables, scenario evaluation, sweeps and
// figure presets. Exit codes: 0 ok, 2 invalid input, 3 numerical
// non-convergence, 4 analytic/Monte-Carlo mismatch under --strict.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hybridnet/commands.hpp"

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitMismatch = 4;

struct GlobalFlags {
    std::uint64_t seed = 1;
    std::uint64_t trials = 100000;
    unsigned threads = 1;
    bool strict = false;
    bool json = false;
    std::string out;
};

std::vector<double> parse_list(const std::string& text, const std::string& field) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(cell, &used));
            if (hybridnet::io_detail::trim(cell.substr(used)).size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw hybridnet::ValidationError(field, "not a number: '" + cell + "'");
        }
    }
    return v;
}

/// "lo:hi:n" -> n evenly spaced values.
std::vector<double> parse_range(const std::string& text) {
    std::stringstream ss(text);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
        throw hybridnet::ValidationError("range", "expected lo:hi:n");
    const double lo = parse_list(a, "range").at(0);
    const double hi = parse_list(b, "range").at(0);
    const double n = parse_list(c, "range").at(0);
    if (!(n >= 1.0) || n != static_cast<int>(n)) throw hybridnet::ValidationError("range", "n must be a positive integer");
    std::vector<double> v;
    const int count = static_cast<int>(n);
    for (int i = 0; i < count; ++i) v.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
    return v;
}

void emit(const hybridnet::ResultTable& t, const GlobalFlags& g) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!g.out.empty()) {
        file.open(g.out, std::ios::binary);
        if (!file) throw hybridnet::ValidationError("out", "cannot open '" + g.out + "' for writing");
        os = &file;
    }
    if (g.json) t.write_json(*os);
    else t.write_csv(*os);
}

hybridnet::cli::RunOptions run_options(const GlobalFlags& g, bool montecarlo) {
    hybridnet::cli::RunOptions r;
    r.seed = g.seed;
    r.trials = g.trials;
    r.threads = g.threads;
    r.montecarlo = montecarlo && g.trials > 0;
    return r;
}

int finish(const hybridnet::cli::CommandResult& r, const GlobalFlags& g) {
    emit(r.table, g);
    if (r.mismatches > 0) {
        std::cerr << "hybridnet: " << r.mismatches << " analytic/Monte-Carlo pair(s) differ by more than "
                  << "max(3 SE, 0.02)\n";
        if (g.strict) return kExitMismatch;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid RF/THz network handoff and coverage calculator"};
    app.require_subcommand(1);
    GlobalFlags g;
    app.add_option("--seed", g.seed, "Monte-Carlo seed")->capture_default_str();
    app.add_option("--trials", g.trials, "Monte-Carlo trials per point (0 disables simulation)")->capture_default_str();
    app.add_option("--threads", g.threads, "Monte-Carlo worker threads (0 = all cores)")->capture_default_str();
    app.add_flag("--strict", g.strict, "exit 4 when an analytic value falls outside max(3 SE, 0.02) of simulation");
    app.add_flag("--json", g.json, "write JSON instead of CSV");
    app.add_option("--out", g.out, "output file (default stdout)");

    auto* absorption = app.add_subcommand("absorption", "molecular absorption coefficient over a frequency grid");
    std::string catalog;
    double f_lo = 0.1e12, f_hi = 10e12;
    int n_points = 100;
    hybridnet::AmbientConditions ambient;
    absorption->add_option("catalog", catalog, "line catalog CSV")->required();
    absorption->add_option("--f-lo", f_lo, "lowest frequency, Hz")->capture_default_str();
    absorption->add_option("--f-hi", f_hi, "highest frequency, Hz")->capture_default_str();
    absorption->add_option("--points", n_points, "number of log-spaced frequencies")->capture_default_str();
    absorption->add_option("--pressure", ambient.pressure, "pressure, atm")->capture_default_str();
    absorption->add_option("--temperature", ambient.temperature, "temperature, K")->capture_default_str();

    auto* evaluate = app.add_subcommand("evaluate", "all metrics for one scenario");
    std::string scenario_path;
    std::vector<std::string> validate_args;
    evaluate->add_option("scenario", scenario_path, "scenario file")->required();
    evaluate->add_option("--validate", validate_args, "append a Monte-Carlo row; optional trials=N seed=S")
        ->expected(0, 2)
        ->allow_extra_args(false);

    auto* sweep = app.add_subcommand("sweep", "metrics over one scenario variable");
    std::string sweep_path, variable, values, range, metrics;
    bool sweep_mc = false;
    sweep->add_option("scenario", sweep_path, "scenario file")->required();
    sweep->add_option("--var", variable,
                      "velocity | ka | lambda_T | lambda_R | rate_threshold | blocker_intensity")
        ->required();
    auto* values_opt = sweep->add_option("--values", values, "comma-separated values");
    auto* range_opt = sweep->add_option("--range", range, "lo:hi:n evenly spaced values");
    values_opt->excludes(range_opt);
    sweep->add_option("--metrics", metrics, "comma-separated subset of A_T,mu,P_H,P_HT,P_HR,C_T,C_R,C,C_M");
    sweep->add_flag("--validate", sweep_mc, "add Monte-Carlo rows");

    auto* reproduce = app.add_subcommand("reproduce", "figure presets with analytic and Monte-Carlo rows");
    std::string figure;
    reproduce->add_option("figure", figure, "fig3a | fig3b | fig4 | fig5 | fig6 | fig7 | fig8 | fig9")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    using namespace hybridnet;
    try {
        if (*absorption) {
            return finish(cli::cmd_absorption(catalog, f_lo, f_hi, n_points, ambient), g);
        }
        if (*evaluate) {
            const bool mc = evaluate->count("--validate") > 0;
            for (const auto& a : validate_args) {
                if (a.empty()) continue;  // bare --validate
                const auto eq = a.find('=');
                const std::string key = a.substr(0, eq);
                if (eq == std::string::npos || (key != "trials" && key != "seed"))
                    throw ValidationError("validate", "expected trials=N or seed=S, got '" + a + "'");
                const auto v = parse_list(a.substr(eq + 1), key).at(0);
                if (!(v >= 0.0) || v != static_cast<double>(static_cast<std::uint64_t>(v)))
                    throw ValidationError(key, "must be a nonnegative integer");
                (key == "trials" ? g.trials : g.seed) = static_cast<std::uint64_t>(v);
            }
            return finish(cli::cmd_evaluate(load_scenario(scenario_path), run_options(g, mc)), g);
        }
        if (*sweep) {
            cli::SweepSpec spec;
            spec.variable = cli::parse_variable(variable);
            if (!values.empty()) spec.values = parse_list(values, "values");
            else if (!range.empty()) spec.values = parse_range(range);
            else throw ValidationError("values", "give --values or --range");
            if (!metrics.empty()) {
                spec.metrics.clear();
                std::stringstream ss(metrics);
                std::string m;
                while (std::getline(ss, m, ',')) spec.metrics.push_back(cli::parse_metric(io_detail::trim(m)));
            }
            return finish(cli::cmd_sweep(load_scenario(sweep_path), spec, run_options(g, sweep_mc)), g);
        }
        if (*reproduce) {
            return finish(cli::cmd_reproduce(figure, run_options(g, true)), g);
        }
    } catch (const ValidationError& e) {
        std::cerr << "hybridnet: invalid input: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const ParseError& e) {
        std::cerr << "hybridnet: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const ConvergenceError& e) {
        std::cerr << "hybridnet: numerical failure: " << e.what() << '\n';
        return kExitNoConvergence;
    } catch (const BracketError& e) {
        std::cerr << "hybridnet: numerical failure: " << e.what() << '\n';
        return kExitNoConvergence;
    } catch (const std::domain_error& e) {
        std::cerr << "hybridnet: invalid input: " << e.what() << '\n';
        return kExitInvalid;
    }
    return 0;
}
