// Command-line harness: parameter sweeps, scaling fits, plots, the invariant
// suite and topology dumps.
//
// Exit codes: 0 success, 1 parameter error, 2 I/O error, 3 failed validation.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "icncap/plot.hpp"
#include "icncap/report.hpp"
#include "icncap/settings.hpp"
#include "icncap/sweep.hpp"
#include "icncap/topology.hpp"
#include "icncap/validation.hpp"

namespace {

constexpr int kParameterError = 1;
constexpr int kIoError = 2;
constexpr int kValidationFailed = 3;

// Flag values that override the config file; empty means "not given".
struct Overrides {
    std::map<std::string, std::string> values;
    std::string config_path;

    void add(CLI::App* app, const std::string& key, const std::string& flag, const std::string& help) {
        app->add_option(flag, values[key], help);
    }

    icncap::Settings merged() const {
        icncap::Settings s;
        if (!config_path.empty()) s = icncap::read_settings_file(config_path);
        for (const auto& [k, v] : values) {
            if (!v.empty()) s[k] = v;
        }
        return s;
    }
};

void add_scenario_flags(CLI::App* app, Overrides& o) {
    o.add(app, "scenario", "--scenario", "I | II | III, comma list for sweeps");
    o.add(app, "n", "--n", "node count");
    o.add(app, "lambda", "--lambda", "request rate");
    o.add(app, "mu", "--mu", "cache drop rate");
    o.add(app, "ratio", "--ratio", "lambda/mu (sets lambda = ratio * mu)");
    o.add(app, "w", "--w", "per-node channel rate W");
    o.add(app, "b", "--b", "content size B");
    o.add(app, "trials", "--trials", "discovery trials per point");
    o.add(app, "epochs", "--epochs", "request epochs per point");
    o.add(app, "seed", "--seed", "RNG seed");
    o.add(app, "mode", "--mode", "idealized | empirical");
    o.add(app, "cell_scale", "--cell-scale", "cell side over sqrt(log n / n)");
    o.add(app, "out", "--out", "output path ('-' = stdout)");
    app->add_option("--config", o.config_path, "key=value config file; flags override it");
}

// Opens `path` for writing, or returns stdout for "-" / empty.
std::ostream& open_output(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
    if (path.empty() || path == "-") return std::cout;
    holder = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*holder) throw icncap::IoError("cannot write '" + path + "'");
    return *holder;
}

std::string config_help() {
    std::string text = "\nConfig keys (key=value, '#' comments):\n";
    for (const auto& [key, help] : icncap::settings_help()) text += "  " + key + ": " + help + "\n";
    return text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cache-network capacity laboratory"};
    app.require_subcommand(1);
    app.footer(config_help());

    Overrides sweep_o;
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep and write a CSV table");
    add_scenario_flags(sweep, sweep_o);
    sweep_o.add(sweep, "axis", "--axis", "n | ratio | rho");
    sweep_o.add(sweep, "points", "--points", "comma list of axis values");
    sweep_o.add(sweep, "workers", "--workers", "worker threads (0 = all cores)");

    std::string fit_in, fit_out = "-";
    auto* fit = app.add_subcommand("fit", "fit scaling exponents from a sweep CSV");
    fit->add_option("csv", fit_in, "sweep CSV")->required();
    fit->add_option("--out", fit_out, "summary path ('-' = stdout)");

    std::string plot_in, plot_out = "-", plot_kind = "gamma-vs-n";
    auto* plot = app.add_subcommand("plot", "render a sweep CSV as SVG");
    plot->add_option("csv", plot_in, "sweep CSV")->required();
    plot->add_option("--kind", plot_kind, "gamma-vs-n | gamma-vs-ratio | traffic-vs-ratio");
    plot->add_option("--out", plot_out, "SVG path ('-' = stdout)");

    std::uint64_t validate_seed = 1;
    unsigned validate_workers = 1;
    auto* validate = app.add_subcommand("validate", "run the invariant suite");
    validate->add_option("--seed", validate_seed, "RNG seed");
    validate->add_option("--workers", validate_workers, "worker threads");

    Overrides dump_o;
    auto* dump = app.add_subcommand("dump-topology", "list nodes, coordinates and cells");
    add_scenario_flags(dump, dump_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kParameterError;
    }

    try {
        std::unique_ptr<std::ofstream> file;
        if (*sweep) {
            const icncap::Settings s = sweep_o.merged();
            const icncap::SweepSpec spec = icncap::make_sweep_spec(s);
            const auto rows = icncap::run_sweep(spec);
            const auto it = s.find("out");
            std::ostream& out = open_output(it == s.end() ? "-" : it->second, file);
            icncap::write_sweep_csv(rows, out);
            if (!out) throw icncap::IoError("write failed");
        } else if (*fit) {
            const auto table = icncap::read_csv_file(fit_in);
            const auto lines = icncap::fit_report(table);
            icncap::write_fit_report(lines, open_output(fit_out, file));
        } else if (*plot) {
            const auto table = icncap::read_csv_file(plot_in);
            const auto kind = icncap::parse_plot_kind(plot_kind);
            icncap::emit_plot(table, kind, open_output(plot_out, file));
        } else if (*validate) {
            bool ok = true;
            for (const auto& r : icncap::run_invariant_suite(validate_seed, validate_workers)) {
                std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << " -- " << r.detail << '\n';
                ok = ok && r.passed;
            }
            return ok ? 0 : kValidationFailed;
        } else if (*dump) {
            const icncap::Settings s = dump_o.merged();
            const icncap::ScenarioConfig config = icncap::make_config(s);
            config.validate();
            const auto topo = icncap::build_topology(config);
            const auto it = s.find("out");
            icncap::dump_topology(topo, open_output(it == s.end() ? "-" : it->second, file));
        }
    } catch (const icncap::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return kParameterError;
    } catch (const icncap::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIoError;
    }
    return 0;
}
