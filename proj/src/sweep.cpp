#include "icncap/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "icncap/analytics.hpp"
#include "icncap/montecarlo.hpp"
#include "icncap/parallel.hpp"
#include "icncap/topology.hpp"

namespace icncap {

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::N: return "n";
        case SweepAxis::RatioLambdaMu: return "ratio";
        case SweepAxis::Rho: return "rho";
    }
    return "unknown";
}

SweepAxis parse_sweep_axis(std::string_view text) {
    if (text == "n" || text == "N") return SweepAxis::N;
    if (text == "ratio" || text == "lambda/mu") return SweepAxis::RatioLambdaMu;
    if (text == "rho") return SweepAxis::Rho;
    throw ParameterError("unknown sweep axis '" + std::string(text) + "' (expected n, ratio or rho)");
}

namespace {

ScenarioConfig point_config(const SweepSpec& spec, Scenario scenario, double point) {
    ScenarioConfig c = spec.base;
    c.scenario = scenario;
    switch (spec.axis) {
        case SweepAxis::N:
            c.n = static_cast<std::uint64_t>(std::llround(point));
            break;
        case SweepAxis::RatioLambdaMu:
            c.mu = 1.0;
            c.lambda = point;
            break;
        case SweepAxis::Rho:
            c.lambda = point * c.mu / (1.0 - point);
            break;
    }
    return c;
}

SweepRow evaluate(const ScenarioConfig& c, unsigned workers) {
    const Topology topo = build_topology(c);
    SimOptions options;
    options.workers = workers;
    const MetricsReport discovery = estimate_discovery_metrics(c, topo, options);
    const MetricsReport load = estimate_serving_load(c, topo, options);
    const ThroughputEstimate sim = supported_throughput_from(c, load);
    const double rho = c.rho();
    const CapacityBreakdown cap = max_throughput(c.scenario, c.n, rho, c.w_bandwidth);

    SweepRow row;
    row.scenario = c.scenario;
    row.n = c.n;
    row.lambda = c.lambda;
    row.mu = c.mu;
    row.rho = rho;
    row.h_bar_cond = discovery.h_bar_cond.mean;
    row.h_bar_uncond = discovery.h_bar_uncond.mean;
    row.p_s = discovery.p_s.mean;
    row.max_load = load.max_load;
    row.gamma_sim = sim.gamma.mean;
    row.gamma_analytic = cap.gamma_max;
    row.h_bar_cond_ci = discovery.h_bar_cond.ci95();
    row.h_bar_uncond_ci = discovery.h_bar_uncond.ci95();
    row.p_s_ci = discovery.p_s.ci95();
    row.gamma_sim_ci = sim.gamma.ci95();
    row.h_bar_exact = cap.h_bar;
    row.p_s_analytic = cap.p_s;
    row.h_bar_s = cap.h_bar_s;
    row.transport_capacity = cap.transport_capacity;
    row.gamma_baseline = no_cache_baseline(c.scenario, c.n, c.w_bandwidth);
    row.occupancy_threshold = occupancy_threshold(c.scenario, c.n);
    row.regime = std::string(to_string(cap.regime));
    row.ratio_bound = c.n >= 16 ? supportable_ratio_bound(c.scenario, c.n)
                                : std::numeric_limits<double>::quiet_NaN();
    row.server_load = load.server_load.mean;
    row.relay_load = load.relay_load.mean;
    row.total_request_rate = total_request_rate(c.n, c.lambda, c.mu);
    row.total_traffic = total_traffic(c.n, c.lambda, c.mu, c.b_content, c.scenario);
    row.w_bandwidth = c.w_bandwidth;
    row.b_content = c.b_content;
    row.trials = c.trials;
    row.epochs = c.epochs;
    row.seed = c.seed;
    return row;
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

}  // namespace

void validate(const SweepSpec& spec) {
    if (spec.scenarios.empty()) throw ParameterError("sweep needs at least one scenario");
    if (spec.points.empty()) throw ParameterError("sweep needs at least one point");
    for (std::size_t i = 1; i < spec.points.size(); ++i) {
        if (!(spec.points[i] > spec.points[i - 1])) throw ParameterError("sweep points must be strictly increasing");
    }
    for (double p : spec.points) {
        if (!std::isfinite(p) || p <= 0.0) throw ParameterError("sweep points must be positive");
        if (spec.axis == SweepAxis::Rho && p >= 1.0) throw ParameterError("rho points must lie in (0, 1)");
        if (spec.axis == SweepAxis::N && std::floor(p) != p) throw ParameterError("n points must be integers");
    }
    for (Scenario s : spec.scenarios) {
        for (double p : spec.points) point_config(spec, s, p).validate();
    }
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    validate(spec);
    const std::size_t tasks = spec.scenarios.size() * spec.points.size();
    const unsigned workers = resolve_workers(spec.workers);
    const unsigned outer = static_cast<unsigned>(std::min<std::size_t>(workers, tasks));
    const unsigned inner = std::max(1u, workers / std::max(1u, outer));
    std::vector<SweepRow> rows(tasks);
    parallel_for(tasks, outer, [&](std::size_t i, unsigned) {
        const Scenario s = spec.scenarios[i / spec.points.size()];
        const double p = spec.points[i % spec.points.size()];
        rows[i] = evaluate(point_config(spec, s, p), inner);
    });
    return rows;
}

const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> columns = {
        "scenario",       "n",
        "lambda",         "mu",
        "rho",            "h_bar_cond",
        "h_bar_uncond",   "p_s",
        "max_load",       "gamma_sim",
        "gamma_analytic", "h_bar_cond_ci",
        "h_bar_uncond_ci", "p_s_ci",
        "gamma_sim_ci",   "h_bar_exact",
        "p_s_analytic",   "h_bar_s",
        "transport_capacity", "gamma_baseline",
        "occupancy_threshold", "regime",
        "ratio_bound",    "server_load",
        "relay_load",     "total_request_rate",
        "total_traffic",  "w_bandwidth",
        "b_content",      "trials",
        "epochs",         "seed",
    };
    return columns;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    const auto& cols = sweep_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const SweepRow& r : rows) {
        out << to_string(r.scenario) << ',' << r.n << ',' << num(r.lambda) << ',' << num(r.mu) << ','
            << num(r.rho) << ',' << num(r.h_bar_cond) << ',' << num(r.h_bar_uncond) << ',' << num(r.p_s)
            << ',' << num(r.max_load) << ',' << num(r.gamma_sim) << ',' << num(r.gamma_analytic) << ','
            << num(r.h_bar_cond_ci) << ',' << num(r.h_bar_uncond_ci) << ',' << num(r.p_s_ci) << ','
            << num(r.gamma_sim_ci) << ',' << num(r.h_bar_exact) << ',' << num(r.p_s_analytic) << ','
            << num(r.h_bar_s) << ',' << num(r.transport_capacity) << ',' << num(r.gamma_baseline) << ','
            << num(r.occupancy_threshold) << ',' << r.regime << ',' << num(r.ratio_bound) << ','
            << num(r.server_load) << ',' << num(r.relay_load) << ',' << num(r.total_request_rate) << ','
            << num(r.total_traffic) << ',' << num(r.w_bandwidth) << ',' << num(r.b_content) << ','
            << r.trials << ',' << r.epochs << ',' << r.seed << '\n';
    }
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    write_sweep_csv(rows, out);
    return out.str();
}

}  // namespace icncap
