#include "icncap/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "icncap/analytics.hpp"
#include "icncap/discovery.hpp"
#include "icncap/montecarlo.hpp"
#include "icncap/sweep.hpp"
#include "icncap/topology.hpp"

namespace icncap {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

CheckResult occupancy_identities() {
    double worst = 0.0;
    for (double l : {0.01, 0.5, 1.0, 7.0, 300.0}) {
        for (double m : {0.02, 1.0, 9.0}) {
            const double rho = steady_state_occupancy(l, m);
            worst = std::max(worst, std::abs(rho - steady_state_occupancy(3.7 * l, 3.7 * m)));
            if (!(steady_state_occupancy(2 * l, m) > rho) || !(steady_state_occupancy(l, 2 * m) < rho)) {
                return {"occupancy monotone and ratio-invariant", false, "monotonicity violated"};
            }
        }
    }
    return {"occupancy monotone and ratio-invariant", worst < 1e-15, fmt("max ratio drift %.3g", worst)};
}

CheckResult ctmc_alternates(std::uint64_t seed) {
    const auto path = simulate_occupancy_path(2.0, 1.0, 2000.0, seed);
    for (std::size_t i = 1; i < path.size(); ++i) {
        if (path[i].has_content == path[i - 1].has_content ||
            !(path[i].last_transition_time > path[i - 1].last_transition_time)) {
            return {"ctmc path alternates", false, "repeated state at jump " + std::to_string(i)};
        }
    }
    const double frac = simulate_occupancy_ctmc(2.0, 1.0, 2e5, seed);
    const bool ok = std::abs(frac - 2.0 / 3.0) < 0.01;
    return {"ctmc path alternates and converges", ok, fmt("occupied fraction %.4f vs %.4f", frac, 2.0 / 3.0)};
}

CheckResult grid_metric(std::uint64_t seed) {
    const GridTopology grid = GridTopology::build(31 * 31);
    Rng rng = make_stream(seed, 11);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(grid.node_count() - 1));
    for (int i = 0; i < 2000; ++i) {
        const NodeId a = pick(rng), b = pick(rng), c = pick(rng);
        if (grid.hop_distance(a, a) != 0 || grid.hop_distance(a, b) != grid.hop_distance(b, a) ||
            grid.hop_distance(a, c) > grid.hop_distance(a, b) + grid.hop_distance(b, c)) {
            return {"grid hop metric", false, "metric axiom failed"};
        }
        const auto path = grid.path_to_server(a);
        if (static_cast<int>(path.size()) != grid.server_distance(a)) return {"grid hop metric", false, "path length"};
        int remaining = grid.server_distance(a);
        for (NodeId v : path) {
            const int d = grid.server_distance(v);
            if (d != remaining - 1) return {"grid hop metric", false, "path not strictly descending"};
            remaining = d;
        }
    }
    return {"grid hop metric and server paths", true, "2000 random triples"};
}

CheckResult discovery_properties(std::uint64_t seed) {
    const GridTopology grid = GridTopology::build(25 * 25);
    Rng rng = make_stream(seed, 12);
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(grid.node_count() - 1));
    for (int i = 0; i < 300; ++i) {
        CacheField field(grid.node_count());
        for (NodeId v = 0; v < grid.node_count(); ++v) field.set(v, bernoulli(rng, 0.08));
        const NodeId req = pick(rng);
        field.set(req, false);
        const auto path = pathwise_discover(grid, field, req);
        const auto flood = flood_discover(grid, field, req);
        // minimality of the flooding ring
        for (NodeId u = 0; u < grid.node_count(); ++u) {
            const int d = grid.hop_distance(u, req);
            if (flood.source == SourceKind::Cache && d >= 1 && d < flood.hops && field.has(u)) {
                return {"discovery properties", false, "flooding ring not minimal"};
            }
        }
        // adding a flag never increases the hop count
        NodeId extra = pick(rng);
        if (extra == req) continue;
        CacheField more = field;
        more.set(extra, true);
        if (pathwise_discover(grid, more, req).hops > path.hops || flood_discover(grid, more, req).hops > flood.hops) {
            return {"discovery properties", false, "adding a holder increased hops"};
        }
        // off-path flags do not matter to pathwise search
        const auto on_path = grid.path_to_server(req);
        if (std::find(on_path.begin(), on_path.end(), extra) == on_path.end()) {
            const auto again = pathwise_discover(grid, more, req);
            if (again.hops != path.hops || again.source != path.source) {
                return {"discovery properties", false, "off-path flag changed the pathwise result"};
            }
        }
    }
    return {"discovery minimality, monotonicity, path locality", true, "300 random fields"};
}

CheckResult analytic_identities() {
    double worst_closed = 0.0;
    for (double rho : {0.003, 0.05, 0.3, 0.77, 1.0}) {
        for (std::uint64_t n : {16ULL, 10201ULL, 1000000ULL}) {
            const double sum = expected_hops_exact(Scenario::GridPathwise, rho, n);
            const double closed = pathwise_hops_closed_form(rho, integer_sqrt(n));
            worst_closed = std::max(worst_closed, std::abs(sum - closed) / closed);
        }
    }
    double worst_identity = 0.0;
    for (Scenario s : {Scenario::GridPathwise, Scenario::GridFlooding, Scenario::RandomCellPathwise}) {
        for (std::uint64_t n : {4096ULL, 65536ULL}) {
            for (double rho : {0.01, 0.2, 0.875}) {
                const CapacityBreakdown c = max_throughput(s, n, rho, 3.0);
                worst_identity =
                    std::max(worst_identity, std::abs(c.gamma_max * c.load_factor(n) - c.transport_capacity) / c.transport_capacity);
                const ServerProbability p = server_probability(s, rho, n);
                if (p.lower > p.upper) return {"analytic identities", false, "server bracket inverted"};
            }
        }
    }
    const bool ok = worst_closed < 1e-12 && worst_identity < 1e-12;
    return {"closed form and throughput identity", ok,
            fmt("closed-form rel err %.2g, identity rel err %.2g", worst_closed, worst_identity)};
}

CheckResult power_fit_recovery() {
    std::vector<std::pair<double, double>> samples;
    for (double x : {2.0, 5.0, 11.0, 40.0, 300.0}) samples.emplace_back(x, 4.2 * std::pow(x, -0.73));
    const PowerFit fit = fit_power_exponent(samples);
    return {"power fit recovers planted exponent", std::abs(fit.exponent + 0.73) < 1e-6,
            fmt("exponent %.9f", fit.exponent)};
}

CheckResult total_expectation(std::uint64_t seed, unsigned workers) {
    ScenarioConfig c;
    c.scenario = Scenario::GridPathwise;
    c.n = 41 * 41;
    c.lambda = 0.03;
    c.mu = 1.0;
    c.trials = 20000;
    c.seed = seed;
    const Topology topo = build_topology(c);
    SimOptions o;
    o.workers = workers;
    const MetricsReport r = estimate_discovery_metrics(c, topo, o);
    const double recomposed = (1.0 - r.p_s.mean) * r.h_bar_cond.mean + r.p_s.mean * r.server_hops.mean;
    const double diff = std::abs(recomposed - r.h_bar_uncond.mean);
    // oracle: mean over nodes of (1 - q^d) / rho
    const auto& grid = std::get<GridTopology>(topo);
    const double rho = c.rho();
    double oracle = 0.0;
    for (NodeId v = 0; v < grid.node_count(); ++v) oracle += (1.0 - std::pow(1.0 - rho, grid.server_distance(v))) / rho;
    oracle /= static_cast<double>(grid.node_count());
    const bool ok = diff < 1e-9 && std::abs(r.h_bar_uncond.mean - oracle) <= 4.0 * r.h_bar_uncond.std_error;
    return {"law of total expectation and pathwise oracle", ok,
            fmt("h_bar %.4f vs oracle %.4f", r.h_bar_uncond.mean, oracle)};
}

CheckResult replay(std::uint64_t seed) {
    SweepSpec spec;
    spec.base.trials = 500;
    spec.base.epochs = 2;
    spec.base.seed = seed;
    spec.base.lambda = 7.0;
    spec.scenarios = {Scenario::GridPathwise, Scenario::RandomCellPathwise};
    spec.axis = SweepAxis::N;
    spec.points = {256, 1024};
    spec.workers = 1;
    const std::string a = sweep_csv(run_sweep(spec));
    spec.workers = 4;
    const std::string b = sweep_csv(run_sweep(spec));
    return {"sweep replay is byte-identical across worker counts", a == b, std::to_string(a.size()) + " bytes"};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed, unsigned workers) {
    std::vector<std::function<CheckResult()>> checks = {
        [] { return occupancy_identities(); },
        [&] { return ctmc_alternates(seed); },
        [&] { return grid_metric(seed); },
        [&] { return discovery_properties(seed); },
        [] { return analytic_identities(); },
        [] { return power_fit_recovery(); },
        [&] { return total_expectation(seed, workers); },
        [&] { return replay(seed); },
    };
    std::vector<CheckResult> out;
    for (auto& check : checks) {
        try {
            out.push_back(check());
        } catch (const std::exception& e) {
            out.push_back({"check threw", false, e.what()});
        }
    }
    return out;
}

}  // namespace icncap
