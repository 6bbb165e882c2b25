#include "icncap/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "icncap/analytics.hpp"
#include "icncap/parallel.hpp"

namespace icncap {

namespace {

constexpr std::uint64_t kTrialStream = 0x7121a1;
constexpr std::uint64_t kEpochStream = 0xe90c5;
constexpr std::size_t kCtmcMaxNodes = 1000;

// ---------------------------------------------------------------- field helpers

void require_ctmc_size(std::size_t nodes, FieldMode mode) {
    if (mode == FieldMode::Ctmc && nodes > kCtmcMaxNodes) {
        throw ParameterError("full-chain field mode is limited to " + std::to_string(kCtmcMaxNodes) +
                             " nodes, topology has " + std::to_string(nodes));
    }
}

double resolve_rho(const ScenarioConfig& config, const SimOptions& options) {
    if (options.rho_override) {
        if (options.field_mode == FieldMode::Ctmc) {
            throw ParameterError("rho override is incompatible with the full-chain field mode");
        }
        const double rho = *options.rho_override;
        if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("rho override must lie in [0, 1]");
        return rho;
    }
    return config.rho();
}

void check_match(const ScenarioConfig& config, const Topology& topo) {
    const bool grid = std::holds_alternative<GridTopology>(topo);
    if (grid != is_grid(config.scenario)) {
        throw ParameterError(std::string("scenario ") + std::string(to_string(config.scenario)) +
                             " does not run on this topology");
    }
}

// Nodes allowed to issue a discovery-trial request.
std::vector<NodeId> eligible_requesters(const Topology& topo, int interior_margin) {
    std::vector<NodeId> out;
    const std::size_t count = node_count(topo);
    const auto* grid = std::get_if<GridTopology>(&topo);
    out.reserve(count);
    for (NodeId v = 0; v < count; ++v) {
        if (grid && interior_margin > 0 && grid->boundary_distance(v) < interior_margin) continue;
        out.push_back(v);
    }
    if (out.empty()) throw ParameterError("no requester satisfies the interior margin");
    return out;
}

template <class Field>
DiscoveryOutcome discover(Scenario scenario, const Topology& topo, Field& field, NodeId requester,
                          Rng& rng, bool check) {
    switch (scenario) {
        case Scenario::GridPathwise:
            return pathwise_discover(std::get<GridTopology>(topo), field, requester);
        case Scenario::GridFlooding: {
            const auto& grid = std::get<GridTopology>(topo);
            const DiscoveryOutcome out = flood_discover(grid, field, requester);
            if (check && out.source == SourceKind::Cache) {
                // No holder may sit on a smaller ring.
                const GridPoint c = grid.point(requester);
                const int r = out.hops - 1;
                for (int dy = -r; dy <= r; ++dy) {
                    const int span = r - std::abs(dy);
                    for (int dx = -span; dx <= span; ++dx) {
                        const GridPoint p{c.x + dx, c.y + dy};
                        if ((dx != 0 || dy != 0) && grid.contains(p) && field.has(grid.node(p))) {
                            throw std::logic_error("flooding returned a non-minimal ring");
                        }
                    }
                }
            }
            return out;
        }
        case Scenario::RandomCellPathwise:
            return cell_pathwise_discover(std::get<RandomCellTopology>(topo), field, requester, rng);
    }
    return {};
}

Estimate mean_estimate(long double sum, long double sum_sq, std::uint64_t count) {
    Estimate e;
    if (count == 0) return e;
    const long double c = static_cast<long double>(count);
    const long double mean = sum / c;
    e.mean = static_cast<double>(mean);
    if (count > 1) {
        const long double var = std::max<long double>(0.0L, (sum_sq - c * mean * mean) / (c - 1.0L));
        e.std_error = static_cast<double>(std::sqrt(var / c));
    }
    return e;
}

Estimate proportion_estimate(std::uint64_t hits, std::uint64_t count) {
    Estimate e;
    if (count == 0) return e;
    const double p = static_cast<double>(hits) / static_cast<double>(count);
    e.mean = p;
    e.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(count));
    return e;
}

void bump(std::vector<std::uint64_t>& hist, std::size_t index, std::uint64_t by = 1) {
    if (hist.size() <= index) hist.resize(index + 1, 0);
    hist[index] += by;
}

}  // namespace

// ---------------------------------------------------------------- lazy field

void LazyCacheField::clear() {
    for (NodeId v : touched_) state_[v] = kUnknown;
    touched_.clear();
}

void LazyCacheField::reset_snapshot(double rho, Rng& rng) {
    clear();
    rng_ = &rng;
    mode_ = FieldMode::Snapshot;
    rho_ = rho;
}

void LazyCacheField::reset_ctmc(double lambda, double mu, double sample_time, Rng& rng) {
    clear();
    rng_ = &rng;
    mode_ = FieldMode::Ctmc;
    lambda_ = lambda;
    mu_ = mu;
    sample_time_ = sample_time;
}

void LazyCacheField::fix(NodeId v, bool value) {
    if (state_[v] == kUnknown) touched_.push_back(v);
    state_[v] = value ? 1 : 0;
}

bool LazyCacheField::has(NodeId v) {
    if (state_[v] == kUnknown) {
        const bool drawn = mode_ == FieldMode::Snapshot ? bernoulli(*rng_, rho_)
                                                        : occupancy_at(lambda_, mu_, sample_time_, *rng_);
        state_[v] = drawn ? 1 : 0;
        touched_.push_back(v);
    }
    return state_[v] == 1;
}

double ctmc_sample_time(double lambda, double mu) {
    steady_state_occupancy(lambda, mu);  // validates the rates
    return 30.0 / std::min(lambda, mu);
}

CacheField sample_cache_field(const Topology& topo, double rho, std::uint64_t seed) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("rho must lie in [0, 1]");
    const std::size_t nodes = node_count(topo);
    CacheField field(nodes);
    Rng rng = make_stream(seed, 0);
    for (NodeId v = 0; v < nodes; ++v) field.set(v, bernoulli(rng, rho));
    return field;
}

CacheField sample_cache_field_ctmc(const Topology& topo, double lambda, double mu, std::uint64_t seed) {
    const double t = ctmc_sample_time(lambda, mu);
    const std::size_t nodes = node_count(topo);
    require_ctmc_size(nodes, FieldMode::Ctmc);
    CacheField field(nodes);
    Rng rng = make_stream(seed, 0);
    for (NodeId v = 0; v < nodes; ++v) field.set(v, occupancy_at(lambda, mu, t, rng));
    return field;
}

// ---------------------------------------------------------------- discovery trials

MetricsReport estimate_discovery_metrics(const ScenarioConfig& config, const Topology& topo,
                                         const SimOptions& options) {
    config.validate();
    check_match(config, topo);
    const double rho = resolve_rho(config, options);
    const std::size_t nodes = node_count(topo);
    require_ctmc_size(nodes, options.field_mode);
    const std::vector<NodeId> eligible = eligible_requesters(topo, options.interior_margin);
    const double sample_time = ctmc_sample_time(config.lambda, config.mu);

    struct Trial {
        int hops = 0;
        bool server = false;
        bool request = false;
    };
    std::vector<Trial> results(config.trials);
    const unsigned workers = std::min<unsigned>(resolve_workers(options.workers),
                                                static_cast<unsigned>(std::max<std::uint64_t>(1, config.trials)));
    std::vector<LazyCacheField> fields(workers, LazyCacheField(nodes));
    const std::uint64_t base = derive_seed(config.seed, kTrialStream);

    parallel_for(config.trials, workers, [&](std::size_t t, unsigned w) {
        if (rho >= 1.0) return;  // every node holds the content: no request
        Rng rng = make_stream(base, t);
        std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
        const NodeId requester = eligible[pick(rng)];
        LazyCacheField& field = fields[w];
        if (options.field_mode == FieldMode::Snapshot) {
            field.reset_snapshot(rho, rng);
        } else {
            field.reset_ctmc(config.lambda, config.mu, sample_time, rng);
        }
        field.fix(requester, false);
        const DiscoveryOutcome out =
            discover(config.scenario, topo, field, requester, rng, options.check_invariants);
        results[t] = {out.hops, out.source == SourceKind::Server, true};
    });

    MetricsReport report;
    report.scenario = config.scenario;
    report.n = config.n;
    report.rho = rho;
    report.seed = config.seed;
    report.trials = config.trials;

    long double all_sum = 0, all_sq = 0, cache_sum = 0, cache_sq = 0, srv_sum = 0, srv_sq = 0;
    std::uint64_t cache_count = 0;
    std::uint64_t server_count = 0;
    for (const Trial& t : results) {
        if (!t.request) continue;
        ++report.requests;
        const long double h = t.hops;
        all_sum += h;
        all_sq += h * h;
        bump(report.hop_histogram, static_cast<std::size_t>(t.hops));
        if (t.server) {
            ++server_count;
            srv_sum += h;
            srv_sq += h * h;
        } else {
            ++cache_count;
            cache_sum += h;
            cache_sq += h * h;
            bump(report.cache_hop_histogram, static_cast<std::size_t>(t.hops));
        }
    }
    report.h_bar_uncond = mean_estimate(all_sum, all_sq, report.requests);
    report.h_bar_cond = mean_estimate(cache_sum, cache_sq, cache_count);
    report.server_hops = mean_estimate(srv_sum, srv_sq, server_count);
    report.p_s = proportion_estimate(server_count, report.requests);
    return report;
}

// ---------------------------------------------------------------- request epochs

MetricsReport estimate_serving_load(const ScenarioConfig& config, const Topology& topo,
                                    const SimOptions& options) {
    config.validate();
    check_match(config, topo);
    const double rho = resolve_rho(config, options);
    const std::size_t nodes = node_count(topo);
    require_ctmc_size(nodes, options.field_mode);

    struct Epoch {
        std::uint64_t requests = 0;
        std::uint64_t server = 0;
        std::uint64_t hops = 0;
        std::uint64_t relay = 0;
        std::uint32_t max_load = 0;
        std::vector<std::uint64_t> load_histogram;
    };
    std::vector<Epoch> epochs(config.epochs);
    const std::uint64_t base = derive_seed(config.seed, kEpochStream);
    const auto* cells = std::get_if<RandomCellTopology>(&topo);
    const double relay_units = cells ? static_cast<double>(cells->cell_count()) : static_cast<double>(nodes);

    parallel_for(config.epochs, options.workers, [&](std::size_t e, unsigned) {
        const std::uint64_t field_seed = derive_seed(base, e);
        const CacheField field = options.field_mode == FieldMode::Snapshot
                                     ? sample_cache_field(topo, rho, field_seed)
                                     : sample_cache_field_ctmc(topo, config.lambda, config.mu, field_seed);
        Rng rng = make_stream(field_seed, 1);
        std::vector<std::uint32_t> load(nodes, 0);
        Epoch& ep = epochs[e];
        for (NodeId v = 0; v < nodes; ++v) {
            if (field.has(v)) continue;
            const DiscoveryOutcome out =
                discover(config.scenario, topo, field, v, rng, options.check_invariants);
            ++ep.requests;
            ep.hops += static_cast<std::uint64_t>(out.hops);
            ep.relay += static_cast<std::uint64_t>(std::max(out.hops - 1, 0));
            if (out.source == SourceKind::Server) {
                ++ep.server;
            } else {
                ++load[out.node];
            }
        }
        for (NodeId v = 0; v < nodes; ++v) {
            if (!field.has(v)) continue;
            ep.max_load = std::max(ep.max_load, load[v]);
            bump(ep.load_histogram, load[v]);
        }
    });

    MetricsReport report;
    report.scenario = config.scenario;
    report.n = config.n;
    report.rho = rho;
    report.seed = config.seed;
    report.epochs = config.epochs;
    long double srv_sum = 0, srv_sq = 0, relay_sum = 0, relay_sq = 0, hop_sum = 0, hop_sq = 0;
    std::uint64_t hop_epochs = 0;
    for (const Epoch& ep : epochs) {
        report.epoch_requests += ep.requests;
        report.epoch_max_loads.push_back(ep.max_load);
        for (std::size_t i = 0; i < ep.load_histogram.size(); ++i) bump(report.load_histogram, i, ep.load_histogram[i]);
        const long double s = ep.server;
        srv_sum += s;
        srv_sq += s * s;
        const long double r = static_cast<long double>(ep.relay) / relay_units;
        relay_sum += r;
        relay_sq += r * r;
        if (ep.requests > 0) {
            const long double h = static_cast<long double>(ep.hops) / ep.requests;
            hop_sum += h;
            hop_sq += h * h;
            ++hop_epochs;
        }
    }
    report.server_load = mean_estimate(srv_sum, srv_sq, config.epochs);
    report.relay_load = mean_estimate(relay_sum, relay_sq, config.epochs);
    report.epoch_hops = mean_estimate(hop_sum, hop_sq, hop_epochs);

    std::vector<std::uint32_t> sorted = report.epoch_max_loads;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    report.max_load = sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
    return report;
}

ThroughputEstimate supported_throughput_from(const ScenarioConfig& config, const MetricsReport& load) {
    if (load.epoch_requests == 0) throw ParameterError("no requests were issued; throughput is undefined");
    if (!(load.epoch_hops.mean > 0.0)) throw ParameterError("requests travelled zero hops; throughput is undefined");
    ThroughputEstimate out;
    out.transport_capacity = transport_capacity(config.scenario, config.n, config.w_bandwidth);
    out.mean_distance = load.epoch_hops.mean;
    const double requests = static_cast<double>(config.n) * (1.0 - load.rho);
    out.gamma.mean = out.transport_capacity / (requests * out.mean_distance);
    out.gamma.std_error = out.gamma.mean * load.epoch_hops.std_error / out.mean_distance;
    return out;
}

ThroughputEstimate estimate_supported_throughput(const ScenarioConfig& config, const Topology& topo,
                                                 const SimOptions& options) {
    return supported_throughput_from(config, estimate_serving_load(config, topo, options));
}

}  // namespace icncap
