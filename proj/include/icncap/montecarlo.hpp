#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "icncap/discovery.hpp"
#include "icncap/model.hpp"
#include "icncap/random.hpp"
#include "icncap/topology.hpp"

namespace icncap {

/// How node occupancy is drawn. Snapshot: i.i.d. Bernoulli(rho). Ctmc: each
/// node's two-state chain is run from empty up to a time long past mixing.
enum class FieldMode { Snapshot, Ctmc };

struct SimOptions {
    std::optional<double> rho_override;  // replaces lambda/(lambda+mu); Snapshot only
    FieldMode field_mode = FieldMode::Snapshot;
    int interior_margin = 0;  // grid: requesters at least this many hops from the edge
    unsigned workers = 1;     // 0 = hardware concurrency
    bool check_invariants = false;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    double ci95() const { return 1.96 * std_error; }
    bool covers(double value) const { return value >= mean - ci95() && value <= mean + ci95(); }
};

struct MetricsReport {
    Scenario scenario = Scenario::GridPathwise;
    std::uint64_t n = 0;
    double rho = 0.0;
    std::uint64_t seed = 0;

    // discovery trials
    std::uint64_t trials = 0;
    std::uint64_t requests = 0;  // trials minus zero-request trials (rho = 1)
    Estimate h_bar_cond;         // mean hops given a cache source
    Estimate h_bar_uncond;       // mean hops over all requests
    Estimate p_s;
    Estimate server_hops;        // mean hops given a server source
    std::vector<std::uint64_t> hop_histogram;  // index = hops
    std::vector<std::uint64_t> cache_hop_histogram;

    // synchronized request epochs
    std::uint64_t epochs = 0;
    std::uint64_t epoch_requests = 0;
    double max_load = 0.0;  // median over epochs of the busiest holder's count
    std::vector<std::uint32_t> epoch_max_loads;
    std::vector<std::uint64_t> load_histogram;  // holders by served count, over all epochs
    Estimate server_load;  // server-sourced requests per epoch
    Estimate relay_load;   // relay transits per cell (per node on the grid) per epoch
    Estimate epoch_hops;   // mean source distance per request, per epoch
};

/// Occupancy field with flags drawn on first access, so a discovery only pays
/// for the nodes it inspects. One instance per worker; reset() per trial.
class LazyCacheField {
  public:
    explicit LazyCacheField(std::size_t nodes) : state_(nodes, kUnknown) {}

    void reset_snapshot(double rho, Rng& rng);
    void reset_ctmc(double lambda, double mu, double sample_time, Rng& rng);
    void fix(NodeId v, bool value);
    bool has(NodeId v);
    std::size_t drawn() const { return touched_.size(); }

  private:
    static constexpr std::int8_t kUnknown = -1;
    void clear();

    std::vector<std::int8_t> state_;
    std::vector<NodeId> touched_;
    Rng* rng_ = nullptr;
    FieldMode mode_ = FieldMode::Snapshot;
    double rho_ = 0.0;
    double lambda_ = 1.0;
    double mu_ = 1.0;
    double sample_time_ = 0.0;
};

/// i.i.d. Bernoulli(rho) flags over every node of the topology.
CacheField sample_cache_field(const Topology& topo, double rho, std::uint64_t seed);

/// Flags from independent chains sampled at a time where the chain has mixed.
CacheField sample_cache_field_ctmc(const Topology& topo, double lambda, double mu, std::uint64_t seed);

/// Time at which Ctmc fields are observed: 30 / min(lambda, mu).
double ctmc_sample_time(double lambda, double mu);

/// Per trial: a fresh field, a requester drawn uniformly among nodes lacking
/// the content, and the scenario's discovery procedure.
MetricsReport estimate_discovery_metrics(const ScenarioConfig& config, const Topology& topo,
                                         const SimOptions& options = {});

/// Per epoch: one field, every content-less node requests once, all resolved
/// against that field. Fills the epoch fields of the report.
MetricsReport estimate_serving_load(const ScenarioConfig& config, const Topology& topo,
                                    const SimOptions& options = {});

struct ThroughputEstimate {
    Estimate gamma;
    double mean_distance = 0.0;
    double transport_capacity = 0.0;
};

/// transport capacity / [n (1-rho) * empirical mean source distance], from request epochs.
ThroughputEstimate estimate_supported_throughput(const ScenarioConfig& config, const Topology& topo,
                                                 const SimOptions& options = {});

/// Same estimate from an existing epoch report.
ThroughputEstimate supported_throughput_from(const ScenarioConfig& config, const MetricsReport& load);

}  // namespace icncap
