#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "icncap/random.hpp"

namespace icncap {

/// Invalid scenario parameter or precondition violation.
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Failure reading or writing an artifact file.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Network model plus discovery procedure.
///   GridPathwise        - lattice, query follows the shortest path to the server
///   GridFlooding        - lattice, expanding ring search
///   RandomCellPathwise  - uniform nodes in the unit square, cell-by-cell path search
enum class Scenario { GridPathwise, GridFlooding, RandomCellPathwise };

std::string_view to_string(Scenario s);
/// Accepts "I"/"II"/"III", the enum names, or kebab-case names.
Scenario parse_scenario(std::string_view text);
constexpr bool is_grid(Scenario s) { return s != Scenario::RandomCellPathwise; }

/// Idealized: exactly ceil(log n) nodes in every cell. Empirical: i.i.d. uniform positions.
enum class CellMode { Idealized, Empirical };

std::string_view to_string(CellMode m);
CellMode parse_cell_mode(std::string_view text);

struct ScenarioConfig {
    Scenario scenario = Scenario::GridPathwise;
    std::uint64_t n = 10000;
    double lambda = 7.0;       // request rate
    double mu = 1.0;           // cache drop rate
    double w_bandwidth = 1.0;  // bits/s per node
    double b_content = 1.0;    // bits
    std::uint64_t seed = 1;
    std::uint64_t trials = 10000;
    std::uint64_t epochs = 10;  // synchronized request epochs for load estimates
    CellMode cell_mode = CellMode::Idealized;
    double cell_scale = 1.0;  // cell side = cell_scale * sqrt(log n / n)

    double rho() const;
    /// Throws ParameterError when any invariant is violated.
    void validate() const;
};

/// Long-run fraction of time a node holds the content: lambda / (lambda + mu).
double steady_state_occupancy(double lambda, double mu);

/// rho order separating the cache- and server-dominated regimes:
/// n^-1/2 on the grid, 1/log n on the random network.
double occupancy_threshold(Scenario scenario, std::uint64_t n);

struct OccupancyState {
    bool has_content = false;
    double last_transition_time = 0.0;
};

/// Fraction of [0, horizon] spent holding the content, for a two-state chain
/// that starts empty, fills at rate lambda and drops at rate mu.
double simulate_occupancy_ctmc(double lambda, double mu, double horizon, std::uint64_t seed);

/// The same chain's jump sequence; the first entry is the initial empty state at t=0.
std::vector<OccupancyState> simulate_occupancy_path(double lambda, double mu, double horizon,
                                                    std::uint64_t seed);

/// State of a chain started empty, observed at time t.
bool occupancy_at(double lambda, double mu, double t, Rng& rng);

std::uint64_t integer_sqrt(std::uint64_t n);
bool is_perfect_square(std::uint64_t n);
/// Perfect square closest to n (ties resolve downwards).
std::uint64_t nearest_perfect_square(std::uint64_t n);

}  // namespace icncap
