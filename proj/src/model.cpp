#include "icncap/model.hpp"

#include <cctype>
#include <cmath>
#include <random>
#include <string>

namespace icncap {

namespace {

std::string normalize(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == '-' || c == '_' || c == ' ') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

void require_rates(double lambda, double mu) {
    if (!(lambda > 0.0) || !(mu > 0.0) || !std::isfinite(lambda) || !std::isfinite(mu)) {
        throw ParameterError("rates must be positive and finite (lambda=" + std::to_string(lambda) +
                             ", mu=" + std::to_string(mu) + ")");
    }
}

}  // namespace

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::GridPathwise: return "grid-pathwise";
        case Scenario::GridFlooding: return "grid-flooding";
        case Scenario::RandomCellPathwise: return "random-cell-pathwise";
    }
    return "unknown";
}

Scenario parse_scenario(std::string_view text) {
    const std::string key = normalize(text);
    if (key == "i" || key == "1" || key == "gridpathwise") return Scenario::GridPathwise;
    if (key == "ii" || key == "2" || key == "gridflooding") return Scenario::GridFlooding;
    if (key == "iii" || key == "3" || key == "randomcellpathwise" || key == "random")
        return Scenario::RandomCellPathwise;
    throw ParameterError("unknown scenario '" + std::string(text) + "'");
}

std::string_view to_string(CellMode m) {
    return m == CellMode::Idealized ? "idealized" : "empirical";
}

CellMode parse_cell_mode(std::string_view text) {
    const std::string key = normalize(text);
    if (key == "idealized") return CellMode::Idealized;
    if (key == "empirical") return CellMode::Empirical;
    throw ParameterError("unknown cell mode '" + std::string(text) + "'");
}

double ScenarioConfig::rho() const { return steady_state_occupancy(lambda, mu); }

void ScenarioConfig::validate() const {
    require_rates(lambda, mu);
    if (!(w_bandwidth > 0.0)) throw ParameterError("w_bandwidth must be positive");
    if (!(b_content > 0.0)) throw ParameterError("b_content must be positive");
    if (trials < 1) throw ParameterError("trials must be at least 1");
    if (epochs < 1) throw ParameterError("epochs must be at least 1");
    if (!(cell_scale > 0.0)) throw ParameterError("cell_scale must be positive");
    if (n < 4) throw ParameterError("n must be at least 4");
    if (is_grid(scenario) && !is_perfect_square(n)) {
        throw ParameterError("grid scenarios need a perfect-square n; got " + std::to_string(n) +
                             " (nearest valid: " + std::to_string(nearest_perfect_square(n)) + ")");
    }
    if (scenario == Scenario::RandomCellPathwise && n < 16) {
        throw ParameterError("random scenario needs n >= 16");
    }
}

double steady_state_occupancy(double lambda, double mu) {
    require_rates(lambda, mu);
    return lambda / (lambda + mu);
}

double occupancy_threshold(Scenario scenario, std::uint64_t n) {
    if (n < 4) throw ParameterError("n must be at least 4");
    const double nn = static_cast<double>(n);
    return is_grid(scenario) ? 1.0 / std::sqrt(nn) : 1.0 / std::log(nn);
}

namespace {

// Walks the chain, calling on_jump(t, new_state) at each transition before `horizon`.
template <class OnJump>
double run_chain(double lambda, double mu, double horizon, Rng& rng, OnJump&& on_jump) {
    std::exponential_distribution<double> fill(lambda);
    std::exponential_distribution<double> drop(mu);
    double t = 0.0;
    double occupied = 0.0;
    bool state = false;
    while (true) {
        const double hold = state ? drop(rng) : fill(rng);
        if (t + hold >= horizon) {
            if (state) occupied += horizon - t;
            break;
        }
        if (state) occupied += hold;
        t += hold;
        state = !state;
        on_jump(t, state);
    }
    return occupied;
}

}  // namespace

double simulate_occupancy_ctmc(double lambda, double mu, double horizon, std::uint64_t seed) {
    require_rates(lambda, mu);
    if (!(horizon > 0.0)) throw ParameterError("horizon must be positive");
    Rng rng = make_stream(seed, 0);
    const double occupied = run_chain(lambda, mu, horizon, rng, [](double, bool) {});
    return occupied / horizon;
}

std::vector<OccupancyState> simulate_occupancy_path(double lambda, double mu, double horizon,
                                                    std::uint64_t seed) {
    require_rates(lambda, mu);
    if (!(horizon > 0.0)) throw ParameterError("horizon must be positive");
    Rng rng = make_stream(seed, 0);
    std::vector<OccupancyState> path{{false, 0.0}};
    run_chain(lambda, mu, horizon, rng,
              [&](double t, bool state) { path.push_back({state, t}); });
    return path;
}

bool occupancy_at(double lambda, double mu, double t, Rng& rng) {
    std::exponential_distribution<double> fill(lambda);
    std::exponential_distribution<double> drop(mu);
    double clock = 0.0;
    bool state = false;
    while (true) {
        clock += state ? drop(rng) : fill(rng);
        if (clock > t) return state;
        state = !state;
    }
}

std::uint64_t integer_sqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_perfect_square(std::uint64_t n) {
    const std::uint64_t r = integer_sqrt(n);
    return r * r == n;
}

std::uint64_t nearest_perfect_square(std::uint64_t n) {
    const std::uint64_t r = integer_sqrt(n);
    const std::uint64_t lo = r * r;
    const std::uint64_t hi = (r + 1) * (r + 1);
    return (n - lo <= hi - n) ? lo : hi;
}

}  // namespace icncap
