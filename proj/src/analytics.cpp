#include "icncap/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "icncap/topology.hpp"

namespace icncap {

namespace {

void require_rho(double rho) {
    if (!(rho > 0.0)) throw ParameterError("rho must be positive (hop sums are undefined at rho = 0)");
    if (rho > 1.0) throw ParameterError("rho must not exceed 1");
}

void require_n(std::uint64_t n) {
    if (n < 4) throw ParameterError("n must be at least 4");
}

double log_n(std::uint64_t n) { return std::log(static_cast<double>(n)); }

std::uint64_t grid_terms(std::uint64_t n) { return integer_sqrt(n); }

std::uint64_t cell_terms(std::uint64_t n) { return static_cast<std::uint64_t>(cell_grid_side(n)); }

int grid_side_checked(std::uint64_t n) {
    if (!is_perfect_square(n)) {
        throw ParameterError("grid scenarios need a perfect-square n, got " + std::to_string(n));
    }
    return static_cast<int>(integer_sqrt(n));
}

// q^e with q^0 = 1 also at q = 0.
double qpow(double q, double e) { return e == 0.0 ? 1.0 : std::pow(q, e); }

// Probability mass of each hop value h = 1..cap, plus the accumulated sums.
struct HopSums {
    double weighted = 0.0;  // sum h P(h)
    double mass = 0.0;      // sum P(h)
};

HopSums hop_sums(Scenario scenario, double rho, std::uint64_t n, std::uint64_t cap) {
    const double q = 1.0 - rho;
    HopSums s;
    switch (scenario) {
        case Scenario::GridPathwise:
            for (std::uint64_t h = 1; h <= cap; ++h) {
                const double p = rho * qpow(q, static_cast<double>(h - 1));
                if (p == 0.0) break;
                s.weighted += static_cast<double>(h) * p;
                s.mass += p;
            }
            break;
        case Scenario::GridFlooding:
            for (std::uint64_t h = 1; h <= cap; ++h) {
                const double hd = static_cast<double>(h);
                // prod_{k=1}^{h-1} (1-rho)^(4k) = (1-rho)^(2h(h-1))
                const double survive = qpow(q, 2.0 * hd * (hd - 1.0));
                if (survive == 0.0) break;
                const double p = (1.0 - qpow(q, 4.0 * hd)) * survive;
                s.weighted += hd * p;
                s.mass += p;
            }
            break;
        case Scenario::RandomCellPathwise: {
            const double L = log_n(n);
            const double first = 1.0 - qpow(q, 2.0 * L);
            s.weighted = first;
            s.mass = first;
            const double fresh = 1.0 - qpow(q, L);
            for (std::uint64_t h = 2; h <= cap; ++h) {
                const double hd = static_cast<double>(h);
                const double p = qpow(q, hd * L) * fresh;
                if (p == 0.0) break;
                s.weighted += hd * p;
                s.mass += p;
            }
            break;
        }
    }
    return s;
}

std::uint64_t default_cap(Scenario scenario, std::uint64_t n) {
    return is_grid(scenario) ? grid_terms(n) : cell_terms(n);
}

}  // namespace

std::string_view to_string(Regime r) {
    return r == Regime::CacheDominated ? "cache-dominated" : "server-dominated";
}

int cell_grid_side(std::uint64_t n) {
    require_n(n);
    const double r = std::sqrt(log_n(n) / static_cast<double>(n));
    return std::max(1, static_cast<int>(std::floor(1.0 / r)));
}

double expected_hops_exact(Scenario scenario, double rho, std::uint64_t n) {
    require_rho(rho);
    require_n(n);
    return hop_sums(scenario, rho, n, default_cap(scenario, n)).weighted;
}

double expected_hops_with_cap(Scenario scenario, double rho, std::uint64_t n, std::uint64_t cap) {
    require_rho(rho);
    require_n(n);
    if (cap < 1) throw ParameterError("summation cap must be at least 1");
    return hop_sums(scenario, rho, n, cap).weighted;
}

double expected_hops_normalized(Scenario scenario, double rho, std::uint64_t n) {
    require_rho(rho);
    require_n(n);
    const HopSums s = hop_sums(scenario, rho, n, default_cap(scenario, n));
    return s.weighted / s.mass;
}

double pathwise_hops_closed_form(double rho, std::uint64_t terms) {
    require_rho(rho);
    const double q = 1.0 - rho;
    const double big_h = static_cast<double>(terms);
    // sum_{h=1}^{H} h rho q^(h-1) = (1 - q^H (1 + H rho)) / rho
    if (q == 0.0) return 1.0;
    const double log_q_h = big_h * std::log1p(-rho);
    return (-std::expm1(log_q_h) - big_h * rho * std::exp(log_q_h)) / rho;
}

double expected_hops_asymptotic(Scenario scenario, double rho) {
    require_rho(rho);
    switch (scenario) {
        case Scenario::GridPathwise: return 1.0 / rho;
        case Scenario::GridFlooding: return std::pow(rho, -kFloodingHopExponent);
        case Scenario::RandomCellPathwise: return 1.0;
    }
    return 0.0;
}

ServerProbability server_probability(Scenario scenario, double rho, std::uint64_t n) {
    require_rho(rho);
    require_n(n);
    const double q = 1.0 - rho;
    const double nn = static_cast<double>(n);
    ServerProbability out;
    if (is_grid(scenario)) {
        const int side = grid_side_checked(n);
        const int h_max = 2 * (side / 2);
        double half = 0.0;
        double full = 0.0;
        for (int k = 1; k <= h_max; ++k) {
            const double term = 4.0 * k * qpow(q, k);
            full += term;
            if (k <= h_max / 2) half += term;
        }
        const double lower = (1.0 + half) / nn;
        const double upper = (1.0 + full) / nn;
        if (scenario == Scenario::GridPathwise) {
            out.lower = lower;
            out.upper = upper;
            out.value = std::min(1.0, std::sqrt(lower * upper));
        } else {
            out.lower = 0.0;
            out.upper = upper;
            out.value = std::min(1.0, upper);
            out.upper_bound_only = true;
        }
        return out;
    }
    const double L = log_n(n);
    const std::uint64_t cap = cell_terms(n);
    double sum = 1.0 + 5.0 * L * q;
    for (std::uint64_t h = 2; h <= cap; ++h) {
        const double hd = static_cast<double>(h);
        sum += 4.0 * hd * L * qpow(q, (hd - 1.0) * L);
    }
    const double value = std::clamp(sum / nn, 0.0, 1.0);
    out.lower = out.upper = out.value = value;
    return out;
}

double server_probability_asymptotic(Scenario scenario, double rho, std::uint64_t n) {
    require_rho(rho);
    require_n(n);
    const double nn = static_cast<double>(n);
    if (is_grid(scenario)) return (2.0 - rho) * (2.0 - rho) / (nn * rho * rho);
    return (2.0 - rho) * log_n(n) / nn;
}

double transport_capacity(Scenario scenario, std::uint64_t n, double w_bandwidth) {
    require_n(n);
    if (!(w_bandwidth > 0.0)) throw ParameterError("w_bandwidth must be positive");
    const double nn = static_cast<double>(n);
    return is_grid(scenario) ? w_bandwidth * std::sqrt(nn) : w_bandwidth * nn / log_n(n);
}

double mean_server_hops(Scenario scenario, std::uint64_t n) {
    require_n(n);
    if (is_grid(scenario)) return grid_mean_server_distance(grid_side_checked(n));
    return grid_mean_server_distance(cell_grid_side(n));
}

double CapacityBreakdown::load_factor(std::uint64_t n) const {
    return static_cast<double>(n) * (1.0 - rho) * ((1.0 - p_s) * h_bar + p_s * h_bar_s);
}

CapacityBreakdown max_throughput(Scenario scenario, std::uint64_t n, double rho, double w_bandwidth) {
    if (!(rho > 0.0) || !(rho < 1.0)) {
        throw ParameterError("max_throughput needs 0 < rho < 1 (use no_cache_baseline for rho = 0)");
    }
    CapacityBreakdown out;
    out.rho = rho;
    out.h_bar = expected_hops_exact(scenario, rho, n);
    out.h_bar_s = mean_server_hops(scenario, n);
    out.p_s = server_probability(scenario, rho, n).value;
    out.transport_capacity = transport_capacity(scenario, n, w_bandwidth);
    out.gamma_max = out.transport_capacity / out.load_factor(n);
    out.regime = rho < occupancy_threshold(scenario, n) ? Regime::ServerDominated
                                                        : Regime::CacheDominated;
    return out;
}

double no_cache_baseline(Scenario scenario, std::uint64_t n, double w_bandwidth) {
    require_n(n);
    if (!(w_bandwidth > 0.0)) throw ParameterError("w_bandwidth must be positive");
    const double nn = static_cast<double>(n);
    return is_grid(scenario) ? w_bandwidth / nn : w_bandwidth / std::sqrt(nn * log_n(n));
}

double supportable_ratio_bound(Scenario scenario, std::uint64_t n) {
    if (n < 16) throw ParameterError("supportable_ratio_bound needs n >= 16 so that log log log n > 0");
    const double l1 = log_n(n);
    const double l2 = std::log(l1);
    const double l3 = std::log(l2);
    if (is_grid(scenario)) return static_cast<double>(n) * l2 / l1;
    return l1 * l3 / l2;
}

double serving_probability(std::uint64_t n, double rho, ServingRelation relation, int hops) {
    require_n(n);
    if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("rho must lie in [0, 1]");
    const double L = log_n(n);
    const double q = 1.0 - rho;
    switch (relation) {
        case ServingRelation::SameCell: return 1.0 / L;
        case ServingRelation::OffPath: return 0.0;
        case ServingRelation::OnPath: {
            if (hops < 1) throw ParameterError("on-path hop count must be at least 1");
            if (hops == 1) return qpow(q, L) / L;
            const double limit = std::sqrt(static_cast<double>(n) / L);
            if (static_cast<double>(hops) > limit) return 0.0;
            return qpow(q, hops + L) / L;
        }
    }
    return 0.0;
}

ServingProbabilityTable serving_probability_table(std::uint64_t n, double rho) {
    ServingProbabilityTable t;
    t.same_cell = serving_probability(n, rho, ServingRelation::SameCell);
    t.one_hop_on_path = serving_probability(n, rho, ServingRelation::OnPath, 1);
    t.two_hops_on_path = serving_probability(n, rho, ServingRelation::OnPath, 2);
    t.off_path = serving_probability(n, rho, ServingRelation::OffPath);
    t.max_path_hops = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n) / log_n(n))));
    return t;
}

PowerFit fit_power_exponent(std::span<const std::pair<double, double>> samples) {
    if (samples.size() < 3) throw ParameterError("power fit needs at least 3 samples");
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [x, y] : samples) {
        if (!(x > 0.0) || !(y > 0.0)) throw ParameterError("power fit needs positive x and y");
        xs.push_back(std::log(x));
        ys.push_back(std::log(y));
    }
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ParameterError("power fit needs distinct x values");
    }
    const double m = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    PowerFit fit;
    fit.exponent = sxy / sxx;
    fit.log_prefactor = my - fit.exponent * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.log_prefactor + fit.exponent * xs[i]);
        ssr += r * r;
    }
    fit.std_error = std::sqrt(std::max(0.0, ssr / (m - 2.0)) / sxx);
    return fit;
}

double total_request_rate(std::uint64_t n, double lambda, double mu) {
    const double rho = steady_state_occupancy(lambda, mu);
    return lambda * static_cast<double>(n) * (1.0 - rho);
}

double total_traffic(std::uint64_t n, double lambda, double mu, double b_content, Scenario scenario) {
    if (!(b_content > 0.0)) throw ParameterError("b_content must be positive");
    const double rho = steady_state_occupancy(lambda, mu);
    const double h_bar = expected_hops_exact(scenario, rho, n);
    const double h_bar_s = mean_server_hops(scenario, n);
    const double p_s = server_probability(scenario, rho, n).value;
    return b_content * total_request_rate(n, lambda, mu) * ((1.0 - p_s) * h_bar + p_s * h_bar_s);
}

}  // namespace icncap
