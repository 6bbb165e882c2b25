#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "icncap/model.hpp"

namespace icncap {

// Finite-n evaluation of the hop-count, server-probability and capacity
// expressions. Every order-of-magnitude constant is 1.

enum class Regime { CacheDominated, ServerDominated };

std::string_view to_string(Regime r);

/// Mean discovered-source distance as the truncated sum:
///   pathwise grid:  sum_{h=1}^{sqrt n} h rho (1-rho)^(h-1)
///   flooding grid:  sum_{h=1}^{sqrt n} h (1-(1-rho)^(4h)) (1-rho)^(2h(h-1))
///   random cells:   1-(1-rho)^(2L) + sum_{h=2}^{1/r(n)} h (1-rho)^(hL) (1-(1-rho)^L),  L = log n
/// Throws ParameterError unless 0 < rho <= 1 and n >= 4.
double expected_hops_exact(Scenario scenario, double rho, std::uint64_t n);

/// Same sums with an explicit upper summation limit instead of the one implied by n
/// (the random-cell sum still takes L = log n from `n`).
double expected_hops_with_cap(Scenario scenario, double rho, std::uint64_t n, std::uint64_t cap);

/// The truncated sum divided by its total probability mass.
double expected_hops_normalized(Scenario scenario, double rho, std::uint64_t n);

/// Closed form of the pathwise sum with `terms` terms.
double pathwise_hops_closed_form(double rho, std::uint64_t terms);

/// Leading-order value: 1/rho, rho^-0.4646, or 1.
double expected_hops_asymptotic(Scenario scenario, double rho);

inline constexpr double kFloodingHopExponent = 0.4646;

struct ServerProbability {
    double lower = 0.0;
    double upper = 0.0;
    double value = 0.0;            // point value used downstream, clamped to [0, 1]
    bool upper_bound_only = false;  // flooding: only an upper bound is known
};

/// Pathwise grid: bracket (1 + sum_{k<=h_max/2} 4k(1-rho)^k)/n .. (1 + sum_{k<=h_max} ...)/n,
///   point value = geometric mean.
/// Flooding grid: the pathwise upper value, flagged as a bound.
/// Random cells: (1 + 5L(1-rho) + sum_{h=2}^{1/r(n)} 4hL(1-rho)^((h-1)L))/n, clamped.
ServerProbability server_probability(Scenario scenario, double rho, std::uint64_t n);

/// Asymptotic server probability: (2-rho)^2/(n rho^2) on the grid, (2-rho) log n / n for random.
double server_probability_asymptotic(Scenario scenario, double rho, std::uint64_t n);

/// W sqrt(n) on the grid, W / r(n)^2 = W n / log n for random cells.
double transport_capacity(Scenario scenario, std::uint64_t n, double w_bandwidth);

/// Mean hop distance to the server: lattice mean for the grid, mean cell
/// distance over the floor(1/r(n)) cell grid for random cells.
double mean_server_hops(Scenario scenario, std::uint64_t n);

/// Cell grid side floor(1/r(n)), r(n) = sqrt(log n / n).
int cell_grid_side(std::uint64_t n);

struct CapacityBreakdown {
    double rho = 0.0;
    double h_bar = 0.0;
    double h_bar_s = 0.0;
    double p_s = 0.0;
    double transport_capacity = 0.0;
    double gamma_max = 0.0;
    Regime regime = Regime::CacheDominated;

    /// n (1-rho) ((1-p_s) h_bar + p_s h_bar_s): hop-weighted concurrent downloads.
    double load_factor(std::uint64_t n) const;
};

/// gamma_max = transport capacity / [n (1-rho) ((1-p_s) h_bar + p_s h_bar_s)].
/// Throws ParameterError for rho outside (0, 1).
CapacityBreakdown max_throughput(Scenario scenario, std::uint64_t n, double rho, double w_bandwidth);

/// Cacheless rate: W/n on the grid, W/sqrt(n log n) for random cells.
double no_cache_baseline(Scenario scenario, std::uint64_t n, double w_bandwidth);

/// Largest supportable lambda/mu order: n loglog n / log n (grid),
/// log n logloglog n / loglog n (random). Throws for n < 16.
double supportable_ratio_bound(Scenario scenario, std::uint64_t n);

enum class ServingRelation { SameCell, OnPath, OffPath };

/// Probability that a holder serves a given requester in the random-cell model.
/// `hops` is only read for OnPath.
double serving_probability(std::uint64_t n, double rho, ServingRelation relation, int hops = 1);

struct ServingProbabilityTable {
    double same_cell = 0.0;
    double one_hop_on_path = 0.0;
    double two_hops_on_path = 0.0;
    double off_path = 0.0;
    int max_path_hops = 0;  // beyond this the on-path case is zero
};

ServingProbabilityTable serving_probability_table(std::uint64_t n, double rho);

struct PowerFit {
    double exponent = 0.0;
    double std_error = 0.0;
    double log_prefactor = 0.0;
};

/// Least-squares slope of log y against log x. Needs >= 3 samples, x and y
/// positive, x values distinct.
PowerFit fit_power_exponent(std::span<const std::pair<double, double>> samples);

/// lambda n (1 - rho).
double total_request_rate(std::uint64_t n, double lambda, double mu);

/// B lambda n (1-rho) ((1-p_s) h_bar + p_s h_bar_s).
double total_traffic(std::uint64_t n, double lambda, double mu, double b_content, Scenario scenario);

}  // namespace icncap
