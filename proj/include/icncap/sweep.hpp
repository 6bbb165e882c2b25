#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "icncap/model.hpp"

namespace icncap {

enum class SweepAxis { N, RatioLambdaMu, Rho };

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view text);

struct SweepSpec {
    ScenarioConfig base;
    std::vector<Scenario> scenarios;
    SweepAxis axis = SweepAxis::N;
    std::vector<double> points;
    unsigned workers = 1;
};

/// Throws ParameterError for empty or non-increasing points, non-square grid
/// sizes (with the nearest valid size in the message), and out-of-range values.
void validate(const SweepSpec& spec);

/// One scenario at one sweep point: simulation estimates next to the
/// closed-form values they are checked against.
struct SweepRow {
    Scenario scenario = Scenario::GridPathwise;
    std::uint64_t n = 0;
    double lambda = 0.0;
    double mu = 0.0;
    double rho = 0.0;
    double h_bar_cond = 0.0;
    double h_bar_uncond = 0.0;
    double p_s = 0.0;
    double max_load = 0.0;
    double gamma_sim = 0.0;
    double gamma_analytic = 0.0;
    double h_bar_cond_ci = 0.0;
    double h_bar_uncond_ci = 0.0;
    double p_s_ci = 0.0;
    double gamma_sim_ci = 0.0;
    double h_bar_exact = 0.0;
    double p_s_analytic = 0.0;
    double h_bar_s = 0.0;
    double transport_capacity = 0.0;
    double gamma_baseline = 0.0;
    double occupancy_threshold = 0.0;
    std::string regime;
    double ratio_bound = 0.0;  // NaN when n < 16
    double server_load = 0.0;
    double relay_load = 0.0;
    double total_request_rate = 0.0;
    double total_traffic = 0.0;
    double w_bandwidth = 0.0;
    double b_content = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t epochs = 0;
    std::uint64_t seed = 0;
};

/// Scenario-major, point-minor rows. Deterministic for a fixed spec and seed,
/// whatever the worker count.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Column order of the CSV output.
const std::vector<std::string>& sweep_columns();

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace icncap
