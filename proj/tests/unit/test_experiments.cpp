#include "doctest.h"

#include <cmath>
#include <ios>
#include <sstream>
#include <string>

#include "icncap/plot.hpp"
#include "icncap/report.hpp"
#include "icncap/settings.hpp"
#include "icncap/sweep.hpp"
#include "icncap/validation.hpp"

using namespace icncap;

namespace {

SweepSpec small_sweep(unsigned workers) {
    SweepSpec spec;
    spec.base.trials = 600;
    spec.base.epochs = 3;
    spec.base.seed = 19;
    spec.scenarios = {Scenario::GridPathwise, Scenario::GridFlooding, Scenario::RandomCellPathwise};
    spec.axis = SweepAxis::N;
    spec.points = {256, 1024};
    spec.workers = workers;
    return spec;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++count;
    return count;
}

CsvTable table_from(const std::string& text) {
    std::istringstream in(text);
    return parse_csv(in);
}

}  // namespace

TEST_CASE("csv parsing") {
    const auto t = table_from("a,b,scenario\n1,2.5,I\n3,nan,III\n");
    CHECK(t.rows.size() == 2);
    CHECK(t.number(0, "b") == 2.5);
    CHECK(std::isnan(t.number(1, "b")));
    CHECK(t.cell(1, "scenario") == "III");
    CHECK_THROWS_AS(t.column("zzz"), ParameterError);
    CHECK_THROWS_AS(t.number(0, "scenario"), ParameterError);
    CHECK_THROWS_AS(table_from(""), ParameterError);
    CHECK_THROWS_AS(table_from("a,b\n1,2,3\n"), ParameterError);
    CHECK_THROWS_AS(read_csv_file("/nonexistent/dir/table.csv"), IoError);
}

TEST_CASE("settings files") {
    std::istringstream in("# comment\nscenario = II\nn=2500\n\nratio=3\nmu=2\nseed=9\n");
    const Settings s = parse_settings(in);
    const ScenarioConfig c = make_config(s);
    CHECK(c.scenario == Scenario::GridFlooding);
    CHECK(c.n == 2500);
    CHECK(c.mu == 2.0);
    CHECK(c.lambda == 6.0);
    CHECK(c.seed == 9);

    std::istringstream bad_key("colour=blue\n");
    CHECK_THROWS_AS(parse_settings(bad_key), ParameterError);
    std::istringstream no_eq("n 100\n");
    CHECK_THROWS_AS(parse_settings(no_eq), ParameterError);
    CHECK_THROWS_AS(read_settings_file("/nonexistent/settings.cfg"), IoError);

    CHECK(parse_number_list("1, 2.5,1e3") == std::vector<double>{1.0, 2.5, 1000.0});
    CHECK_THROWS_AS(parse_number_list("1,,x"), ParameterError);

    for (const auto& [key, help] : settings_help()) CHECK_FALSE(help.empty());
}

TEST_CASE("sweep specs from settings") {
    std::istringstream in("scenario=I,III\naxis=ratio\npoints=1,10,100\nn=400\n");
    const SweepSpec spec = make_sweep_spec(parse_settings(in));
    CHECK(spec.scenarios.size() == 2);
    CHECK(spec.axis == SweepAxis::RatioLambdaMu);
    CHECK(spec.points.size() == 3);
    CHECK_NOTHROW(validate(spec));

    std::istringstream single("n=900\n");
    const SweepSpec one = make_sweep_spec(parse_settings(single));
    CHECK(one.points == std::vector<double>{900.0});
}

TEST_CASE("sweep validation") {
    SweepSpec spec = small_sweep(1);
    CHECK_NOTHROW(validate(spec));
    spec.points = {1024, 256};
    CHECK_THROWS_AS(validate(spec), ParameterError);
    spec.points = {};
    CHECK_THROWS_AS(validate(spec), ParameterError);
    spec.points = {1000};
    try {
        validate(spec);
        FAIL("non-square grid point accepted");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("1024") != std::string::npos);
    }
    spec.axis = SweepAxis::Rho;
    spec.points = {0.1, 1.0};
    CHECK_THROWS_AS(validate(spec), ParameterError);
    CHECK(parse_sweep_axis("ratio") == SweepAxis::RatioLambdaMu);
    CHECK_THROWS_AS(parse_sweep_axis("time"), ParameterError);
}

TEST_CASE("sweep output is stable across runs and worker counts") {
    const std::string first = sweep_csv(run_sweep(small_sweep(1)));
    CHECK(first == sweep_csv(run_sweep(small_sweep(1))));
    CHECK(first == sweep_csv(run_sweep(small_sweep(4))));

    const auto table = table_from(first);
    CHECK(table.header == sweep_columns());
    CHECK(table.rows.size() == 6);
    CHECK(table.cell(0, "scenario") == table.cell(1, "scenario"));
}

TEST_CASE("every sweep row satisfies the capacity identity") {
    SweepSpec spec = small_sweep(1);
    spec.axis = SweepAxis::RatioLambdaMu;
    spec.base.n = 1024;
    spec.points = {0.5, 7.0, 100.0};
    for (const SweepRow& r : run_sweep(spec)) {
        CHECK(r.mu == 1.0);
        const double lf = static_cast<double>(r.n) * (1.0 - r.rho) *
                          ((1.0 - r.p_s_analytic) * r.h_bar_exact + r.p_s_analytic * r.h_bar_s);
        CHECK(r.gamma_analytic * lf == doctest::Approx(r.transport_capacity).epsilon(1e-9));
    }
}

TEST_CASE("rho sweeps derive lambda from the occupancy") {
    SweepSpec spec = small_sweep(1);
    spec.scenarios = {Scenario::GridPathwise};
    spec.axis = SweepAxis::Rho;
    spec.base.n = 400;
    spec.points = {0.1, 0.5, 0.9};
    const auto rows = run_sweep(spec);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].rho == doctest::Approx(spec.points[i]).epsilon(1e-14));
}

TEST_CASE("fit report recovers planted scaling") {
    std::ostringstream csv;
    csv.precision(17);
    csv << "scenario,n,rho,gamma_analytic,gamma_sim\n";
    for (double n : {4096.0, 16384.0, 65536.0, 262144.0}) {
        csv << "GridPathwise," << n << ",0.875," << 3.0 / std::sqrt(n) << ',' << 2.9 / std::sqrt(n) << '\n';
    }
    for (double n : {1e3, 1e4, 1e5, 1e6}) {
        csv << "RandomCellPathwise," << n << ",0.875," << 2.0 / std::log(n) << ',' << 2.1 / std::log(n) << '\n';
    }
    const auto lines = fit_report(table_from(csv.str()));
    REQUIRE(lines.size() == 4);
    CHECK(lines[0].value == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(lines[0].within);
    CHECK(lines[2].value < 1e-12);
    CHECK(lines[3].within);

    std::ostringstream text;
    write_fit_report(lines, text);
    CHECK(text.str().find("OUTSIDE") == std::string::npos);
}

TEST_CASE("fit report needs four points") {
    const auto t = table_from("scenario,n,rho,gamma_analytic,gamma_sim\nI,100,0.5,1,1\nI,400,0.5,0.5,0.5\nI,900,0.5,0.3,0.3\n");
    CHECK_THROWS_AS(fit_report(t), ParameterError);
}

TEST_CASE("plots") {
    const std::string two_points =
        "scenario,n,lambda,mu,gamma_analytic,gamma_sim,total_traffic,b_content\n"
        "GridPathwise,100,7,1,0.1,0.11,90,1\n"
        "GridPathwise,10000,7,1,0.01,0.012,9000,1\n"
        "RandomCellPathwise,100,7,1,0.2,0.19,95,1\n"
        "RandomCellPathwise,10000,7,1,0.05,0.06,9100,1\n";
    const auto table = table_from(two_points);

    std::ostringstream gamma;
    emit_plot(table, PlotKind::GammaVsN, gamma);
    const std::string svg = gamma.str();
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count_of(svg, "class=\"marker\"") == 4);
    CHECK(count_of(svg, "class=\"series\"") == 2);
    CHECK(svg.find("(log)") != std::string::npos);

    std::ostringstream traffic;
    emit_plot(table, PlotKind::TrafficVsRatio, traffic);
    CHECK(traffic.str().find("class=\"reference\"") != std::string::npos);

    const auto empty = table_from("scenario,n,lambda,mu,gamma_analytic\n");
    std::ostringstream sink;
    CHECK_THROWS_AS(emit_plot(empty, PlotKind::GammaVsN, sink), ParameterError);
    const auto missing = table_from("scenario,n\nI,100\n");
    CHECK_THROWS_AS(emit_plot(missing, PlotKind::GammaVsN, sink), ParameterError);
    CHECK(parse_plot_kind("traffic-vs-ratio") == PlotKind::TrafficVsRatio);
    CHECK_THROWS_AS(parse_plot_kind("pie"), ParameterError);
}

TEST_CASE("built-in invariant suite passes") {
    for (const CheckResult& r : run_invariant_suite(1, 2)) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.passed);
    }
}
