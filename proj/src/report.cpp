#include "icncap/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "icncap/analytics.hpp"
#include "icncap/model.hpp"

namespace icncap {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double coefficient_of_variation(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size() - 1);
    return std::sqrt(var) / mean;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

bool CsvTable::has_column(std::string_view name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
}

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ParameterError("missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
}

const std::string& CsvTable::cell(std::size_t row, std::string_view name) const {
    return rows.at(row).at(column(name));
}

double CsvTable::number(std::size_t row, std::string_view name) const {
    const std::string& text = cell(row, name);
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ParameterError("column '" + std::string(name) + "' holds a non-number: '" + text + "'");
    }
}

CsvTable parse_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (table.header.empty()) {
            table.header = split(line);
            continue;
        }
        auto cells = split(line);
        if (cells.size() != table.header.size()) {
            throw ParameterError("csv row " + std::to_string(table.rows.size() + 1) + " has " +
                                 std::to_string(cells.size()) + " cells, header has " +
                                 std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    if (table.header.empty()) throw ParameterError("csv input is empty");
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    return parse_csv(in);
}

std::vector<FitLine> fit_report(const CsvTable& table) {
    // Preserve first-appearance order of scenarios.
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::size_t>> groups;
    const std::size_t scol = table.column("scenario");
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string& s = table.rows[r][scol];
        if (!groups.count(s)) order.push_back(s);
        groups[s].push_back(r);
    }
    if (order.empty()) throw ParameterError("sweep table has no rows");

    std::vector<FitLine> lines;
    for (const std::string& name : order) {
        const Scenario scenario = parse_scenario(name);
        const auto& rows = groups[name];
        std::set<double> ns;
        std::set<double> rhos;
        for (std::size_t r : rows) {
            ns.insert(table.number(r, "n"));
            rhos.insert(table.number(r, "rho"));
        }
        if (ns.size() >= 2) {
            if (ns.size() < 4) {
                throw ParameterError("scenario " + name + ": need at least 4 n points, have " +
                                     std::to_string(ns.size()));
            }
            for (const char* column : {"gamma_analytic", "gamma_sim"}) {
                if (is_grid(scenario)) {
                    std::vector<std::pair<double, double>> samples;
                    for (std::size_t r : rows) samples.emplace_back(table.number(r, "n"), table.number(r, column));
                    const PowerFit fit = fit_power_exponent(samples);
                    lines.push_back({name, std::string("slope log ") + column + " vs log n", fit.exponent,
                                     fit.std_error, "-0.5 +/- 0.05", std::abs(fit.exponent + 0.5) <= 0.05});
                } else {
                    std::vector<double> scaled;
                    for (std::size_t r : rows) scaled.push_back(table.number(r, column) * std::log(table.number(r, "n")));
                    const double cv = coefficient_of_variation(scaled);
                    lines.push_back({name, std::string("CV of ") + column + " * log n", cv, 0.0, "< 0.1", cv < 0.1});
                }
            }
        } else if (rhos.size() >= 2) {
            if (rhos.size() < 4) {
                throw ParameterError("scenario " + name + ": need at least 4 rho points, have " +
                                     std::to_string(rhos.size()));
            }
            for (const char* column : {"h_bar_exact", "h_bar_uncond"}) {
                std::vector<std::pair<double, double>> samples;
                for (std::size_t r : rows) samples.emplace_back(table.number(r, "rho"), table.number(r, column));
                const PowerFit fit = fit_power_exponent(samples);
                FitLine line{name, std::string("exponent of ") + column + " vs rho", fit.exponent, fit.std_error, "", true};
                switch (scenario) {
                    case Scenario::GridPathwise:
                        line.expectation = "-1 (cache-dominated regime)";
                        break;
                    case Scenario::GridFlooding:
                        line.expectation = "compare -0.4646 (deviation " + fmt(fit.exponent + kFloodingHopExponent) + ")";
                        break;
                    case Scenario::RandomCellPathwise:
                        line.expectation = "0 (bounded hop count)";
                        break;
                }
                lines.push_back(line);
            }
        } else {
            throw ParameterError("scenario " + name + ": sweep has a single point; nothing to fit");
        }
    }
    return lines;
}

void write_fit_report(const std::vector<FitLine>& lines, std::ostream& out) {
    for (const FitLine& l : lines) {
        out << l.scenario << ": " << l.quantity << " = " << fmt(l.value);
        if (l.std_error > 0.0) out << " +/- " << fmt(l.std_error);
        out << "  [expect " << l.expectation << "]" << (l.within ? "" : "  OUTSIDE") << '\n';
    }
}

}  // namespace icncap
