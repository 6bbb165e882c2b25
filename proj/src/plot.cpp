#include "icncap/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "icncap/model.hpp"

namespace icncap {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 80, kRight = 160, kTop = 30, kBottom = 60;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

struct Axis {
    double lo = 0, hi = 1;
    bool log = false;

    static Axis fit(const std::vector<double>& values) {
        Axis a;
        a.lo = *std::min_element(values.begin(), values.end());
        a.hi = *std::max_element(values.begin(), values.end());
        a.log = a.lo > 0.0 && a.hi / a.lo >= 100.0;
        if (a.log) {
            a.lo = std::pow(10.0, std::floor(std::log10(a.lo)));
            a.hi = std::pow(10.0, std::ceil(std::log10(a.hi)));
        } else if (a.hi == a.lo) {
            const double pad = a.lo == 0.0 ? 1.0 : std::abs(a.lo) * 0.1;
            a.lo -= pad;
            a.hi += pad;
        } else {
            const double pad = 0.05 * (a.hi - a.lo);
            a.lo -= pad;
            a.hi += pad;
        }
        return a;
    }

    double unit(double v) const {
        if (log) return (std::log10(v) - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
        return (v - lo) / (hi - lo);
    }

    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            for (double t = lo; t <= hi * 1.0001; t *= 10.0) out.push_back(t);
        } else {
            for (int i = 0; i <= 4; ++i) out.push_back(lo + (hi - lo) * i / 4.0);
        }
        return out;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Series {
    std::vector<double> x, y, sim;
    double reference = std::nan("");
};

}  // namespace

PlotKind parse_plot_kind(std::string_view text) {
    if (text == "gamma-vs-n" || text == "GammaVsN") return PlotKind::GammaVsN;
    if (text == "gamma-vs-ratio" || text == "GammaVsRatio") return PlotKind::GammaVsRatio;
    if (text == "traffic-vs-ratio" || text == "TrafficVsRatio") return PlotKind::TrafficVsRatio;
    throw ParameterError("unknown plot kind '" + std::string(text) + "'");
}

void emit_plot(const CsvTable& table, PlotKind kind, std::ostream& out) {
    if (table.rows.empty()) throw ParameterError("cannot plot an empty table");
    const char* y_col = kind == PlotKind::TrafficVsRatio ? "total_traffic" : "gamma_analytic";
    const char* x_label = kind == PlotKind::GammaVsN ? "n" : "lambda / mu";
    const char* y_label = kind == PlotKind::TrafficVsRatio ? "total traffic (bits/s)" : "gamma_max (bits/s)";
    for (const char* c : {"scenario", "n", "lambda", "mu", y_col}) table.column(c);
    const bool with_sim = kind != PlotKind::TrafficVsRatio && table.has_column("gamma_sim");
    if (kind == PlotKind::TrafficVsRatio) table.column("b_content");

    std::vector<std::string> order;
    std::map<std::string, Series> series;
    std::vector<double> xs, ys;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const std::string& name = table.cell(r, "scenario");
        if (!series.count(name)) order.push_back(name);
        Series& s = series[name];
        const double x = kind == PlotKind::GammaVsN ? table.number(r, "n")
                                                    : table.number(r, "lambda") / table.number(r, "mu");
        const double y = table.number(r, y_col);
        s.x.push_back(x);
        s.y.push_back(y);
        xs.push_back(x);
        ys.push_back(y);
        if (with_sim) {
            s.sim.push_back(table.number(r, "gamma_sim"));
            ys.push_back(s.sim.back());
        }
        if (kind == PlotKind::TrafficVsRatio) {
            s.reference = table.number(r, "n") * table.number(r, "mu") * table.number(r, "b_content");
            ys.push_back(s.reference);
        }
    }
    const Axis ax = Axis::fit(xs);
    const Axis ay = Axis::fit(ys);
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + ax.unit(x) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - ay.unit(y)) * ph; };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ax.ticks()) {
        out << "<line class=\"tick\" x1=\"" << px(t) << "\" y1=\"" << kTop + ph << "\" x2=\"" << px(t) << "\" y2=\""
            << kTop + ph + 5 << "\" stroke=\"black\"/>";
        out << "<text x=\"" << px(t) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    }
    for (double t : ay.ticks()) {
        out << "<line class=\"tick\" x1=\"" << kLeft - 5 << "\" y1=\"" << py(t) << "\" x2=\"" << kLeft << "\" y2=\""
            << py(t) << "\" stroke=\"black\"/>";
        out << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(t) + 4 << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
    }
    out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">" << x_label
        << (ax.log ? " (log)" : "") << "</text>\n";
    out << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">" << y_label
        << (ay.log ? " (log)" : "") << "</text>\n";

    for (std::size_t i = 0; i < order.size(); ++i) {
        const Series& s = series[order[i]];
        const char* color = kColors[i % 4];
        out << "<g class=\"series\" data-scenario=\"" << order[i] << "\">\n";
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (std::size_t k = 0; k < s.x.size(); ++k) out << (k ? " " : "") << px(s.x[k]) << ',' << py(s.y[k]);
        out << "\"/>\n";
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            out << "<circle class=\"marker\" cx=\"" << px(s.x[k]) << "\" cy=\"" << py(s.y[k]) << "\" r=\"3\" fill=\""
                << color << "\"/>\n";
        }
        for (std::size_t k = 0; k < s.sim.size(); ++k) {
            out << "<rect class=\"sim\" x=\"" << px(s.x[k]) - 3 << "\" y=\"" << py(s.sim[k]) - 3
                << "\" width=\"6\" height=\"6\" fill=\"none\" stroke=\"" << color << "\"/>\n";
        }
        if (!std::isnan(s.reference)) {
            out << "<line class=\"reference\" x1=\"" << kLeft << "\" y1=\"" << py(s.reference) << "\" x2=\""
                << kLeft + pw << "\" y2=\"" << py(s.reference) << "\" stroke=\"" << color
                << "\" stroke-dasharray=\"4 3\"/>\n";
        }
        out << "</g>\n";
        const double ly = kTop + 14 + 16.0 * i;
        out << "<circle cx=\"" << kLeft + pw + 14 << "\" cy=\"" << ly - 4 << "\" r=\"3\" fill=\"" << color << "\"/>";
        out << "<text x=\"" << kLeft + pw + 22 << "\" y=\"" << ly << "\">" << order[i] << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace icncap
