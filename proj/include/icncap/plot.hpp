#pragma once

#include <iosfwd>
#include <string_view>

#include "icncap/report.hpp"

namespace icncap {

enum class PlotKind { GammaVsN, GammaVsRatio, TrafficVsRatio };

PlotKind parse_plot_kind(std::string_view text);

/// Renders one series per scenario as standalone SVG. An axis is logarithmic
/// when its data spans two decades or more. TrafficVsRatio also draws the
/// n * mu * B saturation level as a dashed reference line.
/// Throws ParameterError for an empty table or missing columns.
void emit_plot(const CsvTable& table, PlotKind kind, std::ostream& out);

}  // namespace icncap
