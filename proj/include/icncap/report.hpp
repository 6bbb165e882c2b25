#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace icncap {

/// Comma-separated table with a header row. Cells are unquoted.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    bool has_column(std::string_view name) const;
    /// Throws ParameterError for a missing column.
    std::size_t column(std::string_view name) const;
    const std::string& cell(std::size_t row, std::string_view name) const;
    double number(std::size_t row, std::string_view name) const;
};

/// Throws ParameterError on an empty input or ragged rows.
CsvTable parse_csv(std::istream& in);
/// Throws IoError when the file cannot be opened.
CsvTable read_csv_file(const std::string& path);

struct FitLine {
    std::string scenario;
    std::string quantity;
    double value = 0.0;
    double std_error = 0.0;
    std::string expectation;
    bool within = true;
};

/// Scaling checks per scenario in a sweep table:
///   n axis, grid:    slope of log gamma vs log n (expect -1/2)
///   n axis, random:  coefficient of variation of gamma * log n (expect < 0.1)
///   rho axis:        exponent of h_bar vs rho (flooding: compare with 0.4646)
/// Throws ParameterError when a scenario has fewer than 4 points on its axis.
std::vector<FitLine> fit_report(const CsvTable& table);

void write_fit_report(const std::vector<FitLine>& lines, std::ostream& out);

}  // namespace icncap
