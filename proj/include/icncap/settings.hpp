#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "icncap/model.hpp"
#include "icncap/sweep.hpp"

namespace icncap {

/// Flat key=value settings. Blank lines and '#' comments are ignored; later
/// keys override earlier ones.
using Settings = std::map<std::string, std::string>;

/// Throws ParameterError on a line without '=' or with an unknown key.
Settings parse_settings(std::istream& in);
/// Throws IoError when the file cannot be opened.
Settings read_settings_file(const std::string& path);

/// Keys understood by the tools, with their defaults and meaning.
const std::vector<std::pair<std::string, std::string>>& settings_help();

/// Applies scenario-level keys (n, lambda, mu, ratio, w, b, seed, trials,
/// epochs, mode, cell_scale, scenario). "ratio" sets lambda = ratio * mu.
ScenarioConfig make_config(const Settings& settings);

/// Builds a sweep from the scenario keys plus scenario (comma list), axis,
/// points (comma list) and workers. Without points the sweep has the single
/// point taken from the base configuration.
SweepSpec make_sweep_spec(const Settings& settings);

std::vector<double> parse_number_list(const std::string& text);

}  // namespace icncap
