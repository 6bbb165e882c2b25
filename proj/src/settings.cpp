#include "icncap/settings.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

namespace icncap {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used == value.size()) return v;
    } catch (const std::exception&) {
    }
    throw ParameterError("setting '" + key + "' expects a number, got '" + value + "'");
}

std::uint64_t to_count(const std::string& key, const std::string& value) {
    const double v = to_double(key, value);
    if (v < 0 || v != static_cast<double>(static_cast<std::uint64_t>(v))) {
        throw ParameterError("setting '" + key + "' expects a non-negative integer, got '" + value + "'");
    }
    return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& settings_help() {
    static const std::vector<std::pair<std::string, std::string>> keys = {
        {"scenario", "I | II | III (comma list for sweeps), default I"},
        {"n", "node count, default 10000 (perfect square on the grid)"},
        {"lambda", "request rate, default 7"},
        {"mu", "cache drop rate, default 1"},
        {"ratio", "lambda/mu; sets lambda = ratio * mu"},
        {"w", "per-node channel rate W, default 1"},
        {"b", "content size B, default 1"},
        {"seed", "RNG seed, default 1"},
        {"trials", "discovery trials per point, default 10000"},
        {"epochs", "request epochs per point, default 10"},
        {"mode", "idealized | empirical cell population, default idealized"},
        {"cell_scale", "cell side / sqrt(log n / n), default 1"},
        {"axis", "sweep axis: n | ratio | rho, default n"},
        {"points", "comma list of sweep values"},
        {"workers", "worker threads, 0 = all cores, default 1"},
        {"out", "output path, '-' for stdout"},
    };
    return keys;
}

Settings parse_settings(std::istream& in) {
    Settings out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParameterError("config line " + std::to_string(number) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const auto& known = settings_help();
        if (std::none_of(known.begin(), known.end(), [&](const auto& k) { return k.first == key; })) {
            throw ParameterError("config line " + std::to_string(number) + ": unknown key '" + key + "'");
        }
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

Settings read_settings_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    return parse_settings(in);
}

ScenarioConfig make_config(const Settings& s) {
    ScenarioConfig c;
    auto get = [&](const char* key) -> const std::string* {
        const auto it = s.find(key);
        return it == s.end() ? nullptr : &it->second;
    };
    if (auto v = get("scenario")) c.scenario = parse_scenario(split_list(*v).empty() ? *v : split_list(*v).front());
    if (auto v = get("n")) c.n = to_count("n", *v);
    if (auto v = get("lambda")) c.lambda = to_double("lambda", *v);
    if (auto v = get("mu")) c.mu = to_double("mu", *v);
    if (auto v = get("ratio")) c.lambda = to_double("ratio", *v) * c.mu;
    if (auto v = get("w")) c.w_bandwidth = to_double("w", *v);
    if (auto v = get("b")) c.b_content = to_double("b", *v);
    if (auto v = get("seed")) c.seed = to_count("seed", *v);
    if (auto v = get("trials")) c.trials = to_count("trials", *v);
    if (auto v = get("epochs")) c.epochs = to_count("epochs", *v);
    if (auto v = get("mode")) c.cell_mode = parse_cell_mode(*v);
    if (auto v = get("cell_scale")) c.cell_scale = to_double("cell_scale", *v);
    return c;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    for (const std::string& item : split_list(text)) out.push_back(to_double("points", item));
    return out;
}

SweepSpec make_sweep_spec(const Settings& s) {
    SweepSpec spec;
    spec.base = make_config(s);
    const auto scen = s.find("scenario");
    if (scen == s.end()) {
        spec.scenarios = {spec.base.scenario};
    } else {
        for (const std::string& item : split_list(scen->second)) spec.scenarios.push_back(parse_scenario(item));
    }
    if (const auto it = s.find("axis"); it != s.end()) spec.axis = parse_sweep_axis(it->second);
    if (const auto it = s.find("workers"); it != s.end()) {
        spec.workers = static_cast<unsigned>(to_count("workers", it->second));
    }
    if (const auto it = s.find("points"); it != s.end()) {
        spec.points = parse_number_list(it->second);
    } else {
        switch (spec.axis) {
            case SweepAxis::N: spec.points = {static_cast<double>(spec.base.n)}; break;
            case SweepAxis::RatioLambdaMu: spec.points = {spec.base.lambda / spec.base.mu}; break;
            case SweepAxis::Rho: spec.points = {spec.base.rho()}; break;
        }
    }
    return spec;
}

}  // namespace icncap
