#include "floodecon/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace floodecon {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config line " + std::to_string(line) + ": bad number for '" + key + "': " + value);
    }
}

long long parse_int(const std::string& key, const std::string& value, int line) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config line " + std::to_string(line) + ": bad integer for '" + key + "': " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw std::runtime_error("config line " + std::to_string(line) + ": bad boolean for '" + key + "': " + value);
}

std::string resolve_path(const std::string& value, const std::string& origin) {
    std::filesystem::path p(value);
    if (p.is_absolute() || origin.empty()) return value;
    const auto base = std::filesystem::path(origin).parent_path();
    return (base / p).string();
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
    ScenarioConfig cfg;
    cfg.grids.clear();

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config line " + std::to_string(line_no) + ": empty key");
        if (value.empty())
            throw std::runtime_error("config line " + std::to_string(line_no) + ": empty value for '" + key + "'");

        if (key == "steps") cfg.steps = static_cast<int>(parse_int(key, value, line_no));
        else if (key == "dt_years") cfg.dt_years = parse_double(key, value, line_no);
        else if (key == "n_firms") cfg.n_firms = static_cast<int>(parse_int(key, value, line_no));
        else if (key == "n_households") cfg.n_households = static_cast<int>(parse_int(key, value, line_no));
        else if (key == "commodity_fraction") cfg.commodity_fraction = parse_double(key, value, line_no);
        else if (key == "suppliers_per_manufacturer")
            cfg.suppliers_per_manufacturer = static_cast<int>(parse_int(key, value, line_no));
        else if (key == "hazard_enabled") cfg.hazard_enabled = parse_bool(key, value, line_no);
        else if (key == "evolution_enabled") cfg.evolution_enabled = parse_bool(key, value, line_no);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value, line_no));
        else if (key == "grid") cfg.grids.push_back({1, resolve_path(value, origin)});
        else if (key == "grid_epoch") {
            const auto colon = value.find(':');
            if (colon == std::string::npos)
                throw std::runtime_error("config line " + std::to_string(line_no) +
                                         ": grid_epoch expects '<start_step>:<path>'");
            const int start = static_cast<int>(parse_int(key, trim(value.substr(0, colon)), line_no));
            const std::string path = trim(value.substr(colon + 1));
            if (path.empty())
                throw std::runtime_error("config line " + std::to_string(line_no) + ": grid_epoch missing path");
            cfg.grids.push_back({start, resolve_path(path, origin)});
        } else if (key == "impact_curve") cfg.impact_curve_path = resolve_path(value, origin);
        else if (key == "a_labor") cfg.coefficients.a_labor = parse_double(key, value, line_no);
        else if (key == "a_capital") cfg.coefficients.a_capital = parse_double(key, value, line_no);
        else if (key == "a_input") cfg.coefficients.a_input = parse_double(key, value, line_no);
        else if (key == "firm_money") cfg.firm_money = parse_double(key, value, line_no);
        else if (key == "firm_capital") cfg.firm_capital = parse_double(key, value, line_no);
        else if (key == "firm_output_inventory") cfg.firm_output_inventory = parse_double(key, value, line_no);
        else if (key == "firm_input_inventory") cfg.firm_input_inventory = parse_double(key, value, line_no);
        else if (key == "household_money") cfg.household_money = parse_double(key, value, line_no);
        else if (key == "initial_price") cfg.initial_price = parse_double(key, value, line_no);
        else if (key == "initial_wage") cfg.initial_wage = parse_double(key, value, line_no);
        else if (key == "recovery_steps") cfg.recovery_steps = static_cast<int>(parse_int(key, value, line_no));
        else if (key == "spend_fraction") cfg.spend_fraction = parse_double(key, value, line_no);
        else if (key == "entry_money") cfg.entry_money = parse_double(key, value, line_no);
        else if (key == "entry_capital") cfg.entry_capital = parse_double(key, value, line_no);
        else if (key == "output_dir") cfg.output_dir = resolve_path(value, origin);
        else
            throw std::runtime_error("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }

    std::stable_sort(cfg.grids.begin(), cfg.grids.end(),
                     [](const GridEpoch& a, const GridEpoch& b) { return a.start_step < b.start_step; });
    return cfg;
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

}  // namespace floodecon
