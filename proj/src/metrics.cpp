#include "floodecon/metrics.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace floodecon {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

const char* kMetricsCsvHeader =
    "step,mean_production,mean_production_commodity,mean_production_manufacturer,"
    "mean_firm_money,mean_firm_money_commodity,mean_firm_money_manufacturer,"
    "mean_household_money,mean_labor_supplied,mean_price,mean_wage,unemployment_rate,"
    "share_labor_limited,share_capital_limited,share_input_limited,"
    "failed_firms,replaced_firms,endowment_inflow,capital_outflow,removal_outflow";

void write_metrics_csv(const std::string& path, const std::vector<MetricsFrame>& series) {
    std::ofstream out(path, std::ios::binary);  // binary: no platform newline surprises
    if (!out) throw std::runtime_error("metrics: cannot write " + path);
    out << kMetricsCsvHeader << "\n";
    for (const MetricsFrame& m : series) {
        out << m.step << ',' << format_double(m.mean_production) << ','
            << format_double(m.mean_production_commodity) << ','
            << format_double(m.mean_production_manufacturer) << ',' << format_double(m.mean_firm_money) << ','
            << format_double(m.mean_firm_money_commodity) << ','
            << format_double(m.mean_firm_money_manufacturer) << ',' << format_double(m.mean_household_money)
            << ',' << format_double(m.mean_labor_supplied) << ',' << format_double(m.mean_price) << ','
            << format_double(m.mean_wage) << ',' << format_double(m.unemployment_rate) << ','
            << format_double(m.share_labor_limited) << ',' << format_double(m.share_capital_limited) << ','
            << format_double(m.share_input_limited) << ',' << m.failed_firms << ',' << m.replaced_firms << ','
            << format_double(m.endowment_inflow) << ',' << format_double(m.capital_outflow) << ','
            << format_double(m.removal_outflow) << "\n";
    }
}

namespace {

nlohmann::ordered_json config_to_json(const ScenarioConfig& c) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json grids = nlohmann::ordered_json::array();
    for (const auto& g : c.grids) grids.push_back({{"start_step", g.start_step}, {"path", g.path}});
    j["grids"] = grids;
    j["impact_curve"] = c.impact_curve_path;
    j["steps"] = c.steps;
    j["dt_years"] = c.dt_years;
    j["n_firms"] = c.n_firms;
    j["n_households"] = c.n_households;
    j["commodity_fraction"] = c.commodity_fraction;
    j["suppliers_per_manufacturer"] = c.suppliers_per_manufacturer;
    j["hazard_enabled"] = c.hazard_enabled;
    j["evolution_enabled"] = c.evolution_enabled;
    j["seed"] = c.seed;
    j["a_labor"] = c.coefficients.a_labor;
    j["a_capital"] = c.coefficients.a_capital;
    j["a_input"] = c.coefficients.a_input;
    j["firm_money"] = c.firm_money;
    j["firm_capital"] = c.firm_capital;
    j["firm_output_inventory"] = c.firm_output_inventory;
    j["firm_input_inventory"] = c.firm_input_inventory;
    j["household_money"] = c.household_money;
    j["initial_price"] = c.initial_price;
    j["initial_wage"] = c.initial_wage;
    j["recovery_steps"] = c.recovery_steps;
    j["spend_fraction"] = c.spend_fraction;
    j["entry_money"] = c.entry_money;
    j["entry_capital"] = c.entry_capital;
    return j;
}

}  // namespace

void write_summary_json(const std::string& path, const WorldState& state) {
    nlohmann::ordered_json j;
    j["version"] = kArtifactVersion;
    j["seed"] = state.config.seed;
    j["steps"] = state.config.steps;
    j["hazard_enabled"] = state.config.hazard_enabled;
    j["evolution_enabled"] = state.config.evolution_enabled;

    nlohmann::ordered_json final_step;
    if (!state.metrics.empty()) {
        const MetricsFrame& m = state.metrics.back();
        final_step["step"] = m.step;
        final_step["mean_production"] = m.mean_production;
        final_step["mean_firm_money"] = m.mean_firm_money;
        final_step["mean_household_money"] = m.mean_household_money;
        final_step["mean_price"] = m.mean_price;
        final_step["mean_wage"] = m.mean_wage;
        final_step["unemployment_rate"] = m.unemployment_rate;
    }
    j["final_step"] = final_step;

    double price_sum = 0.0, production_sum = 0.0;
    int failed_total = 0, replaced_total = 0;
    for (const MetricsFrame& m : state.metrics) {
        price_sum += m.mean_price;
        production_sum += m.mean_production;
        failed_total += m.failed_firms;
        replaced_total += m.replaced_firms;
    }
    const double n = state.metrics.empty() ? 1.0 : static_cast<double>(state.metrics.size());
    j["aggregates"] = {{"mean_price_over_run", price_sum / n},
                       {"mean_production_over_run", production_sum / n},
                       {"failed_firm_events", failed_total},
                       {"replaced_firms", replaced_total},
                       {"transactions", state.ledger.size()},
                       {"max_abs_ledger_imbalance", state.max_abs_imbalance}};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("metrics: cannot write " + path);
    out << j.dump(2) << "\n";
}

void write_manifest(const std::string& path, const ScenarioConfig& config, const std::string& config_path,
                    const std::vector<std::string>& output_paths, const std::string& started_at,
                    const std::string& finished_at) {
    nlohmann::ordered_json j;
    j["version"] = kArtifactVersion;
    j["config_path"] = config_path;
    j["seed"] = config.seed;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["outputs"] = output_paths;
    j["config"] = config_to_json(config);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("metrics: cannot write " + path);
    out << j.dump(2) << "\n";
}

std::string timestamp_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace floodecon
