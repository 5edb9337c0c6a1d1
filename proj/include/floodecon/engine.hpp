#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "floodecon/agents.hpp"
#include "floodecon/evolution.hpp"
#include "floodecon/hazard.hpp"
#include "floodecon/markets.hpp"
#include "floodecon/rng.hpp"

namespace floodecon {

struct GridEpoch {
    int start_step = 1;
    std::string path;
};

struct ScenarioConfig {
    std::vector<GridEpoch> grids;   // ordered by start_step; first active from step 1
    std::string impact_curve_path;  // empty: built-in linear 0m->0, 6m->1

    int steps = 320;
    double dt_years = 0.25;
    int n_firms = 15;
    int n_households = 75;
    double commodity_fraction = 0.4;
    int suppliers_per_manufacturer = 2;
    bool hazard_enabled = true;
    bool evolution_enabled = true;
    std::uint64_t seed = 42;

    LeontiefCoefficients coefficients{1.0, 2.5, 0.25};

    double firm_money = 10.0;
    double firm_capital = 15.0;
    double firm_output_inventory = 0.0;
    double firm_input_inventory = 5.0;
    double household_money = 1.0;
    double initial_price = 1.0;
    double initial_wage = 1.0;

    int recovery_steps = 4;
    double spend_fraction = 0.8;
    double entry_money = 10.0;
    double entry_capital = 5.0;

    std::string output_dir;

    void validate() const;  // throws std::runtime_error on invariant violations
};

// One row of the exported time series; mirrors the CSV columns.
struct MetricsFrame {
    int step = 0;
    double mean_production = 0.0;
    double mean_production_commodity = 0.0;
    double mean_production_manufacturer = 0.0;
    double mean_firm_money = 0.0;
    double mean_firm_money_commodity = 0.0;
    double mean_firm_money_manufacturer = 0.0;
    double mean_household_money = 0.0;
    double mean_labor_supplied = 0.0;
    double mean_price = 0.0;
    double mean_wage = 0.0;
    double unemployment_rate = 0.0;
    double share_labor_limited = 0.0;
    double share_capital_limited = 0.0;
    double share_input_limited = 0.0;
    int failed_firms = 0;
    int replaced_firms = 0;
    double endowment_inflow = 0.0;
    double capital_outflow = 0.0;
    double removal_outflow = 0.0;
};

struct WorldState {
    int step = 0;
    std::vector<std::pair<int, HazardGrid>> grids;  // (start_step, grid), ascending
    ImpactCurve curve;
    std::vector<Firm> firms;
    std::vector<Household> households;
    RngStream hazard_rng{0};
    RngStream markets_rng{0};
    RngStream evolution_rng{0};
    std::vector<Transaction> ledger;
    std::vector<MetricsFrame> metrics;
    ScenarioConfig config;
    double max_abs_imbalance = 0.0;

    const HazardGrid& active_grid() const;
    double total_money() const;
};

// Builds the deterministic initial world: firms placed on the riskiest
// decile of cells (uniform when the grid carries no hazard), a two-level
// commodity -> manufacturer supply chain, and households scattered
// uniformly with sector shares matching the firm split. All draws come
// from the init substream of config.seed.
WorldState init_world(const ScenarioConfig& config);

// Advances one step through the fixed phase schedule: hazard sampling,
// damage, recovery, relocation, risk response, budgeting, labor market,
// procurement (commodity sellers first), production, goods market, capital
// purchases, price/wage adjustment, evolution bookkeeping, replacement,
// metrics. Throws if the per-step money ledger fails to balance to 1e-9.
void step_world(WorldState& state);

using ProgressFn = std::function<void(int completed, int total)>;

// init_world + steps iterations of step_world. The progress callback, when
// given, fires at every 10% of completed steps.
WorldState run(const ScenarioConfig& config, const ProgressFn& progress = {});

}  // namespace floodecon
