#include "floodecon/agents.hpp"

#include <algorithm>
#include <cmath>

namespace floodecon {

namespace {

constexpr double kProductivityFloor = 0.01;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

double StrategyGenome::get(int i) const {
    switch (i) {
        case 0: return labor_weight;
        case 1: return input_weight;
        case 2: return capital_weight;
        case 3: return risk_sensitivity;
        case 4: return price_responsiveness;
        default: return wage_sensitivity;
    }
}

void StrategyGenome::set(int i, double v) {
    switch (i) {
        case 0: labor_weight = v; break;
        case 1: input_weight = v; break;
        case 2: capital_weight = v; break;
        case 3: risk_sensitivity = v; break;
        case 4: price_responsiveness = v; break;
        default: wage_sensitivity = v; break;
    }
}

void StrategyGenome::clamp_and_renormalize() {
    labor_weight = clamp01(labor_weight);
    input_weight = clamp01(input_weight);
    capital_weight = clamp01(capital_weight);
    risk_sensitivity = std::clamp(risk_sensitivity, 0.0, 10.0);
    price_responsiveness = clamp01(price_responsiveness);
    wage_sensitivity = clamp01(wage_sensitivity);
    const double sum = labor_weight + input_weight + capital_weight;
    if (sum > 0.0) {
        labor_weight /= sum;
        input_weight /= sum;
        capital_weight /= sum;
    } else {
        labor_weight = input_weight = capital_weight = 1.0 / 3.0;
    }
}

bool StrategyGenome::valid(double tol) const {
    const double sum = labor_weight + input_weight + capital_weight;
    return labor_weight >= 0.0 && labor_weight <= 1.0 && input_weight >= 0.0 && input_weight <= 1.0 &&
           capital_weight >= 0.0 && capital_weight <= 1.0 && std::abs(sum - 1.0) <= tol &&
           risk_sensitivity >= 0.0 && risk_sensitivity <= 10.0 && price_responsiveness >= 0.0 &&
           price_responsiveness <= 1.0 && wage_sensitivity >= 0.0 && wage_sensitivity <= 1.0;
}

void apply_damage(Firm& firm, double d, int recovery_steps) {
    if (d <= 0.0) return;
    const double keep = 1.0 - d;
    firm.capital *= keep;
    firm.output_inventory *= keep;
    for (auto& [good, units] : firm.input_inventory) units *= keep;
    firm.productivity_multiplier = std::max(kProductivityFloor, std::min(firm.productivity_multiplier, keep));
    firm.recovery_steps_left = recovery_steps;
}

void recover_productivity(Firm& firm) {
    if (firm.recovery_steps_left <= 0) {
        firm.productivity_multiplier = 1.0;
        firm.recovery_steps_left = 0;
        return;
    }
    firm.productivity_multiplier += (1.0 - firm.productivity_multiplier) / firm.recovery_steps_left;
    --firm.recovery_steps_left;
    if (firm.recovery_steps_left == 0) firm.productivity_multiplier = 1.0;
}

ProductionResult leontief_output(Firm& firm, const LeontiefCoefficients& coeffs) {
    double q_raw = firm.labor_hired / coeffs.a_labor;
    LimitingFactor limiting = LimitingFactor::Labor;

    const double q_capital = firm.capital / coeffs.a_capital;
    if (q_capital < q_raw) {
        q_raw = q_capital;
        limiting = LimitingFactor::Capital;
    }

    if (firm.sector == Sector::Manufacturer) {
        for (int supplier : firm.suppliers) {
            const auto it = firm.input_inventory.find(supplier);
            const double held = it == firm.input_inventory.end() ? 0.0 : it->second;
            const double q_input = held / coeffs.a_input;
            if (q_input < q_raw) {
                q_raw = q_input;
                limiting = LimitingFactor::Input;
            }
        }
        for (int supplier : firm.suppliers) {
            auto it = firm.input_inventory.find(supplier);
            if (it != firm.input_inventory.end()) it->second = std::max(0.0, it->second - q_raw * coeffs.a_input);
        }
    }

    const double q = q_raw * firm.productivity_multiplier;
    firm.output_inventory += q;
    return {q, limiting};
}

BudgetSplit allocate_budget(const Firm& firm) {
    if (firm.money <= 0.0) return {};
    BudgetSplit b;
    b.labor = firm.money * firm.genome.labor_weight;
    b.input = firm.money * firm.genome.input_weight;
    b.capital = firm.money - b.labor - b.input;  // remainder, so the split is exact
    if (b.capital < 0.0) b.capital = 0.0;
    return b;
}

void update_capital_target(Firm& firm, double local_hazard) {
    if (local_hazard <= 0.0) return;
    firm.capital_target *= 1.0 + firm.genome.risk_sensitivity * local_hazard;
}

void household_maybe_relocate(Household& h, const HazardField& field, const HazardGrid& grid, RngStream& rng) {
    const double peak = neighborhood_peak(field, h.location, h.monitoring_radius, grid);
    if (peak <= 0.1) return;
    const std::size_t n_cells = static_cast<std::size_t>(field.width) * field.height;
    for (int attempt = 0; attempt < 100; ++attempt) {
        const std::size_t idx = rng.uniform_index(n_cells);
        const double normalized = grid.max_intensity > 0.0 ? field.intensities[idx] / grid.max_intensity : 0.0;
        if (normalized <= 0.1) {
            h.location = {static_cast<int>(idx % field.width), static_cast<int>(idx / field.width)};
            h.employer.reset();
            return;
        }
    }
    // whole grid looked hazardous; stay put
}

std::optional<int> choose_employer(const Household& h, const std::vector<const Firm*>& candidates) {
    std::optional<int> best_id;
    double best_score = 0.0;
    for (const Firm* f : candidates) {
        const double score = f->wage - h.distance_cost * chebyshev_distance(h.location, f->location);
        if (score <= 0.0) continue;
        if (!best_id || score > best_score || (score == best_score && f->id < *best_id)) {
            best_id = f->id;
            best_score = score;
        }
    }
    return best_id;
}

std::map<int, double> consumption_demand(const Household& h, double spend_fraction) {
    std::map<int, double> demand;
    if (h.consumption_levels.empty()) return demand;
    const double total = h.money * spend_fraction;
    const double share = total / static_cast<double>(h.consumption_levels.size());
    for (int level : h.consumption_levels) demand[level] = share;
    return demand;
}

}  // namespace floodecon
