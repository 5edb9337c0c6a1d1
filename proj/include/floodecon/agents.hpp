#pragma once

#include <array>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "floodecon/hazard.hpp"
#include "floodecon/rng.hpp"

namespace floodecon {

enum class Sector { Commodity, Manufacturer };

enum class LimitingFactor { Labor, Capital, Input, None };

// The six evolvable strategy parameters. The three budget weights live on
// the unit simplex; the rest are clamped to their bounds after mutation.
struct StrategyGenome {
    double labor_weight = 1.0 / 3.0;
    double input_weight = 1.0 / 3.0;
    double capital_weight = 1.0 / 3.0;
    double risk_sensitivity = 5.0;       // [0, 10]
    double price_responsiveness = 0.5;   // [0, 1]
    double wage_sensitivity = 0.5;       // [0, 1]

    static constexpr int kParamCount = 6;

    double get(int i) const;
    void set(int i, double v);
    void clamp_and_renormalize();
    bool valid(double tol = 1e-9) const;
};

struct StepRecord {
    double money = 0.0;
    double production = 0.0;
    double capital = 0.0;
    LimitingFactor limiting = LimitingFactor::None;
};

// 10-step rolling window of per-step performance plus the last two
// computed fitness values.
struct PerformanceMemory {
    static constexpr std::size_t kWindow = 10;
    std::deque<StepRecord> window;
    std::deque<double> fitness_history;  // most recent last, length <= 2

    void record(const StepRecord& r) {
        window.push_back(r);
        if (window.size() > kWindow) window.pop_front();
    }
    void record_fitness(double f) {
        fitness_history.push_back(f);
        if (fitness_history.size() > 2) fitness_history.pop_front();
    }
    void clear() {
        window.clear();
        fitness_history.clear();
    }
};

// Hill-climbing mutation scale: shrinks after improvement, grows after
// decline.
struct MutationState {
    double sigma = 0.05;
    std::optional<double> last_fitness;
};

struct LeontiefCoefficients {
    double a_labor = 1.0;    // labor units per output unit
    double a_capital = 1.0;  // capital units per output unit
    double a_input = 1.0;    // input units per output unit, per supplier good
};

struct Firm {
    int id = 0;
    Cell location;
    Sector sector = Sector::Commodity;
    int trophic_level = 1;
    double money = 0.0;
    double capital = 0.0;
    double capital_target = 0.0;
    double output_inventory = 0.0;
    std::map<int, double> input_inventory;  // supplier firm id -> units held
    std::vector<int> suppliers;
    double price = 1.0;
    double wage = 1.0;
    double productivity_multiplier = 1.0;
    int recovery_steps_left = 0;
    int monitoring_radius = 1;
    StrategyGenome genome;
    int age = 0;
    PerformanceMemory memory;
    MutationState mutation_state;
    LimitingFactor limiting_factor = LimitingFactor::None;

    // per-step working state, reset by the engine each step
    double labor_hired = 0.0;
    double labor_budget = 0.0;
    double labor_budget_remaining = 0.0;
    double input_budget = 0.0;
    double capital_budget = 0.0;
    double production_this_step = 0.0;
    double sales_this_step = 0.0;
    std::deque<double> recent_sales;  // trailing window for the price target
    bool inactive = false;            // failed last step, awaiting replacement
};

struct Household {
    int id = 0;
    Cell location;
    Sector sector = Sector::Commodity;  // labor-market specialization
    double money = 0.0;
    std::optional<int> employer;
    int monitoring_radius = 1;
    std::vector<int> consumption_levels;  // 2-3 distinct trophic levels
    double labor_supplied = 0.0;          // units sold this step
    double distance_cost = 0.05;          // money per cell of commute
};

// --- damage pathways -------------------------------------------------------

// Applies one event's damage ratio to a firm: capital and all inventories
// scaled by (1-d), productivity knocked down to at most (1-d) with a 0.01
// floor so recovery stays defined, and the recovery clock restarted when
// d > 0. Money is untouched.
void apply_damage(Firm& firm, double d, int recovery_steps);

// Linear return of productivity toward 1 over the remaining recovery
// steps; exact 1 when the clock runs out. Call once per step before
// production.
void recover_productivity(Firm& firm);

// --- production and budgeting ----------------------------------------------

// Fixed-proportions output: q_raw = min over availability ratios, scaled
// by the productivity multiplier. Consumes q_raw * a_input of each
// supplier good and adds the scaled output to the firm's inventory.
// Commodity firms skip the input term. Returns the realized quantity and
// the binding factor (ties broken Labor > Capital > Input).
struct ProductionResult {
    double quantity = 0.0;
    LimitingFactor limiting = LimitingFactor::None;
};
ProductionResult leontief_output(Firm& firm, const LeontiefCoefficients& coeffs);

struct BudgetSplit {
    double labor = 0.0;
    double input = 0.0;
    double capital = 0.0;
};
// Splits cash by the genome weights; the capital slice takes the exact
// remainder so the three budgets always sum to the firm's money.
BudgetSplit allocate_budget(const Firm& firm);

// Raises the capital target multiplicatively when hazard is visible within
// the firm's monitoring radius.
void update_capital_target(Firm& firm, double local_hazard);

// --- household behavior ------------------------------------------------------

// Moves the household to a random cell with normalized intensity <= 0.1
// when the local peak exceeds 0.1 (strict). Up to 100 candidate draws;
// stays put if none qualifies. Dropping the employer forces a fresh match
// in the next labor phase.
void household_maybe_relocate(Household& h, const HazardField& field, const HazardGrid& grid, RngStream& rng);

// Wage-minus-commute argmax over candidate firms; none when the best score
// is <= 0. Ties go to the lowest firm id.
std::optional<int> choose_employer(const Household& h, const std::vector<const Firm*>& candidates);

// money * spend_fraction split equally across the household's consumption
// levels; returned as level -> budget.
std::map<int, double> consumption_demand(const Household& h, double spend_fraction);

}  // namespace floodecon
