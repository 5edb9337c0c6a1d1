#include "floodecon/engine.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace floodecon {

namespace {

constexpr double kCapitalUnitPrice = 1.0;  // fixed capital-goods price (external market)
constexpr double kAuditTolerance = 1e-9;
constexpr std::size_t kSalesWindow = 4;  // trailing window for the price target

}  // namespace

void ScenarioConfig::validate() const {
    if (grids.empty()) throw std::runtime_error("config: no hazard grid configured");
    if (grids.front().start_step > 1) throw std::runtime_error("config: first grid epoch must start at step 1");
    for (std::size_t i = 1; i < grids.size(); ++i)
        if (grids[i].start_step <= grids[i - 1].start_step)
            throw std::runtime_error("config: grid epochs must have increasing start steps");
    if (steps < 0) throw std::runtime_error("config: steps must be >= 0");
    if (dt_years <= 0.0) throw std::runtime_error("config: dt_years must be positive");
    if (n_firms < 2) throw std::runtime_error("config: n_firms must be >= 2");
    if (n_households < 1) throw std::runtime_error("config: n_households must be >= 1");
    if (commodity_fraction <= 0.0 || commodity_fraction >= 1.0)
        throw std::runtime_error("config: commodity_fraction must be in (0, 1)");
    if (suppliers_per_manufacturer < 1)
        throw std::runtime_error("config: suppliers_per_manufacturer must be >= 1");
    if (coefficients.a_labor <= 0.0 || coefficients.a_capital <= 0.0 || coefficients.a_input <= 0.0)
        throw std::runtime_error("config: Leontief coefficients must be positive");
    if (firm_money < 0.0 || firm_capital < 0.0 || firm_output_inventory < 0.0 || firm_input_inventory < 0.0 ||
        household_money < 0.0 || entry_money < 0.0 || entry_capital < 0.0)
        throw std::runtime_error("config: endowments must be non-negative");
    if (initial_price <= 0.0 || initial_wage <= 0.0)
        throw std::runtime_error("config: initial price and wage must be positive");
    if (recovery_steps < 0) throw std::runtime_error("config: recovery_steps must be >= 0");
    if (spend_fraction < 0.0 || spend_fraction > 1.0)
        throw std::runtime_error("config: spend_fraction must be in [0, 1]");
}

const HazardGrid& WorldState::active_grid() const {
    std::size_t active = 0;
    for (std::size_t i = 0; i < grids.size(); ++i)
        if (grids[i].first <= std::max(step, 1)) active = i;
    return grids[active].second;
}

double WorldState::total_money() const {
    double total = 0.0;
    for (const auto& f : firms) total += f.money;
    for (const auto& h : households) total += h.money;
    return total;
}

WorldState init_world(const ScenarioConfig& config) {
    config.validate();

    WorldState state;
    state.config = config;
    state.step = 0;

    for (const auto& epoch : config.grids) {
        HazardGrid grid = load_hazard_grid(epoch.path);
        // With hazards disabled the grid is neutralized everywhere it
        // matters (placement included), so a --no-hazard run matches an
        // all-zero grid bit for bit.
        if (!config.hazard_enabled) grid = grid.zeroed();
        state.grids.emplace_back(epoch.start_step, std::move(grid));
    }
    state.curve = config.impact_curve_path.empty() ? ImpactCurve::default_curve()
                                                   : load_impact_curve(config.impact_curve_path);

    RngStream init_rng = make_substream(config.seed, Substream::Init);
    state.hazard_rng = make_substream(config.seed, Substream::Hazard);
    state.markets_rng = make_substream(config.seed, Substream::Markets);
    state.evolution_rng = make_substream(config.seed, Substream::Evolution);

    const HazardGrid& grid = state.grids.front().second;
    const std::size_t n_cells = grid.cell_count();
    if (n_cells < static_cast<std::size_t>(config.n_firms))
        throw std::runtime_error("init: grid has fewer cells than firms");

    // firm placement: riskiest decile of cells by 100-yr intensity
    std::vector<std::size_t> pool;
    if (grid.max_intensity <= 0.0) {
        pool.resize(n_cells);
        std::iota(pool.begin(), pool.end(), 0);
    } else {
        std::vector<std::size_t> ranked(n_cells);
        std::iota(ranked.begin(), ranked.end(), 0);
        std::vector<double> risk(n_cells);
        for (std::size_t i = 0; i < n_cells; ++i) risk[i] = grid.intensity_at(i, 100.0);
        std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) { return risk[a] > risk[b]; });
        std::size_t take = std::max<std::size_t>(1, n_cells / 10);
        if (take < static_cast<std::size_t>(config.n_firms)) {
            take = std::max<std::size_t>(1, n_cells / 4);
            std::cerr << "init: widening firm placement to the top quartile of cells\n";
        }
        if (take < static_cast<std::size_t>(config.n_firms)) {
            take = n_cells;
            std::cerr << "init: widening firm placement to the whole grid\n";
        }
        pool.assign(ranked.begin(), ranked.begin() + take);
    }
    init_rng.shuffle(pool);

    const int n_commodity =
        std::clamp(static_cast<int>(config.commodity_fraction * config.n_firms), 1, config.n_firms - 1);

    state.firms.reserve(config.n_firms);
    for (int i = 0; i < config.n_firms; ++i) {
        Firm f;
        f.id = i;
        const std::size_t cell = pool[i];
        f.location = {static_cast<int>(cell % grid.width), static_cast<int>(cell / grid.width)};
        f.sector = i < n_commodity ? Sector::Commodity : Sector::Manufacturer;
        f.trophic_level = f.sector == Sector::Commodity ? 1 : 2;
        f.money = config.firm_money;
        f.capital = config.firm_capital;
        f.capital_target = config.firm_capital;
        f.output_inventory = config.firm_output_inventory;
        f.price = config.initial_price;
        f.wage = config.initial_wage;
        f.monitoring_radius = init_rng.uniform_int(1, 50);
        const std::array<bool, StrategyGenome::kParamCount> full_mask{true, true, true, true, true, true};
        f.genome = mutate(StrategyGenome{}, full_mask, kSigmaInitial, init_rng);
        state.firms.push_back(std::move(f));
    }

    std::vector<int> commodity_ids;
    for (const Firm& f : state.firms)
        if (f.sector == Sector::Commodity) commodity_ids.push_back(f.id);
    const int per_firm_suppliers = std::min<int>(config.suppliers_per_manufacturer,
                                                 static_cast<int>(commodity_ids.size()));
    if (per_firm_suppliers < config.suppliers_per_manufacturer)
        std::cerr << "init: only " << per_firm_suppliers << " commodity firms available as suppliers\n";
    for (Firm& f : state.firms) {
        if (f.sector != Sector::Manufacturer) continue;
        std::vector<int> picks = commodity_ids;
        init_rng.shuffle(picks);
        picks.resize(per_firm_suppliers);
        std::sort(picks.begin(), picks.end());
        f.suppliers = picks;
        for (int s : f.suppliers) f.input_inventory[s] = config.firm_input_inventory;
    }

    // household sector shares follow the firm split
    const int n_commodity_households =
        static_cast<int>((static_cast<long long>(config.n_households) * n_commodity) / config.n_firms);

    std::vector<int> levels_available;
    for (const Firm& f : state.firms)
        if (std::find(levels_available.begin(), levels_available.end(), f.trophic_level) == levels_available.end())
            levels_available.push_back(f.trophic_level);
    std::sort(levels_available.begin(), levels_available.end());

    state.households.reserve(config.n_households);
    for (int i = 0; i < config.n_households; ++i) {
        Household h;
        h.id = i;
        const std::size_t cell = init_rng.uniform_index(n_cells);
        h.location = {static_cast<int>(cell % grid.width), static_cast<int>(cell / grid.width)};
        h.sector = i < n_commodity_households ? Sector::Commodity : Sector::Manufacturer;
        h.money = config.household_money;
        h.monitoring_radius = init_rng.uniform_int(1, 50);
        h.distance_cost = init_rng.uniform(0.01, 0.1);
        int subset = levels_available.size() <= 2 ? static_cast<int>(levels_available.size())
                                                  : init_rng.uniform_int(2, 3);
        subset = std::min<int>(subset, static_cast<int>(levels_available.size()));
        std::vector<int> picks = levels_available;
        init_rng.shuffle(picks);
        picks.resize(subset);
        std::sort(picks.begin(), picks.end());
        h.consumption_levels = picks;
        state.households.push_back(std::move(h));
    }

    return state;
}

void step_world(WorldState& state) {
    const ScenarioConfig& cfg = state.config;
    state.step += 1;
    const int t = state.step;

    const double money_before = state.total_money();
    const HazardGrid& grid = state.active_grid();

    // 1: hazard realization
    HazardField field = cfg.hazard_enabled ? sample_step_hazard(grid, cfg.dt_years, state.hazard_rng, t)
                                           : HazardField::zero(grid.width, grid.height, t);

    // 2-3: damage pathways, then a recovery tick
    for (Firm& f : state.firms) {
        const double d = damage_ratio(state.curve, field.at(f.location));
        apply_damage(f, d, cfg.recovery_steps);
    }
    for (Firm& f : state.firms) recover_productivity(f);

    // 4: hazard-driven household relocation
    for (Household& h : state.households) household_maybe_relocate(h, field, grid, state.hazard_rng);

    // 5: risk response raises capital targets
    for (Firm& f : state.firms) {
        const double local = neighborhood_peak(field, f.location, f.monitoring_radius, grid);
        update_capital_target(f, local);
    }

    // 6: budgets and per-step resets
    for (Firm& f : state.firms) {
        f.labor_hired = 0.0;
        f.sales_this_step = 0.0;
        f.production_this_step = 0.0;
        const BudgetSplit b = allocate_budget(f);
        f.labor_budget = b.labor;
        f.labor_budget_remaining = b.labor;
        f.input_budget = b.input;
        f.capital_budget = b.capital;
    }

    // 7: labor
    auto labor_tx = clear_labor_market(state.households, state.firms, t, state.markets_rng);
    state.ledger.insert(state.ledger.end(), labor_tx.begin(), labor_tx.end());

    // 8: procurement, commodity sellers first (ascending buyer trophic level)
    std::vector<int> buyer_levels;
    for (const Firm& f : state.firms)
        if (f.sector == Sector::Manufacturer &&
            std::find(buyer_levels.begin(), buyer_levels.end(), f.trophic_level) == buyer_levels.end())
            buyer_levels.push_back(f.trophic_level);
    std::sort(buyer_levels.begin(), buyer_levels.end());
    for (int level : buyer_levels) {
        std::vector<std::size_t> buyers;
        for (std::size_t i = 0; i < state.firms.size(); ++i)
            if (state.firms[i].sector == Sector::Manufacturer && state.firms[i].trophic_level == level)
                buyers.push_back(i);
        state.markets_rng.shuffle(buyers);
        for (std::size_t i : buyers) {
            auto tx = procure_inputs(state.firms[i], state.firms, t);
            state.ledger.insert(state.ledger.end(), tx.begin(), tx.end());
        }
    }

    // 9: production (failed firms awaiting replacement sit out)
    for (Firm& f : state.firms) {
        if (f.inactive) {
            f.production_this_step = 0.0;
            f.limiting_factor = LimitingFactor::None;
            continue;
        }
        const ProductionResult r = leontief_output(f, cfg.coefficients);
        f.production_this_step = r.quantity;
        f.limiting_factor = r.limiting;
    }

    // 10: household consumption
    auto goods_tx = clear_goods_market(state.households, state.firms, cfg.spend_fraction, t, state.markets_rng);
    state.ledger.insert(state.ledger.end(), goods_tx.begin(), goods_tx.end());

    // 11: capital purchases toward target (external market, recorded sink)
    double capital_outflow = 0.0;
    for (Firm& f : state.firms) {
        const double gap = f.capital_target - f.capital;
        if (gap <= 0.0 || f.capital_budget <= 0.0) continue;
        const double quantity = std::min(gap, f.capital_budget / kCapitalUnitPrice);
        const double cost = std::min(quantity * kCapitalUnitPrice, f.capital_budget);
        f.capital += quantity;
        f.money -= cost;
        capital_outflow += cost;
        state.ledger.push_back({f.id, -1, GoodKind::Capital, 0, quantity, kCapitalUnitPrice, t});
    }

    // 12: posted prices and wages react to inventories and vacancies
    for (Firm& f : state.firms) {
        f.recent_sales.push_back(f.sales_this_step);
        if (f.recent_sales.size() > kSalesWindow) f.recent_sales.pop_front();
        double mean_sales = 0.0;
        for (double s : f.recent_sales) mean_sales += s;
        mean_sales /= static_cast<double>(f.recent_sales.size());
        f.price = adjust_price(f, std::max(1.0, mean_sales));

        const double vacancy = f.labor_budget > 0.0 ? f.labor_budget_remaining / f.labor_budget : 0.0;
        f.wage = adjust_wage(f, vacancy);
    }

    // 13: performance records and the mutation schedule
    for (Firm& f : state.firms) {
        f.age += 1;
        f.memory.record({f.money, f.production_this_step, f.capital, f.limiting_factor});
    }
    if (cfg.evolution_enabled && t % kMutationInterval == 0) {
        for (Firm& f : state.firms) {
            const double score = fitness(f.memory, f.age);
            f.memory.record_fitness(score);
            const double sigma = select_sigma(f.mutation_state, score);
            const auto mask = should_mutate(t, state.evolution_rng);
            f.genome = mutate(f.genome, mask, sigma, state.evolution_rng);
        }
    }

    // 14: failure classification and capped replacement
    ReplacementOutcome outcome;
    if (cfg.evolution_enabled) {
        const EntryEndowment endowment{cfg.entry_money, cfg.entry_capital, cfg.initial_price, cfg.initial_wage};
        outcome = replace_failed(state.firms, t, endowment, state.evolution_rng);
        for (int id : outcome.replaced_ids)
            state.ledger.push_back({id, -1, GoodKind::Endowment, 0, 1.0, cfg.entry_money, t});
        if (outcome.removed_money != 0.0)
            state.ledger.push_back({-1, -1, GoodKind::Removal, 0, 1.0, outcome.removed_money, t});
    }

    // 15: metrics and the conservation audit
    MetricsFrame frame;
    frame.step = t;
    int n_com = 0, n_man = 0, producing = 0, unemployed = 0;
    for (const Firm& f : state.firms) {
        frame.mean_production += f.production_this_step;
        frame.mean_firm_money += f.money;
        frame.mean_price += f.price;
        frame.mean_wage += f.wage;
        if (f.sector == Sector::Commodity) {
            frame.mean_production_commodity += f.production_this_step;
            frame.mean_firm_money_commodity += f.money;
            ++n_com;
        } else {
            frame.mean_production_manufacturer += f.production_this_step;
            frame.mean_firm_money_manufacturer += f.money;
            ++n_man;
        }
        switch (f.limiting_factor) {
            case LimitingFactor::Labor: frame.share_labor_limited += 1.0; ++producing; break;
            case LimitingFactor::Capital: frame.share_capital_limited += 1.0; ++producing; break;
            case LimitingFactor::Input: frame.share_input_limited += 1.0; ++producing; break;
            case LimitingFactor::None: break;
        }
    }
    const double n_firms = static_cast<double>(state.firms.size());
    frame.mean_production /= n_firms;
    frame.mean_firm_money /= n_firms;
    frame.mean_price /= n_firms;
    frame.mean_wage /= n_firms;
    if (n_com > 0) {
        frame.mean_production_commodity /= n_com;
        frame.mean_firm_money_commodity /= n_com;
    }
    if (n_man > 0) {
        frame.mean_production_manufacturer /= n_man;
        frame.mean_firm_money_manufacturer /= n_man;
    }
    if (producing > 0) {
        frame.share_labor_limited /= producing;
        frame.share_capital_limited /= producing;
        frame.share_input_limited /= producing;
    }
    for (const Household& h : state.households) {
        frame.mean_household_money += h.money;
        frame.mean_labor_supplied += h.labor_supplied;
        if (h.labor_supplied == 0.0) ++unemployed;
    }
    frame.mean_household_money /= static_cast<double>(state.households.size());
    frame.mean_labor_supplied /= static_cast<double>(state.households.size());
    frame.unemployment_rate = static_cast<double>(unemployed) / static_cast<double>(state.households.size());
    frame.failed_firms = outcome.failed_count;
    frame.replaced_firms = outcome.replaced_count;
    frame.endowment_inflow = outcome.endowment_money;
    frame.capital_outflow = capital_outflow;
    frame.removal_outflow = outcome.removed_money;

    const double money_after = state.total_money();
    const double imbalance =
        (money_after - money_before) - (frame.endowment_inflow - frame.capital_outflow - frame.removal_outflow);
    state.max_abs_imbalance = std::max(state.max_abs_imbalance, std::abs(imbalance));
    if (std::abs(imbalance) > kAuditTolerance) {
        std::ostringstream dump;
        dump << "money conservation audit failed at step " << t << ": imbalance " << imbalance
             << " (before " << money_before << ", after " << money_after << ", endowments "
             << frame.endowment_inflow << ", capital out " << frame.capital_outflow << ", removals "
             << frame.removal_outflow << ")";
        throw std::runtime_error(dump.str());
    }

    state.metrics.push_back(frame);
}

WorldState run(const ScenarioConfig& config, const ProgressFn& progress) {
    WorldState state = init_world(config);
    int last_decile = 0;
    for (int i = 1; i <= config.steps; ++i) {
        step_world(state);
        if (progress) {
            const int decile = (10 * i) / config.steps;
            if (decile > last_decile) {
                last_decile = decile;
                progress(i, config.steps);
            }
        }
    }
    return state;
}

}  // namespace floodecon
