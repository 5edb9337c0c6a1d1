#include "floodecon/markets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace floodecon {

namespace {

// Shared by every market phase: move `cost` from buyer money to seller
// money, never overdrawing the tracked budget.
double capped_cost(double quantity, double unit_price, double budget) {
    return std::min(quantity * unit_price, budget);
}

}  // namespace

std::vector<Transaction> clear_labor_market(std::vector<Household>& households, std::vector<Firm>& firms,
                                            int step, RngStream& rng) {
    std::vector<Transaction> out;
    for (Household& h : households) h.labor_supplied = 0.0;

    std::vector<std::size_t> order(households.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    for (std::size_t idx : order) {
        Household& h = households[idx];
        std::vector<const Firm*> candidates;
        for (const Firm& f : firms) {
            if (f.sector == h.sector && f.labor_budget_remaining > 0.0) candidates.push_back(&f);
        }
        const auto chosen = choose_employer(h, candidates);
        h.employer = chosen;
        if (!chosen) continue;

        Firm& f = *std::find_if(firms.begin(), firms.end(), [&](const Firm& g) { return g.id == *chosen; });
        const double quantity = std::min(1.0, f.labor_budget_remaining / f.wage);
        if (quantity <= 0.0) continue;
        const double cost = capped_cost(quantity, f.wage, f.labor_budget_remaining);
        f.labor_budget_remaining -= cost;
        f.money -= cost;
        f.labor_hired += quantity;
        h.money += cost;
        h.labor_supplied = quantity;
        out.push_back({h.id, f.id, GoodKind::Labor, 0, quantity, f.wage, step});
    }
    return out;
}

std::vector<Transaction> procure_inputs(Firm& buyer, std::vector<Firm>& firms, int step) {
    std::vector<Transaction> out;
    if (buyer.sector != Sector::Manufacturer || buyer.suppliers.empty() || buyer.input_budget <= 0.0) return out;

    const double share = buyer.input_budget / static_cast<double>(buyer.suppliers.size());
    for (int supplier_id : buyer.suppliers) {
        Firm& seller = *std::find_if(firms.begin(), firms.end(), [&](const Firm& g) { return g.id == supplier_id; });
        if (seller.price <= 0.0 || seller.output_inventory <= 0.0) continue;
        const double quantity = std::min(share / seller.price, seller.output_inventory);
        if (quantity <= 0.0) continue;
        const double cost = capped_cost(quantity, seller.price, share);
        seller.output_inventory -= quantity;
        seller.money += cost;
        seller.sales_this_step += quantity;
        buyer.money -= cost;
        buyer.input_inventory[supplier_id] += quantity;
        out.push_back({buyer.id, seller.id, GoodKind::TrophicGood, seller.trophic_level, quantity, seller.price, step});
    }
    return out;
}

std::vector<Transaction> clear_goods_market(std::vector<Household>& households, std::vector<Firm>& firms,
                                            double spend_fraction, int step, RngStream& rng) {
    std::vector<Transaction> out;

    std::vector<std::size_t> order(households.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    for (std::size_t idx : order) {
        Household& h = households[idx];
        auto demand = consumption_demand(h, spend_fraction);
        for (auto& [level, budget] : demand) {
            // cheapest seller first, ties to the lowest id, until the
            // level budget or the shelf is empty
            while (budget > 1e-12) {
                Firm* best = nullptr;
                for (Firm& f : firms) {
                    if (f.trophic_level != level || f.output_inventory <= 0.0) continue;
                    if (!best || f.price < best->price || (f.price == best->price && f.id < best->id)) best = &f;
                }
                if (!best) break;  // no supply at this level: forced savings
                const double quantity = std::min(budget / best->price, best->output_inventory);
                if (quantity <= 0.0) break;
                const double cost = capped_cost(quantity, best->price, budget);
                budget -= cost;
                h.money -= cost;
                best->money += cost;
                best->output_inventory -= quantity;
                best->sales_this_step += quantity;
                out.push_back({h.id, best->id, GoodKind::TrophicGood, level, quantity, best->price, step});
            }
        }
    }
    return out;
}

double adjust_price(const Firm& firm, double target_inventory) {
    const double gap = (target_inventory - firm.output_inventory) / target_inventory;
    const double next = firm.price * (1.0 + firm.genome.price_responsiveness * gap);
    return std::clamp(next, kPriceFloor, kPriceCeiling);
}

double adjust_wage(const Firm& firm, double vacancy_ratio) {
    const double next = firm.wage * (1.0 + firm.genome.wage_sensitivity * (vacancy_ratio - 0.5) * 2.0);
    return std::clamp(next, kPriceFloor, kPriceCeiling);
}

}  // namespace floodecon
