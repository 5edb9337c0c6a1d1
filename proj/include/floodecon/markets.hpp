#pragma once

#include <vector>

#include "floodecon/agents.hpp"
#include "floodecon/rng.hpp"

namespace floodecon {

enum class GoodKind { Labor, Capital, TrophicGood, Endowment, Removal };

// Ledger entry for every money-moving trade. Buyer/seller ids of -1 mark
// the external world (capital purchases, entry endowments).
struct Transaction {
    int buyer = -1;
    int seller = -1;
    GoodKind kind = GoodKind::TrophicGood;
    int trophic_level = 0;  // meaningful for TrophicGood only
    double quantity = 0.0;
    double unit_price = 0.0;
    int step = 0;
};

// Serial market phases. All matching is order-dependent, so each function
// fixes its iteration order with a seeded shuffle and must run single
// threaded. Determinism under a fixed seed is part of the contract.

// Households pick employers by wage-distance score among same-sector firms
// with remaining labor budget; each sells at most 1 divisible unit. Firms
// pay wage * quantity out of their labor budgets.
std::vector<Transaction> clear_labor_market(std::vector<Household>& households, std::vector<Firm>& firms,
                                            int step, RngStream& rng);

// One manufacturer buys intermediates: its input budget is split equally
// across suppliers and spent up to each supplier's inventory.
std::vector<Transaction> procure_inputs(Firm& buyer, std::vector<Firm>& firms, int step);

// Households spend their per-level consumption budgets cheapest-seller
// first (ties to the lowest firm id) until budget or supply runs out.
std::vector<Transaction> clear_goods_market(std::vector<Household>& households, std::vector<Firm>& firms,
                                            double spend_fraction, int step, RngStream& rng);

// price <- price * (1 + responsiveness * (target - inventory) / target),
// clamped to [0.01, 1e6]
double adjust_price(const Firm& firm, double target_inventory);

// wage <- wage * (1 + sensitivity * (vacancy_ratio - 0.5) * 2), clamped to
// [0.01, 1e6]; fully staffed firms cut, fully vacant ones raise
double adjust_wage(const Firm& firm, double vacancy_ratio);

constexpr double kPriceFloor = 0.01;
constexpr double kPriceCeiling = 1e6;

}  // namespace floodecon
