#include "floodecon/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace floodecon {

double fitness(const PerformanceMemory& memory, int age) {
    const auto& w = memory.window;
    if (w.empty()) throw std::runtime_error("fitness: no performance data");

    // growth with diminishing returns
    const double money_first = w.front().money;
    const double money_last = w.back().money;
    const double growth_ratio = std::max(0.0, (money_last - money_first) / std::max(money_first, 1e-6));
    const double growth = std::tanh(growth_ratio);

    // production stability: 1 - CV (population std over the window)
    double mean = 0.0;
    for (const auto& r : w) mean += r.production;
    mean /= static_cast<double>(w.size());
    double stability = 0.0;
    if (mean > 0.0) {
        double var = 0.0;
        for (const auto& r : w) var += (r.production - mean) * (r.production - mean);
        var /= static_cast<double>(w.size());
        const double cv = std::sqrt(var) / mean;
        stability = std::clamp(1.0 - cv, 0.0, 1.0);
    }

    const double survival = std::min(static_cast<double>(age) / kSurvivalSaturationSteps, 1.0);

    // limiting-factor diversity: normalized Shannon entropy over the three
    // bottleneck kinds; steps with no production (None) carry no signal
    int counts[3] = {0, 0, 0};
    int total = 0;
    for (const auto& r : w) {
        switch (r.limiting) {
            case LimitingFactor::Labor: ++counts[0]; ++total; break;
            case LimitingFactor::Capital: ++counts[1]; ++total; break;
            case LimitingFactor::Input: ++counts[2]; ++total; break;
            case LimitingFactor::None: break;
        }
    }
    double balance = 0.0;
    if (total > 0) {
        double entropy = 0.0;
        for (int c : counts) {
            if (c == 0) continue;
            const double p = static_cast<double>(c) / total;
            entropy -= p * std::log(p);
        }
        balance = entropy / std::log(3.0);
    }

    return kFitnessGrowthWeight * growth + kFitnessStabilityWeight * stability +
           kFitnessSurvivalWeight * survival + kFitnessBalanceWeight * balance;
}

std::array<bool, StrategyGenome::kParamCount> should_mutate(int step, RngStream& rng) {
    std::array<bool, StrategyGenome::kParamCount> mask{};
    if (step % kMutationInterval != 0) return mask;
    for (auto& selected : mask) selected = rng.bernoulli(kMutationProbability);
    return mask;
}

double select_sigma(MutationState& state, double current_fitness) {
    if (!state.last_fitness) {
        state.sigma = kSigmaInitial;
    } else if (current_fitness > *state.last_fitness) {
        state.sigma = kSigmaImproved;
    } else if (current_fitness < *state.last_fitness) {
        state.sigma = kSigmaDeclined;
    }
    // exact tie keeps the previous sigma
    state.last_fitness = current_fitness;
    return state.sigma;
}

StrategyGenome mutate(const StrategyGenome& genome, const std::array<bool, StrategyGenome::kParamCount>& mask,
                      double sigma, RngStream& rng) {
    StrategyGenome out = genome;
    bool touched = false;
    for (int i = 0; i < StrategyGenome::kParamCount; ++i) {
        if (!mask[i]) continue;
        out.set(i, out.get(i) * (1.0 + rng.normal(0.0, sigma)));
        touched = true;
    }
    if (touched) out.clamp_and_renormalize();
    return out;
}

bool is_failed(const Firm& firm) {
    if (firm.money < kSurvivalMoneyFloor) return true;
    const auto& w = firm.memory.window;
    if (w.size() >= kDeclineLookback) {
        const double then = w[w.size() - kDeclineLookback].money;
        if (firm.money < kDeclineFraction * then) return true;
    }
    return false;
}

ReplacementOutcome replace_failed(std::vector<Firm>& firms, int step, const EntryEndowment& endowment,
                                  RngStream& rng) {
    ReplacementOutcome outcome;

    std::vector<std::size_t> failed;
    std::vector<std::size_t> survivors;
    for (std::size_t i = 0; i < firms.size(); ++i) {
        if (is_failed(firms[i])) {
            failed.push_back(i);
            outcome.failed_count += 1;
        } else {
            survivors.push_back(i);
        }
    }

    for (Firm& f : firms) f.inactive = false;
    for (std::size_t i : failed) firms[i].inactive = true;

    if (step <= kEstablishmentSteps || failed.empty()) return outcome;
    if (survivors.empty()) return outcome;  // nobody to breed from this step

    auto firm_fitness = [](const Firm& f) {
        return f.memory.window.empty() ? 0.0 : fitness(f.memory, f.age);
    };

    // worst performers go first
    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(failed.size());
    for (std::size_t i : failed) ranked.emplace_back(firm_fitness(firms[i]), i);
    std::sort(ranked.begin(), ranked.end());

    const std::size_t cap = static_cast<std::size_t>(kReplacementCap * static_cast<double>(firms.size()));
    const std::size_t n_replace = std::min(cap, ranked.size());

    std::vector<double> parent_fitness;
    parent_fitness.reserve(survivors.size());
    double fitness_sum = 0.0;
    for (std::size_t i : survivors) {
        const double f = firm_fitness(firms[i]);
        parent_fitness.push_back(f);
        fitness_sum += f;
    }

    const std::array<bool, StrategyGenome::kParamCount> full_mask{true, true, true, true, true, true};

    for (std::size_t k = 0; k < n_replace; ++k) {
        // roulette-wheel parent draw; uniform when all fitness is zero
        std::size_t parent_idx = survivors.back();
        if (fitness_sum > 0.0) {
            double ticket = rng.uniform() * fitness_sum;
            for (std::size_t j = 0; j < survivors.size(); ++j) {
                ticket -= parent_fitness[j];
                if (ticket <= 0.0) {
                    parent_idx = survivors[j];
                    break;
                }
            }
        } else {
            parent_idx = survivors[rng.uniform_index(survivors.size())];
        }

        Firm& dead = firms[ranked[k].second];
        const Firm& parent = firms[parent_idx];

        outcome.removed_money += dead.money;

        Firm child;
        child.id = dead.id;
        child.location = dead.location;
        child.sector = dead.sector;
        child.trophic_level = dead.trophic_level;
        child.suppliers = dead.suppliers;
        child.monitoring_radius = dead.monitoring_radius;
        child.genome = mutate(parent.genome, full_mask, kSigmaInitial, rng);
        child.money = endowment.money;
        child.capital = endowment.capital;
        child.capital_target = endowment.capital;
        child.price = endowment.price;
        child.wage = endowment.wage;
        for (int s : child.suppliers) child.input_inventory[s] = 0.0;
        dead = child;

        outcome.replaced_count += 1;
        outcome.endowment_money += endowment.money;
        outcome.replaced_ids.push_back(child.id);
    }
    return outcome;
}

}  // namespace floodecon
