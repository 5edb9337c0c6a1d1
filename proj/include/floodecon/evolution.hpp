#pragma once

#include <array>
#include <vector>

#include "floodecon/agents.hpp"
#include "floodecon/rng.hpp"

namespace floodecon {

// Fitness weights and thresholds for the firm learning loop. The four
// component weights are fixed: growth 0.4, production stability 0.3,
// survival 0.2, resource balance 0.1.
constexpr double kFitnessGrowthWeight = 0.4;
constexpr double kFitnessStabilityWeight = 0.3;
constexpr double kFitnessSurvivalWeight = 0.2;
constexpr double kFitnessBalanceWeight = 0.1;
constexpr int kSurvivalSaturationSteps = 20;

constexpr int kMutationInterval = 5;        // mutation considered every 5 steps
constexpr double kMutationProbability = 0.30;  // per parameter
constexpr double kSigmaInitial = 0.05;
constexpr double kSigmaImproved = 0.025;
constexpr double kSigmaDeclined = 0.10;

constexpr double kSurvivalMoneyFloor = 1.0;    // fail below 1 monetary unit
constexpr double kDeclineFraction = 0.5;       // fail on >50% loss over the lookback
constexpr std::size_t kDeclineLookback = 5;    // records spanned by the decline check
constexpr int kEstablishmentSteps = 5;         // no replacement during the first 5 steps
constexpr double kReplacementCap = 0.25;       // at most 25% of the population per step

// Weighted four-component score in [0, 1]:
//   growth    tanh of the clamped money growth ratio over the window
//   stability 1 - coefficient of variation of production (0 if mean is 0)
//   survival  age / 20, capped at 1
//   balance   Shannon entropy of limiting factors over {labor, capital,
//             input}, normalized by ln 3
// Throws on an empty window.
double fitness(const PerformanceMemory& memory, int age);

// All-false off the 5-step schedule; on schedule each of the 6 parameters
// is selected independently with probability 0.30.
std::array<bool, StrategyGenome::kParamCount> should_mutate(int step, RngStream& rng);

// Hill-climbing sigma: 0.05 with no history, 0.025 after improvement,
// 0.10 after decline, unchanged on an exact tie. Updates last_fitness.
double select_sigma(MutationState& state, double current_fitness);

// Multiplicative Gaussian noise p * (1 + N(0, sigma)) on the masked
// parameters, then bound clamping and budget-weight renormalization.
StrategyGenome mutate(const StrategyGenome& genome, const std::array<bool, StrategyGenome::kParamCount>& mask,
                      double sigma, RngStream& rng);

// Failure: money below the survival floor, or money down more than 50%
// across the last 5 recorded steps.
bool is_failed(const Firm& firm);

struct ReplacementOutcome {
    int failed_count = 0;
    int replaced_count = 0;
    double endowment_money = 0.0;  // external source, for the ledger
    double removed_money = 0.0;    // money leaving with replaced firms, external sink
    std::vector<int> replaced_ids;
};

struct EntryEndowment {
    double money = 10.0;
    double capital = 5.0;
    double price = 1.0;
    double wage = 1.0;
};

// Replaces up to floor(0.25 * population) failed firms (worst fitness
// first) with mutated offspring of fitness-proportionally drawn survivors.
// Offspring keep the dead firm's id, location, sector, trophic level, and
// supplier links; state, memory, and age start fresh with the entry
// endowment. No-op during the establishment period or when every firm has
// failed. Firms that stay failed but uncapped are marked inactive; they
// produce nothing until replaced or recovered.
ReplacementOutcome replace_failed(std::vector<Firm>& firms, int step, const EntryEndowment& endowment,
                                  RngStream& rng);

}  // namespace floodecon
