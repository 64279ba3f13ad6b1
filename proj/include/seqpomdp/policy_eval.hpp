#pragma once

#include "seqpomdp/grid_dp.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace seqpomdp {

/// One simulated customer interaction.
struct EpisodeRecord {
    int profile = -1;                          // sampled X
    std::vector<std::pair<int, int>> steps;    // (product, response) per offer
    double discounted_reward = 0.0;
    bool purchased = false;                    // false => horizon (or attrition) ended it
};

struct SimulationResult {
    std::int64_t episodes = 0;
    std::uint64_t seed = 0;
    int horizon = 0;
    double mean = 0.0;
    double std_error = 0.0;
    std::vector<EpisodeRecord> sample;  // first few episodes, for the report
};

/// Exact expected value of the extracted greedy policy over t stages,
/// starting at gamma = 0: the policy-fixed Bellman recursion along the single
/// gamma path the deterministic policy induces.
double policy_value_exact(const Model& model, const Solution& solution, int t);

/// Monte Carlo rollout of the greedy policy. Each episode gets its own RNG
/// stream derived from (seed, episode index), so results are independent of
/// execution order. With attrition_mode the customer stays engaged w.p. beta
/// after each rejection and rewards are undiscounted; same mean in
/// expectation, excluded from the acceptance bounds.
SimulationResult simulate(const Model& model, const Solution& solution, std::int64_t episodes,
                          std::uint64_t seed, bool attrition_mode = false,
                          int sample_records = 3);

/// Product the deployed policy offers after the given rejection history.
/// Stage index is the remaining horizon n - |history|; throws
/// OutOfDomainError when the history exhausts the horizon.
int next_product(const Model& model, const Solution& solution, const std::vector<int>& history);

}  // namespace seqpomdp
