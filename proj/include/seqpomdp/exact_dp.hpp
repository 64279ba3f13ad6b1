#pragma once

#include "seqpomdp/belief.hpp"
#include "seqpomdp/model.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace seqpomdp {

/// Thrown when a configured desk-scale guard (horizon, state count,
/// enumeration size, grid memory) would be exceeded.
struct GuardExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExactDpConfig {
    int horizon_cap = 64;
    std::uint64_t state_cap = 5'000'000;        // distinct memoized (t, counts) nodes
    std::uint64_t enumeration_cap = 10'000'000; // |U|^t guard for enumerate_sequences
};

struct ExactResult {
    double value = 0.0;
    int best_product = -1;  // -1 when t = 0
};

/// Finite-horizon optimal value J_t by memoized recursion from a base gamma.
/// Reachable states are keyed by the integer count vector of rejections per
/// product, so memo keys never involve floating point. Ties in the max are
/// broken by smallest product index.
class ExactSolver {
public:
    explicit ExactSolver(const Model& model, GammaVector base = {}, ExactDpConfig cfg = {});

    /// J_t at the base gamma, with the optimizing product for the first step.
    ExactResult value(int t);

    /// All memoized values for a given stage, keyed by rejection counts.
    /// Gamma for a key is base + sum_u counts[u] * zeta_u.
    const std::map<std::vector<int>, ExactResult>& stage_cache(int t) const;

    GammaVector gamma_for_counts(const std::vector<int>& counts) const;

private:
    ExactResult recurse(std::vector<int>& counts, const GammaVector& gamma, int t);

    const Model& model_;
    GammaVector base_;
    ExactDpConfig cfg_;
    std::uint64_t nodes_ = 0;
    std::vector<std::map<std::vector<int>, ExactResult>> memo_;  // per stage
};

/// Convenience single-shot query.
ExactResult exact_value(const Model& model, const GammaVector& gamma, int t,
                        const ExactDpConfig& cfg = {});

struct SequenceResult {
    double value = 0.0;
    std::vector<int> sequence;  // lexicographically smallest among ties
};

/// Independent oracle: exhaustive max over all |U|^t product sequences of the
/// expected discounted reward from gamma = 0.
SequenceResult enumerate_sequences(const Model& model, int t,
                                   std::uint64_t enumeration_cap = 10'000'000);

/// Value of repeatedly offering one product with constant no-purchase
/// probability q: geometric series R(1-q)(1-(beta*q)^t)/(1-beta*q),
/// with t < 0 meaning the infinite horizon.
double single_product_closed_form(double q, double reward, double beta, int t);

/// binomial(t + m - 1, m - 1): size of the rejection-count state space after
/// t steps with m products. Throws GuardExceededError on uint64 overflow.
std::uint64_t rejection_state_count(int t, int m);

}  // namespace seqpomdp
