#include "seqpomdp/exact_dp.hpp"

#include <cmath>
#include <stdexcept>

namespace seqpomdp {

ExactSolver::ExactSolver(const Model& model, GammaVector base, ExactDpConfig cfg)
    : model_(model), base_(std::move(base)), cfg_(cfg) {
    if (base_.empty()) base_.assign(model.basis_size(), 0.0);
    if (static_cast<int>(base_.size()) != model.basis_size())
        throw std::invalid_argument("base gamma dimension mismatch");
}

GammaVector ExactSolver::gamma_for_counts(const std::vector<int>& counts) const {
    GammaVector gamma = base_;
    for (int u = 0; u < model_.num_products(); ++u)
        for (int l = 0; l < model_.basis_size(); ++l)
            gamma[l] += counts[u] * model_.exponent(u, l);
    return gamma;
}

ExactResult ExactSolver::value(int t) {
    if (t < 0) throw std::invalid_argument("horizon must be >= 0");
    if (t > cfg_.horizon_cap)
        throw GuardExceededError("horizon " + std::to_string(t) + " exceeds cap " +
                                 std::to_string(cfg_.horizon_cap));
    if (static_cast<int>(memo_.size()) < t + 1) memo_.resize(t + 1);
    std::vector<int> counts(model_.num_products(), 0);
    return recurse(counts, base_, t);
}

const std::map<std::vector<int>, ExactResult>& ExactSolver::stage_cache(int t) const {
    return memo_.at(t);
}

ExactResult ExactSolver::recurse(std::vector<int>& counts, const GammaVector& gamma, int t) {
    if (t == 0) return {0.0, -1};
    auto& stage = memo_[t];
    auto it = stage.find(counts);
    if (it != stage.end()) return it->second;

    if (++nodes_ > cfg_.state_cap)
        throw GuardExceededError("exact DP state count exceeds cap " +
                                 std::to_string(cfg_.state_cap));

    const BeliefState post = posterior_from_gamma(model_, gamma);
    ExactResult best{0.0, -1};
    for (int u = 0; u < model_.num_products(); ++u) {
        double h = h_from_belief(model_, post, u);
        counts[u] += 1;
        GammaVector next = gamma;
        for (int l = 0; l < model_.basis_size(); ++l) next[l] += model_.exponent(u, l);
        double cont = recurse(counts, next, t - 1).value;
        counts[u] -= 1;
        double v = model_.reward(u) * (1.0 - h) + model_.discount() * h * cont;
        if (best.best_product < 0 || v > best.value) best = {v, u};
    }
    stage.emplace(counts, best);
    return best;
}

ExactResult exact_value(const Model& model, const GammaVector& gamma, int t,
                        const ExactDpConfig& cfg) {
    ExactSolver solver(model, gamma, cfg);
    return solver.value(t);
}

namespace {

void enumerate_dfs(const Model& model, int depth, int t, const GammaVector& gamma,
                   double survive_disc, double acc, std::vector<int>& seq,
                   SequenceResult& best) {
    if (depth == t) {
        // DFS visits sequences in lexicographic order; strict improvement
        // keeps the lexicographically smallest maximizer.
        if (best.sequence.empty() || acc > best.value) best = {acc, seq};
        return;
    }
    const BeliefState post = posterior_from_gamma(model, gamma);
    for (int u = 0; u < model.num_products(); ++u) {
        double h = h_from_belief(model, post, u);
        seq.push_back(u);
        GammaVector next = gamma;
        for (int l = 0; l < model.basis_size(); ++l) next[l] += model.exponent(u, l);
        enumerate_dfs(model, depth + 1, t, next, survive_disc * model.discount() * h,
                      acc + survive_disc * model.reward(u) * (1.0 - h), seq, best);
        seq.pop_back();
    }
}

}  // namespace

SequenceResult enumerate_sequences(const Model& model, int t, std::uint64_t enumeration_cap) {
    if (t < 0) throw std::invalid_argument("horizon must be >= 0");
    double total = std::pow(static_cast<double>(model.num_products()), t);
    if (total > static_cast<double>(enumeration_cap))
        throw GuardExceededError("enumeration of |U|^t = " + std::to_string(total) +
                                 " sequences exceeds cap " + std::to_string(enumeration_cap));
    if (t == 0) return {0.0, {}};

    std::vector<int> seq;
    GammaVector zero(model.basis_size(), 0.0);
    SequenceResult best{0.0, {}};
    enumerate_dfs(model, 0, t, zero, 1.0, 0.0, seq, best);
    return best;
}

double single_product_closed_form(double q, double reward, double beta, int t) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("q must be in [0,1]");
    if (t == 0) return 0.0;
    double denom = 1.0 - beta * q;
    if (t < 0) return reward * (1.0 - q) / denom;
    return reward * (1.0 - q) * (1.0 - std::pow(beta * q, t)) / denom;
}

std::uint64_t rejection_state_count(int t, int m) {
    if (t < 0 || m < 1) throw std::invalid_argument("need t >= 0 and m >= 1");
    // binomial(t + m - 1, m - 1), exact with overflow detection
    unsigned __int128 result = 1;
    int k = m - 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<unsigned>(t + i);
        result /= static_cast<unsigned>(i);
        if (result > static_cast<unsigned __int128>(UINT64_MAX))
            throw GuardExceededError("rejection_state_count overflows uint64");
    }
    return static_cast<std::uint64_t>(result);
}

}  // namespace seqpomdp
