#include "seqpomdp/policy_eval.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace seqpomdp {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform in [0,1) with 53 random bits; keeps episode streams bit-stable
// across standard libraries.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

int sample_profile(const Model& model, double u) {
    double cdf = 0.0;
    for (int x = 0; x < model.num_states(); ++x) {
        cdf += model.prior(x);
        if (u < cdf) return x;
    }
    return model.num_states() - 1;
}

}  // namespace

double policy_value_exact(const Model& model, const Solution& solution, int t) {
    if (t < 0 || t > solution.horizon)
        throw std::invalid_argument("t must be in [0, horizon]");
    GammaVector gamma(model.basis_size(), 0.0);
    double survive_disc = 1.0;
    double value = 0.0;
    for (int stage = t; stage >= 1; --stage) {
        int u = solution.stages[stage].policy_at(gamma);
        double h = h_gamma(model, gamma, u);
        value += survive_disc * model.reward(u) * (1.0 - h);
        survive_disc *= model.discount() * h;
        for (int l = 0; l < model.basis_size(); ++l) gamma[l] += model.exponent(u, l);
    }
    return value;
}

SimulationResult simulate(const Model& model, const Solution& solution, std::int64_t episodes,
                          std::uint64_t seed, bool attrition_mode, int sample_records) {
    if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");

    SimulationResult res;
    res.episodes = episodes;
    res.seed = seed;
    res.horizon = solution.horizon;

    const int n = solution.horizon;
    const double beta = model.discount();
    double sum = 0.0, sumsq = 0.0;

    for (std::int64_t ep = 0; ep < episodes; ++ep) {
        std::mt19937_64 rng(splitmix64(seed ^ (0x5851F42D4C957F2DULL * static_cast<std::uint64_t>(ep + 1))));
        EpisodeRecord rec;
        rec.profile = sample_profile(model, uniform01(rng));

        GammaVector gamma(model.basis_size(), 0.0);
        for (int step = 1; step <= n; ++step) {
            int stage = n - (step - 1);
            int u = solution.stages[stage].policy_at(gamma);
            double purchase_prob = 1.0 - model.response_prob(u, rec.profile);
            bool bought = uniform01(rng) < purchase_prob;
            rec.steps.emplace_back(u, bought ? 1 : 0);
            if (bought) {
                rec.discounted_reward =
                    attrition_mode ? model.reward(u)
                                   : std::pow(beta, step - 1) * model.reward(u);
                rec.purchased = true;
                break;
            }
            for (int l = 0; l < model.basis_size(); ++l) gamma[l] += model.exponent(u, l);
            if (attrition_mode && !(uniform01(rng) < beta)) break;
        }

        sum += rec.discounted_reward;
        sumsq += rec.discounted_reward * rec.discounted_reward;
        if (static_cast<int>(res.sample.size()) < sample_records) res.sample.push_back(std::move(rec));
    }

    res.mean = sum / static_cast<double>(episodes);
    if (episodes > 1) {
        double var = (sumsq - static_cast<double>(episodes) * res.mean * res.mean) /
                     static_cast<double>(episodes - 1);
        res.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(episodes));
    }
    return res;
}

int next_product(const Model& model, const Solution& solution, const std::vector<int>& history) {
    int t = solution.horizon - static_cast<int>(history.size());
    if (t < 1)
        throw OutOfDomainError("rejection history of length " + std::to_string(history.size()) +
                               " exhausts the horizon n = " + std::to_string(solution.horizon));
    GammaVector gamma = gamma_from_history(model, history);
    return solution.stages[t].policy_at(gamma);
}

}  // namespace seqpomdp
