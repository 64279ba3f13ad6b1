#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqpomdp {

/// Raw problem instance as read from a model file. Unvalidated.
struct ModelSpec {
    std::vector<std::string> states;              // labels, indexed 0..|S|-1
    std::vector<double> prior;                    // phi0, one entry per state
    std::vector<std::vector<double>> basis;       // K rows of |S| values, f_l(x) in (0,1]
    std::vector<std::vector<double>> exponents;   // |U| rows of K values, zeta >= 0
    std::vector<double> rewards;                  // R_u >= 0
    double discount = 0.0;                        // beta in (0,1)
};

/// Noisy-OR instance over n binary features: f_i(x) = (1 - d_i)^{x_i}.
struct NoisyOrSpec {
    int n_features = 0;
    std::vector<double> baselines;                // d_i in (0,1)
    std::vector<std::vector<double>> exponents;   // |U| rows of n values
    std::vector<double> rewards;
    double discount = 0.0;
    std::vector<double> prior;                    // empty => uniform over {0,1}^n
};

struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;
    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

ValidationReport validate(const ModelSpec& spec);

/// Expands a noisy-OR spec into an explicit 2^n-state ModelSpec, states in
/// ascending bit order (feature i is bit i of the state index).
ModelSpec build_noisy_or(const NoisyOrSpec& spec, int feature_cap = 20);

/// Per-constant upper bounds from the scalability discussion; a bound is
/// nullopt when its hypothesis does not hold for this instance.
struct ScalabilityCaps {
    std::optional<double> c1_cap;         // requires max f < 1 and zeta_min > 0
    std::optional<double> c2_cap;         // requires min f > 0 (always true here)
    std::optional<double> zeta_star_cap;  // requires min q > 0 and max f < 1
};

/// Validated, immutable model with precomputed log tables. All member
/// functions are pure and safe for concurrent use.
class Model {
public:
    /// Throws std::invalid_argument listing every violation if the spec is
    /// invalid. Warnings (rank deficiency, all-zero zeta rows) are kept in
    /// report() but do not reject.
    explicit Model(ModelSpec spec);

    int num_states() const { return static_cast<int>(spec_.states.size()); }
    int num_products() const { return static_cast<int>(spec_.rewards.size()); }
    int basis_size() const { return static_cast<int>(spec_.basis.size()); }

    const ModelSpec& spec() const { return spec_; }
    const ValidationReport& report() const { return report_; }

    double prior(int x) const { return spec_.prior[x]; }
    double log_prior(int x) const { return log_prior_[x]; }
    double basis(int l, int x) const { return spec_.basis[l][x]; }
    double log_basis(int l, int x) const { return log_basis_[l * num_states() + x]; }
    double exponent(int u, int l) const { return spec_.exponents[u][l]; }
    const std::vector<double>& exponent_row(int u) const { return spec_.exponents[u]; }
    double reward(int u) const { return spec_.rewards[u]; }
    double discount() const { return spec_.discount; }
    double r_max() const { return r_max_; }

    /// q_u(x) = prod_l f_l(x)^{zeta_{u,l}}, evaluated in log space.
    double response_prob(int u, int x) const { return q_[u * num_states() + x]; }
    double log_response(int u, int x) const { return log_q_[u * num_states() + x]; }

    double c1() const { return c1_; }
    double c2() const { return c2_; }
    double lipschitz_m() const { return c1_ * c2_; }
    double zeta_star() const { return zeta_star_; }
    double zeta_min() const { return zeta_min_; }

    ScalabilityCaps scalability_caps() const;

    /// FNV-1a over the canonical serialization; used to bind persisted
    /// artifacts to the model they were computed from.
    std::uint64_t hash() const { return hash_; }

private:
    ModelSpec spec_;
    ValidationReport report_;
    std::vector<double> log_prior_;
    std::vector<double> log_basis_;  // K x |S| row-major
    std::vector<double> log_q_;      // |U| x |S| row-major
    std::vector<double> q_;
    double r_max_ = 0.0;
    double c1_ = 0.0;
    double c2_ = 0.0;
    double zeta_star_ = 0.0;
    double zeta_min_ = 0.0;
    std::uint64_t hash_ = 0;
};

}  // namespace seqpomdp
