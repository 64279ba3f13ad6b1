#pragma once

#include "seqpomdp/model.hpp"

#include <vector>

namespace seqpomdp {

/// K nonnegative exponent accumulators; identifies the posterior g(., gamma).
using GammaVector = std::vector<double>;

/// Explicit probability distribution over the state set.
using BeliefState = std::vector<double>;

/// g(x, gamma) ~ phi0(x) * prod_l f_l(x)^{gamma_l}, normalized. Evaluated in
/// log space with a max-term shift; gamma components in the hundreds are fine.
BeliefState posterior_from_gamma(const Model& model, const GammaVector& gamma);

/// One-step Bayes update after product u was not purchased:
/// (F_u phi)(x) = q_u(x) phi(x) / sum_z q_u(z) phi(z).
BeliefState bayes_update(const Model& model, const BeliefState& phi, int u);

/// No-purchase probability under an explicit belief: sum_x q_u(x) phi(x).
double h_from_belief(const Model& model, const BeliefState& phi, int u);

/// H_u(gamma) = h_from_belief(posterior_from_gamma(gamma), u).
double h_gamma(const Model& model, const GammaVector& gamma, int u);

struct HGradient {
    std::vector<double> partials;  // dH_u/dgamma_i = Cov_gamma(q_u(X), ln f_i(X))
    double one_norm = 0.0;         // <= M for every gamma, u
};

/// Gradient of H_u at gamma, from exact summation over the posterior.
HGradient grad_h(const Model& model, const GammaVector& gamma, int u);

/// gamma_l = sum over rejected products of zeta_{u,l}.
GammaVector gamma_from_history(const Model& model, const std::vector<int>& rejected);

}  // namespace seqpomdp
