#include "seqpomdp/belief.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace seqpomdp {

namespace {

void check_product(const Model& model, int u) {
    if (u < 0 || u >= model.num_products())
        throw std::out_of_range("product index " + std::to_string(u) + " out of range");
}

}  // namespace

BeliefState posterior_from_gamma(const Model& model, const GammaVector& gamma) {
    const int n_states = model.num_states();
    const int k = model.basis_size();
    if (static_cast<int>(gamma.size()) != k)
        throw std::invalid_argument("gamma has " + std::to_string(gamma.size()) +
                                    " components, expected " + std::to_string(k));

    BeliefState logw(n_states);
    double lmax = -std::numeric_limits<double>::infinity();
    for (int x = 0; x < n_states; ++x) {
        double lw = model.log_prior(x);
        for (int l = 0; l < k; ++l) lw += gamma[l] * model.log_basis(l, x);
        logw[x] = lw;
        lmax = std::max(lmax, lw);
    }
    double sum = 0.0;
    for (int x = 0; x < n_states; ++x) {
        logw[x] = std::exp(logw[x] - lmax);
        sum += logw[x];
    }
    for (int x = 0; x < n_states; ++x) logw[x] /= sum;
    return logw;
}

BeliefState bayes_update(const Model& model, const BeliefState& phi, int u) {
    check_product(model, u);
    const int n_states = model.num_states();
    if (static_cast<int>(phi.size()) != n_states)
        throw std::invalid_argument("belief size mismatch");

    BeliefState out(n_states);
    double denom = 0.0;
    for (int x = 0; x < n_states; ++x) {
        out[x] = model.response_prob(u, x) * phi[x];
        denom += out[x];
    }
    // q_u > 0 everywhere under model invariants, so denom > 0 for any belief.
    if (!(denom > 0.0)) throw std::logic_error("bayes_update: zero normalizer");
    for (int x = 0; x < n_states; ++x) out[x] /= denom;
    return out;
}

double h_from_belief(const Model& model, const BeliefState& phi, int u) {
    check_product(model, u);
    double h = 0.0;
    for (int x = 0; x < model.num_states(); ++x) h += model.response_prob(u, x) * phi[x];
    return h;
}

double h_gamma(const Model& model, const GammaVector& gamma, int u) {
    return h_from_belief(model, posterior_from_gamma(model, gamma), u);
}

HGradient grad_h(const Model& model, const GammaVector& gamma, int u) {
    check_product(model, u);
    const int n_states = model.num_states();
    const int k = model.basis_size();
    BeliefState post = posterior_from_gamma(model, gamma);

    double eq = 0.0;  // E[q_u(X)]
    for (int x = 0; x < n_states; ++x) eq += post[x] * model.response_prob(u, x);

    HGradient g;
    g.partials.resize(k);
    for (int i = 0; i < k; ++i) {
        double eql = 0.0, el = 0.0;
        for (int x = 0; x < n_states; ++x) {
            double lf = model.log_basis(i, x);
            eql += post[x] * model.response_prob(u, x) * lf;
            el += post[x] * lf;
        }
        g.partials[i] = eql - eq * el;
        g.one_norm += std::abs(g.partials[i]);
    }
    return g;
}

GammaVector gamma_from_history(const Model& model, const std::vector<int>& rejected) {
    GammaVector gamma(model.basis_size(), 0.0);
    for (int u : rejected) {
        check_product(model, u);
        for (int l = 0; l < model.basis_size(); ++l) gamma[l] += model.exponent(u, l);
    }
    return gamma;
}

}  // namespace seqpomdp
