#include "seqpomdp/model.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace seqpomdp {

namespace {

constexpr double kPriorTol = 1e-12;
constexpr double kRankTol = 1e-9;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void hash_bytes(std::uint64_t& h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
}

void hash_double(std::uint64_t& h, double v) {
    std::string s = fmt(v);
    hash_bytes(h, s.data(), s.size());
    hash_bytes(h, "|", 1);
}

}  // namespace

std::string ValidationReport::summary() const {
    std::ostringstream os;
    if (violations.empty()) {
        os << "valid";
    } else {
        os << violations.size() << " violation(s)";
        for (const auto& v : violations) os << "\n  violation: " << v;
    }
    for (const auto& w : warnings) os << "\n  warning: " << w;
    return os.str();
}

ValidationReport validate(const ModelSpec& spec) {
    ValidationReport rep;
    auto fail = [&rep](const std::string& msg) { rep.violations.push_back(msg); };

    const std::size_t n_states = spec.states.size();
    const std::size_t k = spec.basis.size();
    const std::size_t n_products = spec.rewards.size();

    if (n_states == 0) fail("model has no states");
    if (n_products == 0) fail("model has no products");
    if (spec.prior.size() != n_states)
        fail("prior has " + std::to_string(spec.prior.size()) + " entries, expected " +
             std::to_string(n_states));
    if (spec.exponents.size() != n_products)
        fail("zeta has " + std::to_string(spec.exponents.size()) + " rows, expected " +
             std::to_string(n_products));

    if (spec.prior.size() == n_states && n_states > 0) {
        double sum = 0.0;
        for (std::size_t x = 0; x < n_states; ++x) {
            if (!(spec.prior[x] > 0.0))
                fail("prior[" + std::to_string(x) + "] must be > 0, got " + fmt(spec.prior[x]));
            sum += spec.prior[x];
        }
        if (std::abs(sum - 1.0) > kPriorTol) fail("prior sums to " + fmt(sum));
    }

    for (std::size_t l = 0; l < k; ++l) {
        if (spec.basis[l].size() != n_states) {
            fail("basis row " + std::to_string(l) + " has " + std::to_string(spec.basis[l].size()) +
                 " entries, expected " + std::to_string(n_states));
            continue;
        }
        for (std::size_t x = 0; x < n_states; ++x) {
            double f = spec.basis[l][x];
            if (!(f > 0.0 && f <= 1.0))
                fail("basis entry must be in (0,1] at basis[" + std::to_string(l) + "][" +
                     std::to_string(x) + "], got " + fmt(f));
        }
    }

    for (std::size_t u = 0; u < spec.exponents.size(); ++u) {
        if (spec.exponents[u].size() != k) {
            fail("zeta row " + std::to_string(u) + " has " + std::to_string(spec.exponents[u].size()) +
                 " entries, expected " + std::to_string(k));
            continue;
        }
        bool all_zero = true;
        for (std::size_t l = 0; l < k; ++l) {
            double z = spec.exponents[u][l];
            if (!(z >= 0.0))
                fail("zeta[" + std::to_string(u) + "][" + std::to_string(l) + "] must be >= 0, got " +
                     fmt(z));
            if (z != 0.0) all_zero = false;
        }
        if (all_zero)
            rep.warnings.push_back("product " + std::to_string(u) +
                                   " has an all-zero zeta row (never purchased)");
    }

    for (std::size_t u = 0; u < n_products; ++u)
        if (!(spec.rewards[u] >= 0.0))
            fail("rewards[" + std::to_string(u) + "] must be >= 0, got " + fmt(spec.rewards[u]));

    if (!(spec.discount > 0.0 && spec.discount < 1.0))
        fail("beta must be in (0,1), got " + fmt(spec.discount));

    // Linear independence of the rows {ln f_l(.)}: warn only.
    if (rep.violations.empty() && k > 0) {
        Eigen::MatrixXd lf(k, n_states);
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t x = 0; x < n_states; ++x) lf(l, x) = std::log(spec.basis[l][x]);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(lf);
        const auto& sv = svd.singularValues();
        double smax = sv.size() > 0 ? sv(0) : 0.0;
        long rank = 0;
        for (long i = 0; i < sv.size(); ++i)
            if (sv(i) > kRankTol * std::max(smax, 1.0)) ++rank;
        if (rank < static_cast<long>(std::min(k, n_states)) || k > n_states)
            rep.warnings.push_back("log-basis rows are rank deficient (rank " + std::to_string(rank) +
                                   " of " + std::to_string(k) + ")");
    }

    return rep;
}

ModelSpec build_noisy_or(const NoisyOrSpec& spec, int feature_cap) {
    const int n = spec.n_features;
    if (n < 1 || n > feature_cap)
        throw std::invalid_argument("n_features must be in [1, " + std::to_string(feature_cap) +
                                    "], got " + std::to_string(n));
    if (static_cast<int>(spec.baselines.size()) != n)
        throw std::invalid_argument("baselines must have n_features entries");
    for (int i = 0; i < n; ++i)
        if (!(spec.baselines[i] > 0.0 && spec.baselines[i] < 1.0))
            throw std::invalid_argument("baselines[" + std::to_string(i) + "] must be in (0,1), got " +
                                        fmt(spec.baselines[i]));

    const std::size_t n_states = std::size_t{1} << n;
    ModelSpec out;
    out.states.reserve(n_states);
    for (std::size_t x = 0; x < n_states; ++x) {
        std::string label(n, '0');
        for (int i = 0; i < n; ++i)
            if ((x >> i) & 1U) label[i] = '1';
        out.states.push_back(label);
    }

    if (spec.prior.empty()) {
        out.prior.assign(n_states, 1.0 / static_cast<double>(n_states));
    } else {
        if (spec.prior.size() != n_states)
            throw std::invalid_argument("explicit prior must have 2^n_features entries");
        out.prior = spec.prior;
    }

    out.basis.assign(n, std::vector<double>(n_states));
    for (int i = 0; i < n; ++i)
        for (std::size_t x = 0; x < n_states; ++x)
            out.basis[i][x] = ((x >> i) & 1U) ? (1.0 - spec.baselines[i]) : 1.0;

    out.exponents = spec.exponents;
    out.rewards = spec.rewards;
    out.discount = spec.discount;
    return out;
}

Model::Model(ModelSpec spec) : spec_(std::move(spec)) {
    report_ = validate(spec_);
    if (!report_.ok()) throw std::invalid_argument("invalid model: " + report_.summary());

    const int n_states = num_states();
    const int k = basis_size();
    const int n_products = num_products();

    log_prior_.resize(n_states);
    for (int x = 0; x < n_states; ++x) log_prior_[x] = std::log(spec_.prior[x]);

    log_basis_.resize(static_cast<std::size_t>(k) * n_states);
    for (int l = 0; l < k; ++l)
        for (int x = 0; x < n_states; ++x)
            log_basis_[static_cast<std::size_t>(l) * n_states + x] = std::log(spec_.basis[l][x]);

    log_q_.resize(static_cast<std::size_t>(n_products) * n_states);
    q_.resize(log_q_.size());
    for (int u = 0; u < n_products; ++u) {
        for (int x = 0; x < n_states; ++x) {
            double lq = 0.0;
            for (int l = 0; l < k; ++l) lq += spec_.exponents[u][l] * log_basis(l, x);
            log_q_[static_cast<std::size_t>(u) * n_states + x] = lq;
            q_[static_cast<std::size_t>(u) * n_states + x] = std::exp(lq);
        }
    }

    r_max_ = *std::max_element(spec_.rewards.begin(), spec_.rewards.end());

    c1_ = 0.0;
    for (int u = 0; u < n_products; ++u) {
        double qmax = -std::numeric_limits<double>::infinity();
        double qmin = std::numeric_limits<double>::infinity();
        for (int x = 0; x < n_states; ++x) {
            qmax = std::max(qmax, response_prob(u, x));
            qmin = std::min(qmin, response_prob(u, x));
        }
        c1_ = std::max(c1_, qmax - qmin);
    }
    c1_ *= k;

    c2_ = 0.0;
    for (int l = 0; l < k; ++l) {
        double fmaxl = -std::numeric_limits<double>::infinity();
        double fminl = std::numeric_limits<double>::infinity();
        for (int x = 0; x < n_states; ++x) {
            fmaxl = std::max(fmaxl, log_basis(l, x));
            fminl = std::min(fminl, log_basis(l, x));
        }
        c2_ = std::max(c2_, fmaxl - fminl);
    }

    zeta_star_ = 0.0;
    zeta_min_ = std::numeric_limits<double>::infinity();
    for (int u = 0; u < n_products; ++u) {
        for (int l = 0; l < k; ++l) {
            zeta_star_ = std::max(zeta_star_, spec_.exponents[u][l]);
            zeta_min_ = std::min(zeta_min_, spec_.exponents[u][l]);
        }
    }
    if (k == 0) zeta_min_ = 0.0;

    std::uint64_t h = 1469598103934665603ULL;
    hash_bytes(h, "seqpomdp-model-v1|", 18);
    for (const auto& s : spec_.states) {
        hash_bytes(h, s.data(), s.size());
        hash_bytes(h, ";", 1);
    }
    for (double v : spec_.prior) hash_double(h, v);
    for (const auto& row : spec_.basis)
        for (double v : row) hash_double(h, v);
    for (const auto& row : spec_.exponents)
        for (double v : row) hash_double(h, v);
    for (double v : spec_.rewards) hash_double(h, v);
    hash_double(h, spec_.discount);
    hash_ = h;
}

ScalabilityCaps Model::scalability_caps() const {
    ScalabilityCaps caps;
    const int n_states = num_states();
    const int k = basis_size();

    double alpha = 0.0;    // max f
    double delta = 1.0;    // min f
    for (int l = 0; l < k; ++l) {
        for (int x = 0; x < n_states; ++x) {
            alpha = std::max(alpha, basis(l, x));
            delta = std::min(delta, basis(l, x));
        }
    }
    double nu = 1.0;       // min q
    for (int u = 0; u < num_products(); ++u)
        for (int x = 0; x < n_states; ++x) nu = std::min(nu, response_prob(u, x));

    // sup_w w*theta^w = (1/e) log_theta(1/e) with theta = alpha^zeta_min
    if (alpha < 1.0 && zeta_min_ > 0.0)
        caps.c1_cap = 1.0 / (std::exp(1.0) * zeta_min_ * std::log(1.0 / alpha));
    if (delta > 0.0) caps.c2_cap = std::log(1.0 / delta);
    if (alpha < 1.0 && nu > 0.0) caps.zeta_star_cap = std::log(1.0 / nu) / std::log(1.0 / alpha);
    return caps;
}

}  // namespace seqpomdp
