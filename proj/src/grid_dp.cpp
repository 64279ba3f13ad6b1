#include "seqpomdp/grid_dp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace seqpomdp {

namespace {

constexpr double kSnapNudge = 1e-12;

std::int64_t cells_for_extent(double extent, double spacing) {
    return static_cast<std::int64_t>(std::floor(extent / spacing + kSnapNudge)) + 1;
}

std::uint64_t checked_pow_count(std::int64_t per_dim, int dims) {
    unsigned __int128 total = 1;
    for (int i = 0; i < dims; ++i) {
        total *= static_cast<unsigned __int128>(per_dim);
        if (total > static_cast<unsigned __int128>(UINT64_MAX))
            throw GuardExceededError("grid point count overflows uint64");
    }
    return static_cast<std::uint64_t>(total);
}

}  // namespace

int horizon_for_epsilon(const Model& model, double epsilon, bool* clamped) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    double n = std::ceil((std::log(model.r_max()) + std::log(1.0 / epsilon)) /
                         std::log(1.0 / model.discount()));
    bool clamp = !(n >= 1.0);
    if (clamped) *clamped = clamp;
    return clamp ? 1 : static_cast<int>(n);
}

double spacing_for_epsilon(const Model& model, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
    double m = model.lipschitz_m();
    if (m == 0.0) return 1.0;
    double beta = model.discount();
    double h = epsilon * std::pow(1.0 - beta, 3) /
               (2.0 * beta * (1.0 + beta) * model.r_max() * m);
    return std::min(h, 1.0);
}

std::vector<std::int64_t> snap_index(const GammaVector& gamma, double h) {
    std::vector<std::int64_t> idx(gamma.size());
    for (std::size_t l = 0; l < gamma.size(); ++l)
        idx[l] = static_cast<std::int64_t>(std::floor(gamma[l] / h + kSnapNudge));
    return idx;
}

GammaVector snap(const GammaVector& gamma, double h) {
    GammaVector anchor(gamma.size());
    auto idx = snap_index(gamma, h);
    for (std::size_t l = 0; l < gamma.size(); ++l) anchor[l] = static_cast<double>(idx[l]) * h;
    return anchor;
}

StageTable::StageTable(int stage, int dims, double spacing, double extent)
    : stage_(stage), dims_(dims), spacing_(spacing), extent_(extent),
      per_dim_(cells_for_extent(extent, spacing)) {
    std::uint64_t n = checked_pow_count(per_dim_, dims_);
    values_.assign(n, 0.0);
    policy_.assign(n, -1);
}

std::uint64_t StageTable::offset(const std::vector<std::int64_t>& index) const {
    if (static_cast<int>(index.size()) != dims_)
        throw std::invalid_argument("grid index dimension mismatch");
    std::uint64_t off = 0;
    for (int l = 0; l < dims_; ++l) {
        if (index[l] < 0 || index[l] >= per_dim_) {
            std::ostringstream os;
            os << "gamma outside stage-" << stage_ << " grid: index " << index[l]
               << " in dimension " << l << " not in [0, " << per_dim_ << ")";
            throw OutOfDomainError(os.str());
        }
        off = off * static_cast<std::uint64_t>(per_dim_) + static_cast<std::uint64_t>(index[l]);
    }
    return off;
}

GammaVector StageTable::anchor(std::uint64_t off) const {
    GammaVector gamma(dims_);
    for (int l = dims_ - 1; l >= 0; --l) {
        gamma[l] = static_cast<double>(off % static_cast<std::uint64_t>(per_dim_)) * spacing_;
        off /= static_cast<std::uint64_t>(per_dim_);
    }
    return gamma;
}

double StageTable::value_at(const GammaVector& gamma) const {
    return values_[offset(snap_index(gamma, spacing_))];
}

int StageTable::policy_at(const GammaVector& gamma) const {
    return policy_[offset(snap_index(gamma, spacing_))];
}

BellmanResult bellman_at(const Model& model, const StageTable& prev, const GammaVector& gamma) {
    GammaVector anchor = snap(gamma, prev.spacing());
    return bellman_exact_at(model, prev, anchor);
}

BellmanResult bellman_exact_at(const Model& model, const StageTable& prev,
                               const GammaVector& gamma) {
    const BeliefState post = posterior_from_gamma(model, gamma);
    BellmanResult best;
    GammaVector next(gamma.size());
    for (int u = 0; u < model.num_products(); ++u) {
        double h = h_from_belief(model, post, u);
        for (std::size_t l = 0; l < gamma.size(); ++l) next[l] = gamma[l] + model.exponent(u, l);
        double v = model.reward(u) * (1.0 - h) + model.discount() * prev.value_at(next) * h;
        if (best.argmax < 0 || v > best.value) best = {v, u};
    }
    return best;
}

double bellman_fixed_at(const Model& model, const StageTable& prev, const GammaVector& gamma,
                        int u) {
    double h = h_gamma(model, gamma, u);
    GammaVector next(gamma.size());
    for (std::size_t l = 0; l < gamma.size(); ++l) next[l] = gamma[l] + model.exponent(u, l);
    return model.reward(u) * (1.0 - h) + model.discount() * prev.value_at(next) * h;
}

std::uint64_t grid_point_count(const Model& model, int horizon, double spacing) {
    double extent = model.zeta_star() * 2.0 * horizon;
    return checked_pow_count(cells_for_extent(extent, spacing), model.basis_size());
}

BoundsReport bounds_report(const Model& model, double epsilon, std::optional<double> spacing,
                           std::optional<int> horizon) {
    BoundsReport rep;
    rep.c1 = model.c1();
    rep.c2 = model.c2();
    rep.lipschitz_m = model.lipschitz_m();
    rep.zeta_star = model.zeta_star();
    rep.zeta_min = model.zeta_min();
    rep.epsilon = epsilon;
    rep.horizon = horizon ? *horizon : horizon_for_epsilon(model, epsilon, &rep.horizon_clamped);
    rep.spacing = spacing ? *spacing : spacing_for_epsilon(model, epsilon);

    double beta = model.discount();
    double rm = model.r_max();
    double m = model.lipschitz_m();
    rep.theorem1_bound = (1.0 + beta) * rm * m * rep.spacing / std::pow(1.0 - beta, 2);
    rep.theorem2_bound = 2.0 * beta * (1.0 + beta) * rm * m * rep.spacing / std::pow(1.0 - beta, 3);
    rep.corollary2_bound = epsilon + rep.theorem2_bound;
    rep.grid_point_estimate = grid_point_count(model, rep.horizon, rep.spacing);

    double base = rep.zeta_star * m * (1.0 / epsilon) * std::log(1.0 / epsilon);
    rep.asymptotic_grid_order =
        base > 0.0 ? std::pow(base, model.basis_size()) : 0.0;
    return rep;
}

Solution solve(const Model& model, double epsilon, const SolveConfig& config) {
    Solution sol;
    sol.model_hash = model.hash();
    sol.epsilon = epsilon;
    sol.bounds = bounds_report(model, epsilon, config.spacing, config.horizon);
    sol.spacing = sol.bounds.spacing;
    sol.horizon = sol.bounds.horizon;

    const int n = sol.horizon;
    const double h = sol.spacing;
    const int k = model.basis_size();
    const double zstar = model.zeta_star();

    unsigned __int128 total = 0;
    for (int t = 0; t <= n; ++t) {
        double extent = zstar * static_cast<double>(2 * n - t);
        total += checked_pow_count(cells_for_extent(extent, h), k);
        if (total > static_cast<unsigned __int128>(config.grid_cap)) {
            double suggested = h;
            for (int i = 0; i < 80; ++i) {
                suggested *= 2.0;
                unsigned __int128 est = 0;
                bool fits = true;
                for (int s = 0; s <= n && fits; ++s) {
                    double ext = zstar * static_cast<double>(2 * n - s);
                    try {
                        est += checked_pow_count(cells_for_extent(ext, suggested), k);
                    } catch (const GuardExceededError&) {
                        fits = false;
                    }
                    if (est > static_cast<unsigned __int128>(config.grid_cap)) fits = false;
                }
                if (fits) break;
            }
            std::ostringstream os;
            os << "grid requires more than " << config.grid_cap
               << " anchors (~16 bytes each); retry with spacing >= " << suggested;
            throw GuardExceededError(os.str());
        }
    }

    sol.stages.reserve(n + 1);
    for (int t = 0; t <= n; ++t) {
        double extent = zstar * static_cast<double>(2 * n - t);
        sol.stages.emplace_back(t, k, h, extent);
    }

    for (int t = 1; t <= n; ++t) {
        StageTable& cur = sol.stages[t];
        const StageTable& prev = sol.stages[t - 1];
        const std::uint64_t count = cur.size();
        for (std::uint64_t off = 0; off < count; ++off) {
            GammaVector gamma = cur.anchor(off);
            BellmanResult r = bellman_exact_at(model, prev, gamma);  // anchors snap to themselves
            cur.set(off, r.value, r.argmax);
        }
    }
    return sol;
}

OracleCompareResult oracle_compare(const Model& model, const Solution& solution, int stage,
                                   const ExactDpConfig& cfg) {
    if (stage < 0 || stage >= static_cast<int>(solution.stages.size()))
        throw std::invalid_argument("stage out of range");
    const StageTable& table = solution.stages[stage];

    OracleCompareResult res;
    res.stage = stage;
    res.bound = solution.bounds.theorem1_bound;
    res.rows.reserve(table.size());
    for (std::uint64_t off = 0; off < table.size(); ++off) {
        OracleCompareRow row;
        row.anchor = table.anchor(off);
        row.approx = table.value_at_offset(off);
        row.exact = exact_value(model, row.anchor, stage, cfg).value;
        row.diff = std::abs(row.exact - row.approx);
        res.max_diff = std::max(res.max_diff, row.diff);
        res.rows.push_back(std::move(row));
    }
    res.pass = res.max_diff <= res.bound + 1e-9;
    return res;
}

}  // namespace seqpomdp
