#pragma once

#include "seqpomdp/belief.hpp"
#include "seqpomdp/exact_dp.hpp"
#include "seqpomdp/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace seqpomdp {

/// Thrown when a table or policy is evaluated outside its stage extent.
struct OutOfDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Derived constants and closed-form error bounds for an (epsilon, h) run.
struct BoundsReport {
    double c1 = 0.0;
    double c2 = 0.0;
    double lipschitz_m = 0.0;
    double zeta_star = 0.0;
    double zeta_min = 0.0;
    double epsilon = 0.0;
    int horizon = 0;               // n(epsilon)
    bool horizon_clamped = false;  // epsilon >= R_max forced n = 1
    double spacing = 0.0;          // h
    double theorem1_bound = 0.0;   // (1+b) R M h / (1-b)^2
    double theorem2_bound = 0.0;   // 2 b (1+b) R M h / (1-b)^3
    double corollary2_bound = 0.0; // epsilon + theorem2_bound
    std::uint64_t grid_point_estimate = 0;  // anchors of the largest (stage-0) grid
    double asymptotic_grid_order = 0.0;     // (zeta* M (1/eps) ln(1/eps))^K
};

/// n(eps) = ceil((ln R_max + ln(1/eps)) / ln(1/beta)), clamped to >= 1.
int horizon_for_epsilon(const Model& model, double epsilon, bool* clamped = nullptr);

/// h = eps (1-beta)^3 / (2 beta (1+beta) R_max M), capped at 1; h = 1 if M = 0.
double spacing_for_epsilon(const Model& model, double epsilon);

/// Cell index i_l = floor(gamma_l / h + 1e-12); the nudge keeps exact
/// multiples of h on their own anchor despite floating-point representation.
std::vector<std::int64_t> snap_index(const GammaVector& gamma, double h);

/// Anchor (i_1 h, ..., i_K h) of gamma's cell.
GammaVector snap(const GammaVector& gamma, double h);

/// Piecewise-constant value (and greedy-policy) table over the stage-t grid
/// covering Gamma_{2n - t} = {gamma : ||gamma||_inf <= zeta* (2n - t)}.
class StageTable {
public:
    StageTable(int stage, int dims, double spacing, double extent);

    int stage() const { return stage_; }
    int dims() const { return dims_; }
    double spacing() const { return spacing_; }
    double extent() const { return extent_; }
    std::int64_t per_dim() const { return per_dim_; }
    std::uint64_t size() const { return static_cast<std::uint64_t>(values_.size()); }

    /// Flat row-major offset of a grid index; throws OutOfDomainError if any
    /// component is outside [0, per_dim).
    std::uint64_t offset(const std::vector<std::int64_t>& index) const;
    GammaVector anchor(std::uint64_t offset) const;

    double value_at(const GammaVector& gamma) const;  // snaps, then looks up
    int policy_at(const GammaVector& gamma) const;

    double value_at_offset(std::uint64_t off) const { return values_[off]; }
    int policy_at_offset(std::uint64_t off) const { return policy_[off]; }
    void set(std::uint64_t off, double value, int product) {
        values_[off] = value;
        policy_[off] = product;
    }

private:
    int stage_;
    int dims_;
    double spacing_;
    double extent_;
    std::int64_t per_dim_;
    std::vector<double> values_;
    std::vector<std::int32_t> policy_;
};

struct SolveConfig {
    std::optional<double> spacing;   // overrides spacing_for_epsilon
    std::optional<int> horizon;      // overrides n(epsilon)
    std::uint64_t grid_cap = 100'000'000;  // total anchors across all stages
};

/// Stage tables J~_0 .. J~_n plus greedy policies and the bounds report.
struct Solution {
    std::uint64_t model_hash = 0;
    double epsilon = 0.0;
    double spacing = 0.0;
    int horizon = 0;
    std::vector<StageTable> stages;  // index = stage, 0..horizon
    BoundsReport bounds;
};

BoundsReport bounds_report(const Model& model, double epsilon,
                           std::optional<double> spacing = std::nullopt,
                           std::optional<int> horizon = std::nullopt);

/// Exact anchor count of the largest (stage-0) grid:
/// prod_l (floor(zeta* 2 n(eps) / h) + 1). Throws GuardExceededError on
/// uint64 overflow.
std::uint64_t grid_point_count(const Model& model, int horizon, double spacing);

/// One application of the grid Bellman operator at gamma: the previous-stage
/// table is read piecewise-constantly and H_u is evaluated at gamma's anchor.
struct BellmanResult {
    double value = 0.0;
    int argmax = -1;  // ties broken by smallest product index
};
BellmanResult bellman_at(const Model& model, const StageTable& prev, const GammaVector& gamma);

/// Exact-operator variant: H_u at gamma itself (not the anchor); prev is
/// still read piecewise-constantly. At anchors this coincides with bellman_at.
BellmanResult bellman_exact_at(const Model& model, const StageTable& prev,
                               const GammaVector& gamma);

/// Policy-fixed operator T_mu at gamma for a given product.
double bellman_fixed_at(const Model& model, const StageTable& prev, const GammaVector& gamma,
                        int u);

/// Backward induction over stage grids. Throws GuardExceededError with a
/// suggested coarser spacing when the total anchor count exceeds the cap.
Solution solve(const Model& model, double epsilon, const SolveConfig& config = {});

/// Per-anchor certification of the value-error bound against the exact DP
/// oracle at one stage.
struct OracleCompareRow {
    GammaVector anchor;
    double exact = 0.0;
    double approx = 0.0;
    double diff = 0.0;
};
struct OracleCompareResult {
    int stage = 0;
    double bound = 0.0;     // theorem1_bound
    double max_diff = 0.0;
    bool pass = false;      // every anchor within bound + 1e-9
    std::vector<OracleCompareRow> rows;
};
OracleCompareResult oracle_compare(const Model& model, const Solution& solution, int stage,
                                   const ExactDpConfig& cfg = {});

}  // namespace seqpomdp
