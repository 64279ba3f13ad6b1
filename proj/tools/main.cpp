#include "seqpomdp/io.hpp"
#include "seqpomdp/policy_eval.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace seqpomdp;

namespace {

// 0 success/pass, 1 bound-check failure, 2 validation failure,
// 3 I/O or format error, 4 guard exceeded
constexpr int kExitPass = 0;
constexpr int kExitBoundFail = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitIoError = 3;
constexpr int kExitGuard = 4;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_pair(double v) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%.17g  (%.6g)", v, v);
    return buf;
}

void print_bounds(std::ostream& out, const BoundsReport& rep) {
    out << "c1                " << fmt_pair(rep.c1) << "\n";
    out << "c2                " << fmt_pair(rep.c2) << "\n";
    out << "lipschitz_m       " << fmt_pair(rep.lipschitz_m) << "\n";
    out << "zeta_star         " << fmt_pair(rep.zeta_star) << "\n";
    out << "zeta_min          " << fmt_pair(rep.zeta_min) << "\n";
    out << "epsilon           " << fmt_pair(rep.epsilon) << "\n";
    out << "horizon           " << rep.horizon << (rep.horizon_clamped ? "  (clamped to 1)" : "")
        << "\n";
    out << "spacing           " << fmt_pair(rep.spacing) << "\n";
    out << "theorem1_bound    " << fmt_pair(rep.theorem1_bound) << "\n";
    out << "theorem2_bound    " << fmt_pair(rep.theorem2_bound) << "\n";
    out << "corollary2_bound  " << fmt_pair(rep.corollary2_bound) << "\n";
    out << "grid_points       " << rep.grid_point_estimate << "\n";
    out << "asymptotic_order  " << fmt_pair(rep.asymptotic_grid_order) << "\n";
}

Model load_model_or_exit(const std::string& path) {
    ModelSpec spec = load_model_spec(path);  // ParseError propagates to main
    auto report = validate(spec);
    if (!report.ok()) {
        std::cout << report.summary() << "\n";
        std::exit(kExitInvalid);
    }
    return Model(std::move(spec));
}

struct Options {
    std::string model_path;
    std::string tables_path;
    std::string out_path;
    double epsilon = 0.0;
    std::optional<double> spacing;
    std::optional<int> horizon;
    int stage = -1;
    std::int64_t episodes = 100'000;
    std::uint64_t seed = 0;
    std::uint64_t grid_cap = 100'000'000;
    std::uint64_t enum_cap = 10'000'000;
    bool attrition = false;
};

int cmd_validate(const Options& opt) {
    ModelSpec spec = load_model_spec(opt.model_path);
    auto report = validate(spec);
    std::cout << report.summary() << "\n";
    return report.ok() ? kExitPass : kExitInvalid;
}

int cmd_bounds(const Options& opt) {
    Model model = load_model_or_exit(opt.model_path);
    auto rep = bounds_report(model, opt.epsilon, opt.spacing, opt.horizon);
    std::cout << "model_hash        " << hash_hex(model.hash()) << "\n";
    print_bounds(std::cout, rep);
    return kExitPass;
}

int cmd_solve(const Options& opt) {
    Model model = load_model_or_exit(opt.model_path);
    SolveConfig cfg;
    cfg.spacing = opt.spacing;
    cfg.horizon = opt.horizon;
    cfg.grid_cap = opt.grid_cap;
    Solution sol = solve(model, opt.epsilon, cfg);

    std::uint64_t total = 0;
    for (const auto& stage : sol.stages) total += stage.size();
    std::cout << "model_hash        " << hash_hex(model.hash()) << "\n";
    print_bounds(std::cout, sol.bounds);
    std::cout << "anchors_total     " << total << "\n";

    if (!opt.out_path.empty()) {
        save_solution_file(sol, opt.out_path);
        std::cout << "tables_written    " << opt.out_path << "\n";
    }
    return kExitPass;
}

int cmd_simulate(const Options& opt) {
    Model model = load_model_or_exit(opt.model_path);
    Solution sol = load_solution_file(opt.tables_path, model);
    auto res = simulate(model, sol, opt.episodes, opt.seed, opt.attrition);

    std::ostringstream report;
    report << "episodes          " << res.episodes << "\n";
    report << "seed              " << res.seed << "\n";
    report << "horizon           " << res.horizon << "\n";
    report << "attrition_mode    " << (opt.attrition ? "on" : "off") << "\n";
    report << "mean              " << fmt_pair(res.mean) << "\n";
    report << "stderr            " << fmt_pair(res.std_error) << "\n";
    report << "exact_policy_value " << fmt_pair(policy_value_exact(model, sol, sol.horizon))
           << "\n";
    print_bounds(report, sol.bounds);

    std::cout << report.str();
    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path);
        if (!out) throw std::runtime_error("cannot write report file: " + opt.out_path);
        out << report.str();
    }
    return kExitPass;
}

int cmd_oracle_compare(const Options& opt) {
    Model model = load_model_or_exit(opt.model_path);
    Solution sol = [&] {
        if (!opt.tables_path.empty()) return load_solution_file(opt.tables_path, model);
        SolveConfig cfg;
        cfg.spacing = opt.spacing;
        cfg.horizon = opt.horizon;
        cfg.grid_cap = opt.grid_cap;
        return solve(model, opt.epsilon, cfg);
    }();

    int stage = opt.stage >= 0 ? opt.stage : sol.horizon;
    ExactDpConfig dp_cfg;
    dp_cfg.state_cap = opt.enum_cap;
    auto cmp = oracle_compare(model, sol, stage, dp_cfg);

    std::cout << "stage " << cmp.stage << "  bound " << fmt17(cmp.bound) << "\n";
    std::cout << "anchor  exact  approx  |diff|  status\n";
    for (const auto& row : cmp.rows) {
        std::cout << "(";
        for (std::size_t l = 0; l < row.anchor.size(); ++l)
            std::cout << (l ? "," : "") << fmt17(row.anchor[l]);
        std::cout << ")  " << fmt17(row.exact) << "  " << fmt17(row.approx) << "  "
                  << fmt17(row.diff) << "  "
                  << (row.diff <= cmp.bound + 1e-9 ? "pass" : "FAIL") << "\n";
    }
    std::cout << "max_diff " << fmt17(cmp.max_diff) << "  " << (cmp.pass ? "PASS" : "FAIL")
              << "\n";
    return cmp.pass ? kExitPass : kExitBoundFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grid-based solver for gamma-parametrized product-sequencing POMDPs"};
    app.require_subcommand(1);
    Options opt;

    auto add_model = [&](CLI::App* cmd) {
        cmd->add_option("--model", opt.model_path, "model file (JSON)")->required();
    };
    auto add_solve_opts = [&](CLI::App* cmd) {
        cmd->add_option("--epsilon", opt.epsilon, "target accuracy epsilon")->required();
        cmd->add_option("--spacing", opt.spacing, "grid spacing h (default: from epsilon)");
        cmd->add_option("--horizon", opt.horizon, "override n(epsilon)");
        cmd->add_option("--grid-cap", opt.grid_cap, "max total grid anchors");
    };

    auto* validate_cmd = app.add_subcommand("validate", "check a model file");
    add_model(validate_cmd);

    auto* bounds_cmd = app.add_subcommand("bounds", "print constants and error bounds");
    add_model(bounds_cmd);
    add_solve_opts(bounds_cmd);

    auto* solve_cmd = app.add_subcommand("solve", "run grid value iteration, persist tables");
    add_model(solve_cmd);
    add_solve_opts(solve_cmd);
    solve_cmd->add_option("--out", opt.out_path, "artifact file to write");

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo rollout of a solved policy");
    add_model(sim_cmd);
    sim_cmd->add_option("--tables", opt.tables_path, "solve artifact")->required();
    sim_cmd->add_option("--episodes", opt.episodes, "episode count");
    sim_cmd->add_option("--seed", opt.seed, "RNG seed");
    sim_cmd->add_option("--out", opt.out_path, "also write the report here");
    sim_cmd->add_flag("--attrition-mode", opt.attrition,
                      "engagement-probability reading of beta (undiscounted rewards)");

    auto* cmp_cmd = app.add_subcommand("oracle-compare",
                                       "certify grid values against the exact DP oracle");
    add_model(cmp_cmd);
    add_solve_opts(cmp_cmd);
    cmp_cmd->add_option("--stage", opt.stage, "stage t to certify (default: n(epsilon))");
    cmp_cmd->add_option("--tables", opt.tables_path, "use a persisted artifact instead of solving");
    cmp_cmd->add_option("--enum-cap", opt.enum_cap, "exact-DP state guard");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitIoError;
    }

    try {
        if (validate_cmd->parsed()) return cmd_validate(opt);
        if (bounds_cmd->parsed()) return cmd_bounds(opt);
        if (solve_cmd->parsed()) return cmd_solve(opt);
        if (sim_cmd->parsed()) return cmd_simulate(opt);
        if (cmp_cmd->parsed()) return cmd_oracle_compare(opt);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const IntegrityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const GuardExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
    return kExitIoError;
}
