#include "seqpomdp/exact_dp.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace seqpomdp;
using namespace seqpomdp::testing;

TEST_CASE("exact_value on M2 at short horizons") {
    Model model(m2_spec());
    auto r0 = exact_value(model, {0.0}, 0);
    CHECK(r0.value == 0.0);
    CHECK(r0.best_product == -1);

    auto r1 = exact_value(model, {0.0}, 1);
    CHECK(r1.value == doctest::Approx(1.11).epsilon(1e-12));
    CHECK(r1.best_product == 1);

    // J_1 at the gammas reachable after one rejection
    auto j1_1 = exact_value(model, {1.0}, 1);
    CHECK(j1_1.value == doctest::Approx(1.02).epsilon(1e-10));
    auto j1_2 = exact_value(model, {2.0}, 1);
    CHECK(j1_2.value == doctest::Approx(2.0 * (1.0 - (0.125 * 0.25 + 0.32 * 0.64) / 0.445))
                            .epsilon(1e-10));

    auto r2 = exact_value(model, {0.0}, 2);
    CHECK(r2.value == doctest::Approx(1.11 + 0.9 * 0.445 * j1_2.value).epsilon(1e-10));
    CHECK(r2.value == doctest::Approx(1.48611).epsilon(1e-5));
    CHECK(r2.best_product == 1);
}

TEST_CASE("enumerate_sequences on M2") {
    Model model(m2_spec());
    auto t0 = enumerate_sequences(model, 0);
    CHECK(t0.value == 0.0);
    CHECK(t0.sequence.empty());

    auto t1 = enumerate_sequences(model, 1);
    CHECK(t1.value == doctest::Approx(1.11).epsilon(1e-12));
    REQUIRE(t1.sequence.size() == 1);
    CHECK(t1.sequence[0] == 1);

    auto t2 = enumerate_sequences(model, 2);
    CHECK(t2.value == doctest::Approx(exact_value(model, {0.0}, 2).value).epsilon(1e-12));
    CHECK(t2.sequence == std::vector<int>{1, 1});
}

TEST_CASE("oracle agreement on random models") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        Model model(random_model(rng, 8, 3, 3));
        for (int t : {1, 3, 5}) {
            double dp = exact_value(model, GammaVector(model.basis_size(), 0.0), t).value;
            double brute = enumerate_sequences(model, t).value;
            CHECK(std::abs(dp - brute) <= 1e-10);
        }
    }
}

TEST_CASE("value is monotone in horizon and bounded by R_max") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 10; ++trial) {
        Model model(random_model(rng, 8, 3, 3));
        ExactSolver solver(model);
        double prev = 0.0;
        for (int t = 0; t <= 8; ++t) {
            double v = solver.value(t).value;
            CHECK(v >= prev - 1e-12);
            CHECK(v >= 0.0);
            CHECK(v <= model.r_max() + 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("contraction tail bound (Lemma 1 statement)") {
    Model model(m2_spec());
    ExactSolver solver(model);
    for (int t = 1; t <= 10; ++t) {
        double gap = std::abs(solver.value(t).value - solver.value(t + 5).value);
        CHECK(gap <= std::pow(model.discount(), t) * model.r_max() + 1e-12);
    }
}

TEST_CASE("value function Lipschitz bound (Corollary 1 statement)") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        Model model(random_model(rng, 8, 2, 3));
        double lip = (1.0 + model.discount()) * model.r_max() * model.lipschitz_m() /
                     (1.0 - model.discount());
        for (int pair = 0; pair < 10; ++pair) {
            auto a = random_gamma(rng, model.basis_size(), 0.0, 10.0);
            auto b = random_gamma(rng, model.basis_size(), 0.0, 10.0);
            double dist = 0.0;
            for (int l = 0; l < model.basis_size(); ++l)
                dist = std::max(dist, std::abs(a[l] - b[l]));
            for (int t : {1, 4, 6}) {
                double diff =
                    std::abs(exact_value(model, a, t).value - exact_value(model, b, t).value);
                CHECK(diff <= lip * dist + 1e-9);
            }
        }
    }
}

TEST_CASE("single_product_closed_form") {
    CHECK(single_product_closed_form(0.5, 1.0, 0.9, -1) == doctest::Approx(0.5 / 0.55).epsilon(1e-12));
    CHECK(single_product_closed_form(1.0, 1.0, 0.9, -1) == 0.0);
    CHECK(single_product_closed_form(0.5, 1.0, 0.9, 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(single_product_closed_form(0.5, 1.0, 0.9, 0) == 0.0);

    // agrees with the exact DP on the single-product model
    Model model(single_product_spec());
    ExactSolver solver(model);
    for (int t : {1, 2, 5, 10}) {
        CHECK(solver.value(t).value ==
              doctest::Approx(single_product_closed_form(0.5, 1.0, 0.9, t)).epsilon(1e-12));
    }
}

TEST_CASE("rejection_state_count") {
    CHECK(rejection_state_count(3, 2) == 4);
    CHECK(rejection_state_count(0, 5) == 1);
    CHECK(rejection_state_count(2, 3) == 6);
    CHECK(rejection_state_count(10, 4) == 286);  // binom(13,3)
    CHECK_THROWS_AS((void)rejection_state_count(-1, 2), std::invalid_argument);
}

TEST_CASE("guards fire instead of grinding") {
    Model model(m2_spec());
    ExactDpConfig cfg;
    cfg.horizon_cap = 4;
    ExactSolver solver(model, {}, cfg);
    CHECK_THROWS_AS((void)solver.value(5), GuardExceededError);
    CHECK_THROWS_AS((void)enumerate_sequences(model, 40, 1000), GuardExceededError);
}
