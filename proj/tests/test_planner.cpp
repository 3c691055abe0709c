#include "doctest.h"

#include <cmath>

#include "did/planner.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace did;

namespace {

Objective deter_only() {
    Objective obj;
    obj.w_deter = 1.0;
    return obj;
}

/// Two techniques, two deceptions: the small one has the better
/// gain-per-cost ratio, the big one the better absolute gain, and the
/// budget only fits one of them.
ScenarioFile knapsack_trap() {
    ScenarioFile file;
    file.scenario.techniques = {testutil::make_technique("t1", Layer::Network, 0.0),
                                testutil::make_technique("t2", Layer::Network, 0.0)};
    // believe prob == per-encounter deterrence here (p_n=1, p_g=1).
    file.catalog = {
        testutil::make_deception("small", Layer::Network, {"t1"}, /*cost=*/1.0, /*believe=*/0.30),
        testutil::make_deception("big", Layer::Network, {"t2"}, /*cost=*/2.0, /*believe=*/0.55),
    };
    file.scenario.goal_benefit = 0.0;
    file.scenario.threshold = 10;
    file.profile = {/*patience=*/0.0, /*adaptability=*/0.0, /*suspiciousness=*/0.0,
                    /*alertness=*/1.0, /*skill=*/0.5};
    file.costs = {0.5, 0.0, 1.0};
    return file;
}

} // namespace

TEST_CASE("zero budget yields the empty plan") {
    Xoshiro256 rng(1);
    const auto file = testutil::random_planner_file(rng, 5);
    const auto exhaustive = plan_exhaustive(file, 0.0, deter_only());
    CHECK(exhaustive.chosen.empty());
    CHECK(exhaustive.total_cost == 0.0);
    const auto greedy = plan_greedy(file, 0.0, deter_only());
    CHECK(greedy.chosen.empty());
}

TEST_CASE("empty plans score zero under a pure deterrence objective") {
    Xoshiro256 rng(2);
    const auto file = testutil::random_planner_file(rng, 4);
    CHECK(objective_value(file, {}, deter_only(), 5.0) == doctest::Approx(0.0));
}

TEST_CASE("a single affordable deception with positive value is chosen") {
    const auto file = testutil::canonical_file();
    const auto plan = plan_exhaustive(file, 10.0, deter_only());
    REQUIRE(plan.chosen.size() == 1);
    CHECK(plan.chosen[0].first == "net_down");
    CHECK(plan.objective_value == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("objective value scales linearly in the weights") {
    Xoshiro256 rng(3);
    const auto file = testutil::random_planner_file(rng, 4);
    Objective obj;
    obj.w_deter = 1.0;
    obj.w_time = 0.5;
    obj.w_cost = 0.3;
    Objective doubled = obj;
    doubled.w_deter *= 2.0;
    doubled.w_time *= 2.0;
    doubled.w_cost *= 2.0;
    const std::vector<std::string> ids = {file.catalog[0].id, file.catalog[1].id};
    const double v1 = objective_value(file, ids, obj, 10.0);
    const double v2 = objective_value(file, ids, doubled, 10.0);
    CHECK(v2 == doctest::Approx(2.0 * v1).epsilon(1e-9));
}

TEST_CASE("exhaustive matches the independent brute-force search on random instances") {
    Xoshiro256 rng(404);
    for (int i = 0; i < 25; ++i) {
        const int n = testutil::rand_int(rng, 1, 8);
        const auto file = testutil::random_planner_file(rng, n, rng.bernoulli(0.3));
        const double budget = testutil::rand_range(rng, 0.0, 6.0);
        Objective obj;
        obj.w_deter = 1.0;
        obj.w_time = rng.bernoulli(0.5) ? 0.5 : 0.0;
        obj.w_cost = rng.bernoulli(0.5) ? 0.3 : 0.0;

        const auto plan = plan_exhaustive(file, budget, obj);
        const auto expected = oracle::brute_force_plan(file, obj, budget);
        CHECK(plan.objective_value == expected.objective); // exact, same arithmetic
        CHECK(plan.total_cost == expected.total_cost);
        CHECK(plan.chosen_ids() == expected.ids);
    }
}

TEST_CASE("greedy equals exhaustive when everything fits the budget") {
    Xoshiro256 rng(7);
    ScenarioFile file = testutil::random_planner_file(rng, 5);
    // Give every deception real deterrence value so marginal gains stay
    // positive, and a budget that covers the whole catalog.
    for (auto& entry : file.catalog) entry.base_believe_prob = 0.6;
    file.profile.suspiciousness = 0.2;
    file.profile.alertness = 0.7;
    file.profile.adaptability = 0.3;
    file.scenario.conditional_table.entries.clear();
    const auto greedy = plan_greedy(file, 100.0, deter_only());
    const auto exhaustive = plan_exhaustive(file, 100.0, deter_only());
    CHECK(greedy.chosen_ids() == exhaustive.chosen_ids());
    CHECK(greedy.objective_value == doctest::Approx(exhaustive.objective_value));
    CHECK(greedy.chosen.size() == file.catalog.size());
}

TEST_CASE("knapsack trap: greedy is suboptimal and the gap is reported") {
    const auto file = knapsack_trap();
    const auto greedy = plan_greedy(file, 2.0, deter_only());
    const auto exhaustive = plan_exhaustive(file, 2.0, deter_only());

    REQUIRE(greedy.chosen.size() == 1);
    CHECK(greedy.chosen[0].first == "small");
    REQUIRE(exhaustive.chosen.size() == 1);
    CHECK(exhaustive.chosen[0].first == "big");
    CHECK(greedy.objective_value < exhaustive.objective_value);

    const double gap = greedy.objective_value / exhaustive.objective_value;
    MESSAGE("greedy/exhaustive gap on the constructed counterexample: ", gap);
    CHECK(gap == doctest::Approx(0.30 / 0.55).epsilon(1e-6));
}

TEST_CASE("exhaustive is never worse than greedy") {
    Xoshiro256 rng(505);
    for (int i = 0; i < 20; ++i) {
        const auto file = testutil::random_planner_file(rng, testutil::rand_int(rng, 1, 7));
        const double budget = testutil::rand_range(rng, 0.5, 5.0);
        const auto exhaustive = plan_exhaustive(file, budget, deter_only());
        const auto greedy = plan_greedy(file, budget, deter_only());
        CHECK(exhaustive.objective_value >= greedy.objective_value - 1e-12);
    }
}

TEST_CASE("plans are feasible and respect declared layers") {
    Xoshiro256 rng(606);
    for (int i = 0; i < 20; ++i) {
        const auto file = testutil::random_planner_file(rng, testutil::rand_int(rng, 1, 8),
                                                        rng.bernoulli(0.5));
        const double budget = testutil::rand_range(rng, 0.0, 5.0);
        for (const auto* plan_method : {"e", "g"}) {
            const auto plan = plan_method[0] == 'e' ? plan_exhaustive(file, budget, deter_only())
                                                    : plan_greedy(file, budget, deter_only());
            CHECK(plan.total_cost <= budget + 1e-12);
            double cost = 0.0;
            for (const auto& [id, layer] : plan.chosen) {
                const auto* entry = file.find_deception(id);
                REQUIRE(entry != nullptr);
                CHECK(entry->layer == layer);
                cost += entry->deploy_cost;
            }
            CHECK(plan.total_cost == doctest::Approx(cost));
        }
    }
}

TEST_CASE("identical inputs give identical plans, including Monte Carlo mode") {
    Xoshiro256 rng(707);
    const auto file = testutil::random_planner_file(rng, 5);
    const auto a = plan_exhaustive(file, 3.0, deter_only());
    const auto b = plan_exhaustive(file, 3.0, deter_only());
    CHECK(a == b);

    Objective mc;
    mc.mode = EvalMode::MonteCarlo;
    mc.mc_trials = 2000;
    mc.mc_seed = 11;
    const auto c = plan_greedy(file, 3.0, mc);
    const auto d = plan_greedy(file, 3.0, mc);
    CHECK(c == d);
}

TEST_CASE("raising the budget never lowers the exhaustive objective") {
    Xoshiro256 rng(808);
    for (int i = 0; i < 20; ++i) {
        const auto file = testutil::random_planner_file(rng, testutil::rand_int(rng, 1, 7));
        const double lo = testutil::rand_range(rng, 0.0, 3.0);
        const double hi = lo + testutil::rand_range(rng, 0.0, 3.0);
        Objective obj;
        obj.w_deter = 1.0;
        obj.w_cost = rng.bernoulli(0.5) ? 0.4 : 0.0;
        const auto small = plan_exhaustive(file, lo, obj);
        const auto large = plan_exhaustive(file, hi, obj);
        CHECK(large.objective_value >= small.objective_value - 1e-12);
    }
}

TEST_CASE("oversized catalogs are rejected by exhaustive with a size message") {
    Xoshiro256 rng(909);
    const auto file = testutil::random_planner_file(rng, 20);
    CHECK_THROWS_WITH_AS(plan_exhaustive(file, 5.0, deter_only()),
                         doctest::Contains("greedy"), std::invalid_argument);
    CHECK_NOTHROW(plan_greedy(file, 2.0, deter_only()));
}

TEST_CASE("analytic divergence falls back to Monte Carlo with a warning") {
    ScenarioFile file = testutil::canonical_file();
    file.profile.alertness = 1.0;
    file.profile.suspiciousness = 0.0;
    file.profile.adaptability = 1.0; // retry forever
    file.catalog[0].base_believe_prob = 1.0;

    std::vector<std::string> warnings;
    const double value = objective_value(file, {"net_down"}, deter_only(), 5.0, &warnings);
    REQUIRE_FALSE(warnings.empty());
    // Every trial exhausts its retries, so the defender always succeeds.
    CHECK(value == doctest::Approx(1.0));
}

TEST_CASE("invalid objectives are rejected") {
    const auto file = testutil::canonical_file();
    Objective zero;
    zero.w_deter = 0.0;
    CHECK_THROWS_AS(plan_exhaustive(file, 1.0, zero), std::invalid_argument);
    Objective negative;
    negative.w_time = -1.0;
    CHECK_THROWS_AS(plan_greedy(file, 1.0, negative), std::invalid_argument);
    CHECK_THROWS_AS(plan_exhaustive(file, -1.0, deter_only()), std::invalid_argument);
}
