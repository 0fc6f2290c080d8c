#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fairmdp/offline.hpp"
#include "fairmdp/online.hpp"
#include "fairmdp/oracle.hpp"
#include "support/fixtures.hpp"

using namespace fairmdp;
using namespace fairmdp::testing;

TEST_CASE("pessimistic reward formula instantiation") {
    // r_bar = 0.5, b^r = 0.1, H sum b^p = 0.2, eps/H = 0.05
    // -> max{0.4, 0.05} - 0.2 = 0.2
    RewardTable r_bar(2, 1, 1, 1);
    r_bar.at(0, 0, 0, 0) = 0.5;
    r_bar.at(1, 0, 0, 0) = 0.5;
    Array3 b_r(2, 1, 1, 0.1);
    Array4 b_p(1, 1, 1, 1, 0.1);  // H * sum = 2 * 0.1 = 0.2 at h = 0
    RewardTable lower = pessimistic_rewards(r_bar, b_r, b_p, 0.1);
    CHECK(lower.at(0, 0, 0, 0) == doctest::Approx(0.2));
    // last step has no transition term: max{0.4, 0.05} = 0.4
    CHECK(lower.at(1, 0, 0, 0) == doctest::Approx(0.4));

    // zero-width limit gives back the empirical means
    Array3 no_r(2, 1, 1, 0.0);
    Array4 no_p(1, 1, 1, 1, 0.0);
    RewardTable same = pessimistic_rewards(r_bar, no_r, no_p, 0.1);
    CHECK(same.at(0, 0, 0, 0) == doctest::Approx(0.5));
    CHECK(same.at(1, 0, 0, 0) == doctest::Approx(0.5));

    // deeply uncertain cells are floored at -H
    Array3 big_r(2, 1, 1, 10.0);
    RewardTable floored = pessimistic_rewards(r_bar, big_r, b_p, 0.1);
    CHECK(floored.at(1, 0, 0, 0) == doctest::Approx(0.05));       // max{.., eps/H}
    Array4 big_p(1, 1, 1, 1, 10.0);
    RewardTable floored2 = pessimistic_rewards(r_bar, big_r, big_p, 0.1);
    CHECK(floored2.at(0, 0, 0, 0) == doctest::Approx(-2.0));
}

TEST_CASE("pessimistic model from a dataset on M1") {
    TabularMdp m1 = make_m1();
    // rewards away from the eps/H clamp so pessimism is strict; noisy
    // observations so the empirical means move
    TabularMdp noisy = m1;
    noisy.reward.at(0, 0, 0, 0) = 0.9;
    noisy.reward.at(0, 1, 0, 1) = 0.9;
    noisy.reward.at(0, 0, 0, 1) = 0.3;
    noisy.reward.at(0, 1, 0, 0) = 0.3;
    noisy.noise_half_width = 0.05;
    noisy.validate();
    PolicyTable uniform = PolicyTable::uniform(1, 1, 2);
    Dataset data = collect_dataset(noisy, uniform, 10'000, 11, "uniform");
    PessimisticModel model = build_pessimistic_model(data, noisy.dims(), 0.1, 0.1);

    CHECK(model.counts.at(0, 0, 0) + model.counts.at(0, 0, 1) == doctest::Approx(10'000));
    for (int i = 0; i < 2; ++i)
        for (int a = 0; a < 2; ++a) {
            // visited cells: pessimistic reward strictly below the truth
            CHECK(model.r_lower.at(0, i, 0, a) < noisy.reward.at(0, i, 0, a));
            CHECK(model.r_lower.at(0, i, 0, a) <= model.r_bar.at(0, i, 0, a) + 1e-12);
        }

    CHECK_THROWS_AS(build_pessimistic_model(Dataset{}, noisy.dims(), 0.1, 0.1),
                    std::invalid_argument);
}

TEST_CASE("solve_offline with zero widths recovers the plan solution") {
    TabularMdp mdp = random_mdp(2, 2, 2, 3, 1001);
    PolicyTable uniform = PolicyTable::uniform(3, 2, 2);
    Dataset data = collect_dataset(mdp, uniform, 2000, 12, "uniform");
    PessimisticModel model = build_pessimistic_model(data, mdp.dims(), 0.1, mdp.epsilon_floor);
    // test override: collapse every width and rebuild the pessimistic reward
    for (double& b : model.b_r.data) b = 0.0;
    for (double& b : model.b_p.data) b = 0.0;
    model.r_lower = pessimistic_rewards(model.r_bar, model.b_r, model.b_p, mdp.epsilon_floor);
    model.p_bar = mdp.transition;
    model.r_bar = mdp.reward;
    model.r_lower = mdp.reward;

    FairnessObjective f = FairnessObjective::max_min();
    OfflineResult sol = solve_offline(model, f, mdp.initial_distribution, {});
    PlanResult plan = solve_fair_plan(mdp.reward, mdp.transition, mdp.initial_distribution, f, {});
    CHECK(sol.pessimistic_value == doctest::Approx(plan.value).epsilon(1e-9));
    CHECK(sol.assumption_holds);
}

TEST_CASE("M1 pessimistic value is close below the optimum") {
    TabularMdp m1 = make_m1();
    PolicyTable uniform = PolicyTable::uniform(1, 1, 2);
    Dataset data = collect_dataset(m1, uniform, 10'000, 13, "uniform");
    PessimisticModel model = build_pessimistic_model(data, m1.dims(), 0.1, 0.1);
    FairnessObjective f = FairnessObjective::max_min();
    OfflineResult sol = solve_offline(model, f, m1.initial_distribution, {});

    double b_r_max = std::max(model.b_r.at(0, 0, 0), model.b_r.at(0, 0, 1));
    double c_f = lipschitz_constant(f, 2);
    CHECK(sol.pessimistic_value <= 0.55 + 1e-9);
    CHECK(sol.pessimistic_value >= 0.55 - 2.0 * 2.0 * c_f * b_r_max - 1e-9);
}

TEST_CASE("suboptimality evaluation") {
    TabularMdp m1 = make_m1();
    FairnessObjective f = FairnessObjective::max_min();
    PolicyTable greedy(1, 1, 2);
    greedy.at(0, 0, 0) = 1.0;
    CHECK(evaluate_suboptimality(greedy, m1, f, 0.55) == doctest::Approx(0.45));

    OracleResult oracle = brute_force_oracle(m1, f, 0.01);
    CHECK(evaluate_suboptimality(oracle.policy, m1, f, oracle.value) ==
          doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("more data does not hurt (10 vs 10^4 episodes, random instances)") {
    FairnessObjective f = FairnessObjective::max_min();
    PolicyTable uniform = PolicyTable::uniform(3, 2, 2);
    double subopt_small = 0.0, subopt_large = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        TabularMdp mdp = random_mdp(2, 2, 2, 3, 1500 + seed, 0.05);
        double optimum = brute_force_oracle(mdp, f, 0.02).value;
        Dataset small = collect_dataset(mdp, uniform, 10, seed, "uniform");
        Dataset large = collect_dataset(mdp, uniform, 10'000, seed, "uniform");
        OfflineResult a = solve_offline(
            build_pessimistic_model(small, mdp.dims(), 0.1, 0.1), f,
            mdp.initial_distribution, {});
        OfflineResult b = solve_offline(
            build_pessimistic_model(large, mdp.dims(), 0.1, 0.1), f,
            mdp.initial_distribution, {});
        subopt_small += evaluate_suboptimality(a.policy, mdp, f, optimum);
        subopt_large += evaluate_suboptimality(b.policy, mdp, f, optimum);
    }
    CHECK(subopt_large / 10.0 <= subopt_small / 10.0 + 1e-9);
}

TEST_CASE("build_pessimistic_model is deterministic in the dataset") {
    TabularMdp mdp = random_mdp(2, 2, 2, 3, 1002);
    Dataset data = collect_dataset(mdp, PolicyTable::uniform(3, 2, 2), 500, 14, "uniform");
    PessimisticModel a = build_pessimistic_model(data, mdp.dims(), 0.1, 0.1);
    PessimisticModel b = build_pessimistic_model(data, mdp.dims(), 0.1, 0.1);
    CHECK(a.r_lower.values == b.r_lower.values);
    CHECK(a.p_bar.probs == b.p_bar.probs);
}
