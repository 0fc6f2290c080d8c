#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fairmdp/mdp.hpp"
#include "fairmdp/occupancy.hpp"
#include "support/fixtures.hpp"

using namespace fairmdp;
using namespace fairmdp::testing;

TEST_CASE("random generation: validity, determinism, row sums") {
    RandomMdpConfig cfg = appendix_f_config(42);
    TabularMdp a = generate_random_mdp(cfg);
    TabularMdp b = generate_random_mdp(cfg);
    CHECK(a.transition.probs == b.transition.probs);
    CHECK(a.reward.values == b.reward.values);
    for (int h = 0; h < a.horizon - 1; ++h)
        for (int s = 0; s < a.num_states; ++s)
            for (int a2 = 0; a2 < a.num_actions; ++a2) {
                double total = 0.0;
                for (double x : a.transition.row(h, s, a2)) total += x;
                CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
            }
    for (double r : a.reward.values) {
        CHECK(r >= 0.15);
        CHECK(r <= 0.95);
    }

    TabularMdp c = generate_random_mdp(appendix_f_config(43));
    CHECK(c.reward.values != a.reward.values);
}

TEST_CASE("random generation rejects invalid bounds") {
    RandomMdpConfig cfg = appendix_f_config(1);
    cfg.reward_low = 0.02;  // 0.02 - 0.05 < eps/H
    CHECK_THROWS_AS(generate_random_mdp(cfg), std::invalid_argument);
    cfg = appendix_f_config(1);
    cfg.reward_high = 0.98;  // 0.98 + 0.05 > 1
    CHECK_THROWS_AS(generate_random_mdp(cfg), std::invalid_argument);
}

TEST_CASE("observe_reward: zero noise, support, Monte-Carlo mean") {
    TabularMdp m1 = make_m1();
    RandomStream rng(7);
    CHECK(observe_reward(m1, 0, 0, 0, 0, rng) == 1.0);
    CHECK(observe_reward(m1, 0, 0, 0, 1, rng) == 0.1);

    // true r = 0.5 with +-0.05 noise
    TabularMdp noisy = m1;
    noisy.reward.at(0, 0, 0, 0) = 0.5;
    noisy.noise_half_width = 0.05;
    noisy.validate();
    double total = 0.0;
    const int draws = 1'000'000;
    for (int t = 0; t < draws; ++t) {
        double r = observe_reward(noisy, 0, 0, 0, 0, rng);
        CHECK(r >= 0.45);
        CHECK(r <= 0.55);
        total += r;
    }
    CHECK(total / draws == doctest::Approx(0.5).epsilon(0.002));  // 0.5 +- 0.001
}

TEST_CASE("sample_episode on M1") {
    TabularMdp m1 = make_m1();
    PolicyTable always_a1(1, 1, 2);
    always_a1.at(0, 0, 0) = 1.0;
    RandomStream rng(3);
    Trajectory t = sample_episode(m1, always_a1, rng);
    REQUIRE(t.steps.size() == 1);
    CHECK(t.steps[0].action == 0);
    CHECK(t.steps[0].rewards[0] == doctest::Approx(1.0));
    CHECK(t.steps[0].rewards[1] == doctest::Approx(0.1));

    // uniform policy action frequency over 1e5 episodes
    PolicyTable uniform = PolicyTable::uniform(1, 1, 2);
    int count_a1 = 0;
    const int episodes = 100'000;
    for (int e = 0; e < episodes; ++e) {
        RandomStream stream = RandomStream::derive(99, {static_cast<std::uint64_t>(e)});
        if (sample_episode(m1, uniform, stream).steps[0].action == 0) ++count_a1;
    }
    CHECK(static_cast<double>(count_a1) / episodes == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("exact_agent_values on fixtures") {
    TabularMdp m1 = make_m1();
    PolicyTable balanced = PolicyTable::uniform(1, 1, 2);
    std::vector<double> v = exact_agent_values(m1, balanced);
    CHECK(v[0] == doctest::Approx(0.55));
    CHECK(v[1] == doctest::Approx(0.55));

    // H = 1: value is the policy-weighted single-step reward
    TabularMdp small = random_mdp(2, 3, 2, 1, 5);
    RandomStream rng(11);
    PolicyTable pi = random_policy(1, 3, 2, rng);
    std::vector<double> vv = exact_agent_values(small, pi);
    for (int i = 0; i < 2; ++i) {
        double expect = 0.0;
        for (int a = 0; a < 2; ++a) expect += pi.at(0, 0, a) * small.reward.at(0, i, 0, a);
        CHECK(vv[i] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("DP values match Monte-Carlo returns within 3 standard errors") {
    TabularMdp mdp = random_mdp(2, 2, 2, 3, 17, 0.05);
    RandomStream rng(23);
    PolicyTable pi = random_policy(3, 2, 2, rng);
    std::vector<double> dp = exact_agent_values(mdp, pi);
    const int episodes = 100'000;
    std::vector<double> sum(2, 0.0), sumsq(2, 0.0);
    for (int e = 0; e < episodes; ++e) {
        RandomStream stream = RandomStream::derive(31, {static_cast<std::uint64_t>(e)});
        Trajectory t = sample_episode(mdp, pi, stream);
        for (int i = 0; i < 2; ++i) {
            double ret = 0.0;
            for (const TrajectoryStep& step : t.steps) ret += step.rewards[i];
            sum[i] += ret;
            sumsq[i] += ret * ret;
        }
    }
    for (int i = 0; i < 2; ++i) {
        double mean = sum[i] / episodes;
        double var = (sumsq[i] / episodes - mean * mean) * episodes / (episodes - 1);
        double se = std::sqrt(var / episodes);
        CHECK(std::abs(mean - dp[i]) <= 3.0 * se);
    }
}

TEST_CASE("values stay above the epsilon floor for every policy") {
    RandomStream rng(41);
    for (int t = 0; t < 50; ++t) {
        TabularMdp mdp = random_mdp(2, 2, 2, 3, 100 + t);
        PolicyTable pi = random_policy(3, 2, 2, rng);
        for (double v : exact_agent_values(mdp, pi)) CHECK(v >= mdp.epsilon_floor - 1e-12);
    }
}

TEST_CASE("values are linear in the reward table") {
    TabularMdp mdp = random_mdp(2, 2, 2, 3, 55);
    RandomStream rng(56);
    PolicyTable pi = random_policy(3, 2, 2, rng);
    std::vector<double> base =
        agent_values_dp(mdp.reward, mdp.transition, mdp.initial_distribution, pi);
    RewardTable doubled = mdp.reward;
    for (int h = 0; h < 3; ++h)
        for (int s = 0; s < 2; ++s)
            for (int a = 0; a < 2; ++a) doubled.at(h, 0, s, a) *= 2.0;
    std::vector<double> scaled =
        agent_values_dp(doubled, mdp.transition, mdp.initial_distribution, pi);
    CHECK(scaled[0] == doctest::Approx(2.0 * base[0]).epsilon(1e-12));
    CHECK(scaled[1] == doctest::Approx(base[1]).epsilon(1e-12));
}

TEST_CASE("episode visit frequencies agree with the occupancy measure (chi-square)") {
    TabularMdp mdp = random_mdp(2, 2, 2, 3, 71, 0.0);
    RandomStream rng(72);
    PolicyTable pi = random_policy(3, 2, 2, rng);
    OccupancyQ q = q_from_policy(pi, mdp.transition, mdp.initial_distribution);

    const int episodes = 100'000;
    std::vector<long long> counts(static_cast<std::size_t>(3) * 2 * 2, 0);
    for (int e = 0; e < episodes; ++e) {
        RandomStream stream = RandomStream::derive(73, {static_cast<std::uint64_t>(e)});
        Trajectory t = sample_episode(mdp, pi, stream);
        for (int h = 0; h < 3; ++h)
            counts[(static_cast<std::size_t>(h) * 2 + t.steps[h].state) * 2 +
                   t.steps[h].action] += 1;
    }
    // one chi-square statistic per step over the (s, a) cells with
    // expected count >= 5; critical value at significance 1e-3 via the
    // Wilson-Hilferty approximation
    for (int h = 0; h < 3; ++h) {
        double stat = 0.0;
        int cells = 0;
        for (int s = 0; s < 2; ++s)
            for (int a = 0; a < 2; ++a) {
                double expected = episodes * q.at(h, s, a);
                if (expected < 5.0) continue;
                double observed =
                    static_cast<double>(counts[(static_cast<std::size_t>(h) * 2 + s) * 2 + a]);
                stat += (observed - expected) * (observed - expected) / expected;
                ++cells;
            }
        int df = cells - 1;
        REQUIRE(df >= 1);
        double z = 3.0902;  // standard normal quantile at 1 - 1e-3
        double crit = df * std::pow(1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df)), 3);
        CHECK(stat < crit);
    }
}

TEST_CASE("validation rejects malformed MDPs") {
    TabularMdp m1 = make_m1();
    TabularMdp broken = m1;
    broken.reward.at(0, 0, 0, 0) = 1.2;
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
    broken = m1;
    broken.initial_distribution = {0.9};
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
    broken = m1;
    broken.epsilon_floor = 0.0;
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
}
