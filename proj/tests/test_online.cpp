#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fairmdp/online.hpp"
#include "fairmdp/occupancy.hpp"
#include "support/fixtures.hpp"

using namespace fairmdp;
using namespace fairmdp::testing;

TEST_CASE("update_estimates counts and averages") {
    MdpDims dims{2, 2, 2, 3};
    OnlineState state(dims, 100, 0.1);

    Trajectory t;
    t.steps = {{0, 0, {0.4, 0.5}}, {1, 1, {0.3, 0.3}}, {0, 1, {0.2, 0.2}}};
    state.update(t);
    CHECK(state.visits(0, 0, 0) == 1);
    CHECK(state.visits(0, 0, 1) == 0);
    CHECK(state.visits(1, 1, 1) == 1);
    CHECK(state.transitions(0, 0, 0, 1) == 1);
    CHECK(state.transitions(1, 1, 1, 0) == 1);
    CHECK(state.counts_consistent());

    Trajectory t2 = t;
    t2.steps[0].rewards = {0.6, 0.5};
    state.update(t2);
    ConfidenceModel m = build_confidence_model(state);
    CHECK(m.r_bar.at(0, 0, 0, 0) == doctest::Approx(0.5));  // (0.4 + 0.6) / 2
    CHECK(m.counts.at(0, 0, 0) == doctest::Approx(2.0));

    Trajectory bad;
    bad.steps = {{0, 0, {0.4, 0.5}}};
    CHECK_THROWS_AS(state.update(bad), std::invalid_argument);
}

TEST_CASE("empirical transitions approach the truth under a fixed policy") {
    TabularMdp mdp = random_mdp(2, 2, 2, 3, 901);
    OnlineState state(mdp.dims(), 10'000, 0.1);
    PolicyTable uniform = PolicyTable::uniform(3, 2, 2);
    for (int e = 0; e < 10'000; ++e) {
        RandomStream rng = RandomStream::derive(902, {static_cast<std::uint64_t>(e)});
        state.update(sample_episode(mdp, uniform, rng));
    }
    CHECK(state.counts_consistent());
    ConfidenceModel m = build_confidence_model(state);
    for (int h = 0; h < 2; ++h)
        for (int s = 0; s < 2; ++s)
            for (int a = 0; a < 2; ++a) {
                if (state.visits(h, s, a) < 100) continue;
                for (int s2 = 0; s2 < 2; ++s2)
                    CHECK(std::abs(m.p_bar.at(h, s, a, s2) - mdp.transition.at(h, s, a, s2)) <=
                          0.02);
            }
}

TEST_CASE("confidence width closed forms") {
    // S=A=N=2, H=3, K=1000, delta=0.1
    MdpDims dims{2, 2, 2, 3};
    OnlineState state(dims, 1000, 0.1);
    double lr = reward_log_term(2, 2, 3, 2, 1000, 0.1);
    double lp = transition_log_term(2, 2, 3, 1000, 0.1);
    // independently computed: L^r = 2 ln(720000), L^p = ln(2.88e6)
    CHECK(lr == doctest::Approx(2.0 * std::log(720000.0)).epsilon(1e-12));
    CHECK(lp == doctest::Approx(std::log(2.88e6)).epsilon(1e-12));

    CHECK(reward_width(lr, 100) == doctest::Approx(0.5194).epsilon(1e-3));
    CHECK(transition_width(lp, 0.5, 100) == doctest::Approx(1.0797).epsilon(1e-3));
    // the two width pieces: sqrt(4 * 0.25 * L / 100) and 14 L / 300
    CHECK(transition_width(lp, 0.5, 100) ==
          doctest::Approx(std::sqrt(lp / 100.0) + 14.0 * lp / 300.0).epsilon(1e-12));

    // n = 0 uses max{n,1}
    CHECK(reward_width(lr, 0) == doctest::Approx(std::sqrt(lr)).epsilon(1e-12));

    WidthTables w = confidence_widths(state, 0.1);
    CHECK(w.beta_r.at(0, 0, 0) == doctest::Approx(std::sqrt(lr)).epsilon(1e-12));
    // scale multiplies the widths
    WidthTables half = confidence_widths(state, 0.1, 0.5);
    CHECK(half.beta_r.at(0, 0, 0) == doctest::Approx(0.5 * std::sqrt(lr)).epsilon(1e-12));
}

TEST_CASE("run_online base case and determinism") {
    TabularMdp mdp = random_mdp(2, 2, 2, 3, 903);
    OnlineConfig cfg;
    cfg.episodes = 1;
    RunResult one = run_online(mdp, FairnessObjective::max_min(), cfg, 7);
    CHECK(one.fair_values.size() == 1);
    CHECK(one.trajectories.size() == 1);
    // first episode solves against the all-uniform prior model
    CHECK(one.final_model.counts.at(0, 0, one.trajectories[0].steps[0].action) == 1.0);

    cfg.episodes = 12;
    cfg.width_scale = 0.2;
    RunResult a = run_online(mdp, FairnessObjective::proportional(), cfg, 7);
    RunResult b = run_online(mdp, FairnessObjective::proportional(), cfg, 7);
    CHECK(a.fair_values == b.fair_values);
    CHECK(a.optimistic_objectives == b.optimistic_objectives);
    for (int k = 0; k < cfg.episodes; ++k)
        CHECK(a.trajectories[k].steps[0].action == b.trajectories[k].steps[0].action);

    // a different seed actually changes the sampled paths
    RunResult c = run_online(mdp, FairnessObjective::proportional(), cfg, 8);
    bool any_difference = a.fair_values != c.fair_values;
    for (int k = 0; k < cfg.episodes; ++k)
        for (int h = 0; h < 3; ++h)
            if (a.trajectories[k].steps[h].action != c.trajectories[k].steps[h].action ||
                a.trajectories[k].steps[h].state != c.trajectories[k].steps[h].state)
                any_difference = true;
    CHECK(any_difference);
}

TEST_CASE("regret curve arithmetic") {
    RunResult r;
    r.fair_values = {1.0, 1.0, 1.0};
    std::vector<double> zero = regret_curve(r, 1.0);
    CHECK(zero == std::vector<double>{0.0, 0.0, 0.0});

    r.fair_values = {0.8, 0.8, 0.8};
    std::vector<double> lin = regret_curve(r, 1.0);
    CHECK(lin[0] == doctest::Approx(0.2));
    CHECK(lin[2] == doctest::Approx(0.6));

    // nondecreasing when the reference value is an upper bound
    for (std::size_t k = 1; k < lin.size(); ++k) CHECK(lin[k] >= lin[k - 1]);
}

TEST_CASE("mixture policy: base cases and Jensen direction") {
    TabularMdp m1 = make_m1();
    FairnessObjective prop = FairnessObjective::proportional();

    PolicyTable det(1, 1, 2);
    det.at(0, 0, 0) = 1.0;
    MixturePolicy single({det});
    std::vector<double> v = mixture_agent_values(single, m1);
    CHECK(v[0] == doctest::Approx(1.0));
    CHECK(v[1] == doctest::Approx(0.1));

    PolicyTable det2(1, 1, 2);
    det2.at(0, 0, 1) = 1.0;
    MixturePolicy pair({det, det2});
    std::vector<double> mixed = mixture_agent_values(pair, m1);
    CHECK(mixed[0] == doctest::Approx(0.55));
    CHECK(mixed[1] == doctest::Approx(0.55));

    CHECK_THROWS_AS(MixturePolicy({}), std::invalid_argument);

    // F(mean values) >= mean of F values on random policy pairs
    TabularMdp mdp = random_mdp(2, 2, 2, 3, 904);
    RandomStream rng(905);
    for (int t = 0; t < 100; ++t) {
        PolicyTable p1 = random_policy(3, 2, 2, rng);
        PolicyTable p2 = random_policy(3, 2, 2, rng);
        MixturePolicy mix({p1, p2});
        double lhs = mixture_fair_value(mix, mdp, prop);
        double rhs = 0.5 * (evaluate(prop, exact_agent_values(mdp, p1)) +
                            evaluate(prop, exact_agent_values(mdp, p2)));
        CHECK(lhs >= rhs - 1e-12);
    }

    // pick draws members roughly uniformly
    RandomStream pick_rng(906);
    int first = 0;
    for (int t = 0; t < 10'000; ++t)
        if (&pair.pick(pick_rng) == &pair.members[0]) ++first;
    CHECK(first > 4500);
    CHECK(first < 5500);
}
