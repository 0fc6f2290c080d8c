#pragma once

#include <cmath>
#include <vector>

#include "fairmdp/mdp.hpp"
#include "fairmdp/rng.hpp"

namespace fairmdp::testing {

/// Two agents competing for one of two actions in a single step:
/// agent 1 prefers a1 (1.0 vs 0.1), agent 2 prefers a2 (0.1 vs 1.0).
/// Deterministic rewards, no noise.
inline TabularMdp make_m1() {
    TabularMdp mdp;
    mdp.num_agents = 2;
    mdp.num_states = 1;
    mdp.num_actions = 2;
    mdp.horizon = 1;
    mdp.transition = TransitionKernel(0, 1, 2);
    mdp.reward = RewardTable(1, 2, 1, 2);
    mdp.reward.at(0, 0, 0, 0) = 1.0;
    mdp.reward.at(0, 0, 0, 1) = 0.1;
    mdp.reward.at(0, 1, 0, 0) = 0.1;
    mdp.reward.at(0, 1, 0, 1) = 1.0;
    mdp.initial_distribution = {1.0};
    mdp.noise_half_width = 0.0;
    mdp.epsilon_floor = 0.1;
    mdp.provenance = "fixture M1";
    mdp.validate();
    return mdp;
}

inline RandomMdpConfig appendix_f_config(std::uint64_t seed) {
    RandomMdpConfig cfg;
    cfg.num_agents = 2;
    cfg.num_states = 2;
    cfg.num_actions = 2;
    cfg.horizon = 3;
    cfg.reward_low = 0.15;
    cfg.reward_high = 0.95;
    cfg.noise_half_width = 0.05;
    cfg.epsilon_floor = 0.1;
    cfg.seed = seed;
    return cfg;
}

/// Random stochastic policy with rows drawn from a Dirichlet-ish spread
/// (normalized exponentials keep every row strictly positive).
inline PolicyTable random_policy(int h, int s, int a, RandomStream& rng) {
    PolicyTable policy(h, s, a);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < s; ++j) {
            auto row = policy.row(i, j);
            double total = 0.0;
            for (double& x : row) {
                x = -std::log(1.0 - rng.uniform01());
                total += x;
            }
            for (double& x : row) x /= total;
        }
    return policy;
}

/// Random small MDP with the given dims and reward range valid for eps = 0.1.
inline TabularMdp random_mdp(int n, int s, int a, int h, std::uint64_t seed,
                             double noise = 0.0) {
    RandomMdpConfig cfg;
    cfg.num_agents = n;
    cfg.num_states = s;
    cfg.num_actions = a;
    cfg.horizon = h;
    cfg.reward_low = 0.15;
    cfg.reward_high = 0.95;
    cfg.noise_half_width = noise;
    cfg.epsilon_floor = 0.1;
    cfg.seed = seed;
    return generate_random_mdp(cfg);
}

}  // namespace fairmdp::testing
