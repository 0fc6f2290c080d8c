#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairmdp/rng.hpp"
#include "fairmdp/tables.hpp"

namespace fairmdp {

/// Finite-horizon multi-agent tabular MDP. Immutable after construction
/// and safe to share across threads; random streams are owned per caller.
struct TabularMdp {
    int num_agents = 0;
    int num_states = 0;
    int num_actions = 0;
    int horizon = 0;
    TransitionKernel transition;               // horizon-1 slices
    RewardTable reward;                        // true mean rewards in [eps/H, 1]
    std::vector<double> initial_distribution;  // mu, sums to 1
    double noise_half_width = 0.0;
    double epsilon_floor = 0.1;
    std::string provenance;

    MdpDims dims() const { return {num_agents, num_states, num_actions, horizon}; }

    /// Throws std::invalid_argument on any violated invariant: transition
    /// rows must be distributions within 1e-9, rewards in [eps/H, 1], mu a
    /// distribution, noise_half_width >= 0, epsilon_floor > 0.
    void validate() const;
};

struct TrajectoryStep {
    int state = 0;
    int action = 0;
    std::vector<double> rewards;  // one observation per agent, in [eps/H, 1]
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;  // length exactly H
};

struct RandomMdpConfig {
    int num_agents = 2;
    int num_states = 2;
    int num_actions = 2;
    int horizon = 3;
    double reward_low = 0.15;
    double reward_high = 0.95;
    double noise_half_width = 0.05;
    double epsilon_floor = 0.1;
    std::uint64_t seed = 0;
};

/// Transitions drawn i.i.d. uniform then row-normalized; rewards i.i.d.
/// uniform in [reward_low, reward_high]. Deterministic given the seed.
/// Requires reward_low - noise_half_width >= eps/H and
/// reward_high + noise_half_width <= 1 so observations never clip.
TabularMdp generate_random_mdp(const RandomMdpConfig& config);

/// One noisy reward sample: clip(r + U(-w, +w), eps/H, 1).
double observe_reward(const TabularMdp& mdp, int h, int agent, int s, int a, RandomStream& rng);

Trajectory sample_episode(const TabularMdp& mdp, const PolicyTable& policy, RandomStream& rng);

/// V_{1,(i)} for every agent by exact backward induction, averaged over mu.
std::vector<double> exact_agent_values(const TabularMdp& mdp, const PolicyTable& policy);

/// Same backward induction on explicit tables, with no range assumptions
/// on the rewards (used for pessimistic rewards and model-difference math).
std::vector<double> agent_values_dp(const RewardTable& reward, const TransitionKernel& transition,
                                    std::span<const double> mu, const PolicyTable& policy);

/// Per-state variant: value[i*S + s] = V_{1,(i)}(s).
std::vector<double> agent_values_dp_per_state(const RewardTable& reward,
                                              const TransitionKernel& transition,
                                              const PolicyTable& policy);

}  // namespace fairmdp
