#include "fairmdp/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairmdp {

namespace {

constexpr double kRowTol = 1e-9;

void check_distribution(std::span<const double> row, const char* what) {
    double total = 0.0;
    for (double x : row) {
        if (x < 0.0) throw std::invalid_argument(std::string(what) + ": negative entry");
        total += x;
    }
    if (std::abs(total - 1.0) > kRowTol)
        throw std::invalid_argument(std::string(what) + ": row sums to " + std::to_string(total));
}

}  // namespace

void TabularMdp::validate() const {
    if (num_agents < 1 || num_states < 1 || num_actions < 1 || horizon < 1)
        throw std::invalid_argument("mdp: dimensions must be >= 1");
    if (epsilon_floor <= 0.0) throw std::invalid_argument("mdp: epsilon_floor must be > 0");
    if (noise_half_width < 0.0) throw std::invalid_argument("mdp: noise_half_width must be >= 0");
    if (transition.steps != horizon - 1 || (horizon > 1 && (transition.num_states != num_states ||
                                                            transition.num_actions != num_actions)))
        throw std::invalid_argument("mdp: transition kernel shape mismatch");
    if (reward.horizon != horizon || reward.num_agents != num_agents ||
        reward.num_states != num_states || reward.num_actions != num_actions)
        throw std::invalid_argument("mdp: reward table shape mismatch");
    if (static_cast<int>(initial_distribution.size()) != num_states)
        throw std::invalid_argument("mdp: initial distribution size mismatch");
    check_distribution(initial_distribution, "mdp initial distribution");
    for (int h = 0; h < horizon - 1; ++h)
        for (int s = 0; s < num_states; ++s)
            for (int a = 0; a < num_actions; ++a)
                check_distribution(transition.row(h, s, a), "mdp transition");
    double lo = epsilon_floor / horizon;
    for (double r : reward.values)
        if (r < lo - 1e-12 || r > 1.0 + 1e-12)
            throw std::invalid_argument("mdp: reward " + std::to_string(r) +
                                        " outside [eps/H, 1]");
}

TabularMdp generate_random_mdp(const RandomMdpConfig& config) {
    if (config.num_agents < 1 || config.num_states < 1 || config.num_actions < 1 ||
        config.horizon < 1)
        throw std::invalid_argument("random mdp: dimensions must be >= 1");
    if (config.noise_half_width < 0.0)
        throw std::invalid_argument("random mdp: noise_half_width must be >= 0");
    if (config.reward_low > config.reward_high)
        throw std::invalid_argument("random mdp: reward_low > reward_high");
    double lo = config.epsilon_floor / config.horizon;
    if (config.reward_low - config.noise_half_width < lo - 1e-12)
        throw std::invalid_argument(
            "random mdp: reward_low - noise_half_width must be >= epsilon_floor/horizon");
    if (config.reward_high + config.noise_half_width > 1.0 + 1e-12)
        throw std::invalid_argument("random mdp: reward_high + noise_half_width must be <= 1");

    RandomStream rng = RandomStream::derive(config.seed, {0x6d64702d67656eULL});  // "mdp-gen"

    TabularMdp mdp;
    mdp.num_agents = config.num_agents;
    mdp.num_states = config.num_states;
    mdp.num_actions = config.num_actions;
    mdp.horizon = config.horizon;
    mdp.noise_half_width = config.noise_half_width;
    mdp.epsilon_floor = config.epsilon_floor;
    mdp.transition = TransitionKernel(config.horizon - 1, config.num_states, config.num_actions);
    for (int h = 0; h < config.horizon - 1; ++h) {
        for (int s = 0; s < config.num_states; ++s) {
            for (int a = 0; a < config.num_actions; ++a) {
                auto row = mdp.transition.row(h, s, a);
                double total = 0.0;
                for (double& x : row) {
                    x = rng.uniform01();
                    total += x;
                }
                if (total <= 0.0) {
                    for (double& x : row) x = 1.0 / config.num_states;
                } else {
                    for (double& x : row) x /= total;
                }
            }
        }
    }
    mdp.reward = RewardTable(config.horizon, config.num_agents, config.num_states,
                             config.num_actions);
    for (double& r : mdp.reward.values) r = rng.uniform(config.reward_low, config.reward_high);
    mdp.initial_distribution.assign(config.num_states, 0.0);
    mdp.initial_distribution[0] = 1.0;
    mdp.provenance = "generate_random_mdp(seed=" + std::to_string(config.seed) + ")";
    mdp.validate();
    return mdp;
}

double observe_reward(const TabularMdp& mdp, int h, int agent, int s, int a, RandomStream& rng) {
    double r = mdp.reward.at(h, agent, s, a);
    double w = mdp.noise_half_width;
    double sample = w > 0.0 ? r + rng.uniform(-w, w) : r;
    return std::clamp(sample, mdp.epsilon_floor / mdp.horizon, 1.0);
}

Trajectory sample_episode(const TabularMdp& mdp, const PolicyTable& policy, RandomStream& rng) {
    if (policy.horizon != mdp.horizon || policy.num_states != mdp.num_states ||
        policy.num_actions != mdp.num_actions)
        throw std::invalid_argument("sample_episode: policy shape mismatch");
    Trajectory t;
    t.steps.resize(mdp.horizon);
    int s = rng.categorical(mdp.initial_distribution);
    for (int h = 0; h < mdp.horizon; ++h) {
        int a = rng.categorical(policy.row(h, s));
        auto& step = t.steps[h];
        step.state = s;
        step.action = a;
        step.rewards.resize(mdp.num_agents);
        for (int i = 0; i < mdp.num_agents; ++i)
            step.rewards[i] = observe_reward(mdp, h, i, s, a, rng);
        if (h + 1 < mdp.horizon) s = rng.categorical(mdp.transition.row(h, s, a));
    }
    return t;
}

std::vector<double> agent_values_dp_per_state(const RewardTable& reward,
                                              const TransitionKernel& transition,
                                              const PolicyTable& policy) {
    int N = reward.num_agents, S = reward.num_states, A = reward.num_actions;
    int H = reward.horizon;
    std::vector<double> value(static_cast<std::size_t>(N) * S, 0.0);
    std::vector<double> next(value.size(), 0.0);
    for (int h = H - 1; h >= 0; --h) {
        std::swap(value, next);
        for (int i = 0; i < N; ++i) {
            for (int s = 0; s < S; ++s) {
                double acc = 0.0;
                for (int a = 0; a < A; ++a) {
                    double q = reward.at(h, i, s, a);
                    if (h + 1 < H) {
                        auto row = transition.row(h, s, a);
                        for (int s2 = 0; s2 < S; ++s2) q += row[s2] * next[i * S + s2];
                    }
                    acc += policy.at(h, s, a) * q;
                }
                value[i * S + s] = acc;
            }
        }
    }
    return value;
}

std::vector<double> agent_values_dp(const RewardTable& reward, const TransitionKernel& transition,
                                    std::span<const double> mu, const PolicyTable& policy) {
    int N = reward.num_agents, S = reward.num_states;
    std::vector<double> per_state = agent_values_dp_per_state(reward, transition, policy);
    std::vector<double> v(N, 0.0);
    for (int i = 0; i < N; ++i)
        for (int s = 0; s < S; ++s) v[i] += mu[s] * per_state[i * S + s];
    return v;
}

std::vector<double> exact_agent_values(const TabularMdp& mdp, const PolicyTable& policy) {
    if (policy.horizon != mdp.horizon || policy.num_states != mdp.num_states ||
        policy.num_actions != mdp.num_actions)
        throw std::invalid_argument("exact_agent_values: policy shape mismatch");
    return agent_values_dp(mdp.reward, mdp.transition, mdp.initial_distribution, policy);
}

}  // namespace fairmdp
