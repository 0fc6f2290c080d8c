#include "fairmdp/online.hpp"

#include <stdexcept>

#include "fairmdp/occupancy.hpp"

namespace fairmdp {

namespace {
constexpr std::uint64_t kOnlineTag = 0x6f6e6c696e65ULL;  // "online"
}

OnlineState::OnlineState(const MdpDims& dims, int planned_episodes_, double delta_)
    : num_agents(dims.num_agents),
      num_states(dims.num_states),
      num_actions(dims.num_actions),
      horizon(dims.horizon),
      planned_episodes(planned_episodes_),
      delta(delta_) {
    if (planned_episodes < 1) throw std::invalid_argument("online: planned episodes must be >= 1");
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("online: delta must be in (0,1)");
    std::size_t hsa = static_cast<std::size_t>(horizon) * num_states * num_actions;
    visit_counts.assign(hsa, 0);
    transition_counts.assign(horizon > 1
                                 ? static_cast<std::size_t>(horizon - 1) * num_states *
                                       num_actions * num_states
                                 : 0,
                             0);
    reward_sums.assign(hsa * num_agents, 0.0);
}

long long OnlineState::visits(int h, int s, int a) const {
    return visit_counts[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a];
}

long long OnlineState::transitions(int h, int s, int a, int s2) const {
    return transition_counts[((static_cast<std::size_t>(h) * num_states + s) * num_actions + a) *
                                 num_states +
                             s2];
}

double OnlineState::reward_sum(int h, int i, int s, int a) const {
    return reward_sums[((static_cast<std::size_t>(h) * num_agents + i) * num_states + s) *
                           num_actions +
                       a];
}

void OnlineState::update(const Trajectory& t) {
    if (static_cast<int>(t.steps.size()) != horizon)
        throw std::invalid_argument("online update: trajectory length != horizon");
    if (episode_index >= planned_episodes)
        throw std::invalid_argument("online update: past the planned episode horizon");
    for (int h = 0; h < horizon; ++h) {
        const TrajectoryStep& step = t.steps[h];
        if (step.state < 0 || step.state >= num_states || step.action < 0 ||
            step.action >= num_actions || static_cast<int>(step.rewards.size()) != num_agents)
            throw std::invalid_argument("online update: trajectory out of range");
        int s = step.state, a = step.action;
        visit_counts[(static_cast<std::size_t>(h) * num_states + s) * num_actions + a] += 1;
        for (int i = 0; i < num_agents; ++i)
            reward_sums[((static_cast<std::size_t>(h) * num_agents + i) * num_states + s) *
                            num_actions +
                        a] += step.rewards[i];
        if (h + 1 < horizon) {
            int s2 = t.steps[h + 1].state;
            transition_counts[((static_cast<std::size_t>(h) * num_states + s) * num_actions + a) *
                                  num_states +
                              s2] += 1;
        }
    }
    ++episode_index;
}

bool OnlineState::counts_consistent() const {
    for (int h = 0; h + 1 < horizon; ++h)
        for (int s = 0; s < num_states; ++s)
            for (int a = 0; a < num_actions; ++a) {
                long long total = 0;
                for (int s2 = 0; s2 < num_states; ++s2) total += transitions(h, s, a, s2);
                if (total != visits(h, s, a)) return false;
            }
    return true;
}

WidthTables confidence_widths(const OnlineState& state, double delta, double width_scale) {
    if (width_scale <= 0.0) throw std::invalid_argument("confidence_widths: scale must be > 0");
    int S = state.num_states, A = state.num_actions, H = state.horizon, N = state.num_agents;
    int K = state.planned_episodes;
    double lp = transition_log_term(S, A, H, K, delta);
    double lr = reward_log_term(S, A, H, N, K, delta);
    WidthTables out;
    out.beta_r = Array3(H, S, A);
    out.beta_p = Array4(H > 1 ? H - 1 : 0, S, A, S);
    for (int h = 0; h < H; ++h)
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) {
                long long n = state.visits(h, s, a);
                out.beta_r.at(h, s, a) = width_scale * reward_width(lr, n);
                if (h + 1 < H) {
                    double denom = static_cast<double>(n > 1 ? n : 1);
                    for (int s2 = 0; s2 < S; ++s2) {
                        double p_bar =
                            n > 0 ? static_cast<double>(state.transitions(h, s, a, s2)) / denom
                                  : 1.0 / S;
                        out.beta_p.at(h, s, a, s2) = width_scale * transition_width(lp, p_bar, n);
                    }
                }
            }
    return out;
}

ConfidenceModel build_confidence_model(const OnlineState& state, double width_scale) {
    int S = state.num_states, A = state.num_actions, H = state.horizon, N = state.num_agents;
    ConfidenceModel m;
    m.num_agents = N;
    m.num_states = S;
    m.num_actions = A;
    m.horizon = H;
    m.counts = Array3(H, S, A);
    m.p_bar = TransitionKernel(H - 1, S, A);
    m.r_bar = RewardTable(H, N, S, A);
    WidthTables widths = confidence_widths(state, state.delta, width_scale);
    m.beta_p = std::move(widths.beta_p);
    m.beta_r = std::move(widths.beta_r);
    for (int h = 0; h < H; ++h)
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) {
                long long n = state.visits(h, s, a);
                m.counts.at(h, s, a) = static_cast<double>(n);
                double denom = static_cast<double>(n > 1 ? n : 1);
                for (int i = 0; i < N; ++i)
                    m.r_bar.at(h, i, s, a) = n > 0 ? state.reward_sum(h, i, s, a) / denom : 0.0;
                if (h + 1 < H)
                    for (int s2 = 0; s2 < S; ++s2)
                        m.p_bar.at(h, s, a, s2) =
                            n > 0 ? static_cast<double>(state.transitions(h, s, a, s2)) / denom
                                  : 1.0 / S;
            }
    return m;
}

RunResult run_online(const TabularMdp& env, const FairnessObjective& f, const OnlineConfig& cfg,
                     std::uint64_t seed) {
    env.validate();
    OnlineState state(env.dims(), cfg.episodes, cfg.delta);
    RunResult out;
    out.fair_values.reserve(cfg.episodes);
    out.optimistic_objectives.reserve(cfg.episodes);
    out.solver_gaps.reserve(cfg.episodes);
    out.policies.reserve(cfg.episodes);
    out.trajectories.reserve(cfg.episodes);
    for (int k = 0; k < cfg.episodes; ++k) {
        ConfidenceModel model = build_confidence_model(state, cfg.width_scale);
        ExtendedResult ext =
            solve_fair_extended(model, f, env.initial_distribution, cfg.solver);
        if (!ext.converged) ++out.solver_warnings;
        PolicyTable pi = policy_from_z(ext.z);
        std::vector<double> values = exact_agent_values(env, pi);
        out.fair_values.push_back(evaluate(f, values));
        out.optimistic_objectives.push_back(ext.value);
        out.solver_gaps.push_back(ext.gap);
        RandomStream rng = RandomStream::derive(seed, {kOnlineTag, static_cast<std::uint64_t>(k)});
        Trajectory t = sample_episode(env, pi, rng);
        state.update(t);
        out.policies.push_back(std::move(pi));
        out.trajectories.push_back(std::move(t));
    }
    out.final_model = build_confidence_model(state, cfg.width_scale);
    return out;
}

std::vector<double> regret_curve(const RunResult& result, double optimal_value) {
    std::vector<double> reg(result.fair_values.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < result.fair_values.size(); ++k) {
        acc += optimal_value - result.fair_values[k];
        reg[k] = acc;
    }
    return reg;
}

MixturePolicy::MixturePolicy(std::vector<PolicyTable> policies) : members(std::move(policies)) {
    if (members.empty()) throw std::invalid_argument("mixture policy: empty member list");
    for (const PolicyTable& p : members)
        if (p.horizon != members[0].horizon || p.num_states != members[0].num_states ||
            p.num_actions != members[0].num_actions)
            throw std::invalid_argument("mixture policy: member shape mismatch");
}

const PolicyTable& MixturePolicy::pick(RandomStream& rng) const {
    return members[rng.uniform_int(static_cast<int>(members.size()))];
}

std::vector<double> mixture_agent_values(const MixturePolicy& mix, const TabularMdp& mdp) {
    std::vector<double> mean(mdp.num_agents, 0.0);
    for (const PolicyTable& p : mix.members) {
        std::vector<double> v = exact_agent_values(mdp, p);
        for (int i = 0; i < mdp.num_agents; ++i) mean[i] += v[i];
    }
    for (double& x : mean) x /= static_cast<double>(mix.members.size());
    return mean;
}

double mixture_fair_value(const MixturePolicy& mix, const TabularMdp& mdp,
                          const FairnessObjective& f) {
    std::vector<double> mean = mixture_agent_values(mix, mdp);
    return evaluate(f, mean);
}

}  // namespace fairmdp
