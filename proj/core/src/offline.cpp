#include "fairmdp/offline.hpp"

#include <algorithm>
#include <stdexcept>

#include "fairmdp/confidence.hpp"
#include "fairmdp/occupancy.hpp"
#include "fairmdp/online.hpp"

namespace fairmdp {

namespace {
constexpr std::uint64_t kDatasetTag = 0x64617461ULL;  // "data"
}

PessimisticModel build_pessimistic_model(const Dataset& data, const MdpDims& dims, double delta,
                                         double epsilon_floor) {
    if (data.episodes.empty()) throw std::invalid_argument("offline: empty dataset");
    if (epsilon_floor <= 0.0) throw std::invalid_argument("offline: epsilon_floor must be > 0");
    // the dataset's episode count plays the role of K in the width log terms
    OnlineState state(dims, static_cast<int>(data.episodes.size()), delta);
    for (const Trajectory& t : data.episodes) state.update(t);
    ConfidenceModel cm = build_confidence_model(state, 1.0);

    PessimisticModel m;
    m.num_agents = dims.num_agents;
    m.num_states = dims.num_states;
    m.num_actions = dims.num_actions;
    m.horizon = dims.horizon;
    m.p_bar = std::move(cm.p_bar);
    m.r_bar = std::move(cm.r_bar);
    m.b_r = std::move(cm.beta_r);
    m.b_p = std::move(cm.beta_p);
    m.counts = std::move(cm.counts);
    m.delta = delta;
    m.epsilon_floor = epsilon_floor;
    m.r_lower = pessimistic_rewards(m.r_bar, m.b_r, m.b_p, epsilon_floor);
    return m;
}

RewardTable pessimistic_rewards(const RewardTable& r_bar, const Array3& b_r, const Array4& b_p,
                                double epsilon_floor) {
    int H = r_bar.horizon, N = r_bar.num_agents, S = r_bar.num_states, A = r_bar.num_actions;
    RewardTable r(H, N, S, A);
    double reward_floor = epsilon_floor / H;
    for (int h = 0; h < H; ++h)
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) {
                double p_term = 0.0;
                if (h + 1 < H)
                    for (int s2 = 0; s2 < S; ++s2) p_term += b_p.at(h, s, a, s2);
                p_term *= H;
                for (int i = 0; i < N; ++i) {
                    double base = std::max(r_bar.at(h, i, s, a) - b_r.at(h, s, a), reward_floor);
                    r.at(h, i, s, a) = std::max(base - p_term, -static_cast<double>(H));
                }
            }
    return r;
}

OfflineResult solve_offline(const PessimisticModel& model, const FairnessObjective& f,
                            std::span<const double> mu, const SolverConfig& cfg) {
    PlanResult plan = solve_fair_plan(model.r_lower, model.p_bar, mu, f, cfg);
    OfflineResult out;
    out.policy = policy_from_q(plan.q);
    out.pessimistic_agent_values = plan.agent_values;
    out.pessimistic_value = plan.value;
    out.gap = plan.gap;
    out.iterations = plan.iterations;
    out.converged = plan.converged;
    out.assumption_holds = std::all_of(plan.agent_values.begin(), plan.agent_values.end(),
                                       [&](double v) { return v >= f.epsilon_floor - 1e-9; });
    return out;
}

double evaluate_suboptimality(const PolicyTable& policy, const TabularMdp& truth,
                              const FairnessObjective& f, double oracle_value) {
    std::vector<double> v = exact_agent_values(truth, policy);
    return oracle_value - evaluate(f, v);
}

Dataset collect_dataset(const TabularMdp& mdp, const PolicyTable& behavior, int episodes,
                        std::uint64_t seed, std::string description) {
    if (episodes < 1) throw std::invalid_argument("collect_dataset: episodes must be >= 1");
    Dataset data;
    data.provenance = {std::move(description), seed};
    data.episodes.reserve(episodes);
    for (int e = 0; e < episodes; ++e) {
        RandomStream rng = RandomStream::derive(seed, {kDatasetTag, static_cast<std::uint64_t>(e)});
        data.episodes.push_back(sample_episode(mdp, behavior, rng));
    }
    return data;
}

}  // namespace fairmdp
