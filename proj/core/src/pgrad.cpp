#include "fairmdp/pgrad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairmdp {

namespace {
constexpr std::uint64_t kPgTag = 0x70676772616400ULL;  // "pgrad"
}

PolicyTable policy_from_logits(const SoftmaxPolicyParams& params) {
    PolicyTable policy(params.horizon, params.num_states, params.num_actions);
    for (int h = 0; h < params.horizon; ++h)
        for (int s = 0; s < params.num_states; ++s) {
            double hi = params.at(h, s, 0);
            for (int a = 1; a < params.num_actions; ++a) hi = std::max(hi, params.at(h, s, a));
            auto row = policy.row(h, s);
            double total = 0.0;
            for (int a = 0; a < params.num_actions; ++a) {
                row[a] = std::exp(params.at(h, s, a) - hi);
                total += row[a];
            }
            for (double& x : row) x /= total;
        }
    return policy;
}

std::vector<double> returns_per_agent(const Trajectory& t, int num_agents) {
    std::vector<double> r(num_agents, 0.0);
    for (const TrajectoryStep& step : t.steps) {
        if (static_cast<int>(step.rewards.size()) != num_agents)
            throw std::invalid_argument("returns_per_agent: agent count mismatch");
        for (int i = 0; i < num_agents; ++i) r[i] += step.rewards[i];
    }
    return r;
}

std::vector<double> estimate_gradient(const FairnessObjective& f,
                                      std::span<const Trajectory> batch,
                                      const SoftmaxPolicyParams& params) {
    if (batch.empty()) throw std::invalid_argument("estimate_gradient: empty batch");
    int num_agents = static_cast<int>(batch[0].steps.at(0).rewards.size());
    std::size_t dim = params.logits.size();
    PolicyTable policy = policy_from_logits(params);

    // per-agent return sums and return-weighted score sums over the batch
    std::vector<double> return_sum(num_agents, 0.0);
    std::vector<std::vector<double>> weighted_scores(num_agents, std::vector<double>(dim, 0.0));
    std::vector<double> score(dim);
    for (const Trajectory& t : batch) {
        std::fill(score.begin(), score.end(), 0.0);
        for (int h = 0; h < static_cast<int>(t.steps.size()); ++h) {
            int s = t.steps[h].state, a = t.steps[h].action;
            for (int b = 0; b < params.num_actions; ++b)
                score[params.index(h, s, b)] += (b == a ? 1.0 : 0.0) - policy.at(h, s, b);
        }
        std::vector<double> ret = returns_per_agent(t, num_agents);
        for (int i = 0; i < num_agents; ++i) {
            return_sum[i] += ret[i];
            double w = ret[i];
            if (w != 0.0)
                for (std::size_t d = 0; d < dim; ++d) weighted_scores[i][d] += w * score[d];
        }
    }

    std::vector<double> g(dim, 0.0);
    switch (f.kind) {
        case FairnessKind::MaxMin: {
            int worst = static_cast<int>(
                std::min_element(return_sum.begin(), return_sum.end()) - return_sum.begin());
            double inv = 1.0 / static_cast<double>(batch.size());
            for (std::size_t d = 0; d < dim; ++d) g[d] = inv * weighted_scores[worst][d];
            return g;
        }
        case FairnessKind::Proportional: {
            for (int i = 0; i < num_agents; ++i) {
                if (return_sum[i] <= 0.0)
                    throw std::domain_error("estimate_gradient: agent " + std::to_string(i) +
                                            " has nonpositive batch return");
                for (std::size_t d = 0; d < dim; ++d) g[d] += weighted_scores[i][d] / return_sum[i];
            }
            return g;
        }
        case FairnessKind::Alpha: {
            double batch_factor = std::pow(static_cast<double>(batch.size()), f.alpha - 1.0);
            for (int i = 0; i < num_agents; ++i) {
                if (return_sum[i] <= 0.0)
                    throw std::domain_error("estimate_gradient: agent " + std::to_string(i) +
                                            " has nonpositive batch return");
                double denom = std::pow(return_sum[i], f.alpha);
                for (std::size_t d = 0; d < dim; ++d) g[d] += weighted_scores[i][d] / denom;
            }
            for (double& x : g) x *= batch_factor;
            return g;
        }
    }
    return g;
}

PgResult run_policy_gradient(const TabularMdp& env, const FairnessObjective& f,
                             const PgConfig& cfg) {
    if (cfg.step_size < 0.0) throw std::invalid_argument("pg: step_size must be >= 0");
    if (cfg.batch_size < 1 || cfg.iterations < 1)
        throw std::invalid_argument("pg: batch_size and iterations must be >= 1");
    env.validate();
    PgResult out;
    out.final_params = SoftmaxPolicyParams(env.horizon, env.num_states, env.num_actions);
    out.fair_values.reserve(cfg.iterations);
    out.agent_values.reserve(cfg.iterations);
    std::vector<Trajectory> batch(cfg.batch_size);
    for (int l = 0; l < cfg.iterations; ++l) {
        PolicyTable policy = policy_from_logits(out.final_params);
        for (int j = 0; j < cfg.batch_size; ++j) {
            RandomStream rng = RandomStream::derive(
                cfg.seed, {kPgTag, static_cast<std::uint64_t>(l), static_cast<std::uint64_t>(j)});
            batch[j] = sample_episode(env, policy, rng);
        }
        std::vector<double> g = estimate_gradient(f, batch, out.final_params);
        for (std::size_t d = 0; d < g.size(); ++d)
            out.final_params.logits[d] += cfg.step_size * g[d];
        std::vector<double> values =
            exact_agent_values(env, policy_from_logits(out.final_params));
        out.fair_values.push_back(evaluate(f, values));
        out.agent_values.push_back(std::move(values));
    }
    return out;
}

}  // namespace fairmdp
