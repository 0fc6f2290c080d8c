#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fairmdp/fairness.hpp"
#include "fairmdp/mdp.hpp"
#include "fairmdp/tables.hpp"

namespace fairmdp {

/// Tabular softmax parameterization: one logit per (h, s, a). The score
/// function interface keeps the gradient estimators
/// parameterization-agnostic, so other policy classes can plug in.
struct SoftmaxPolicyParams {
    int horizon = 0, num_states = 0, num_actions = 0;
    std::vector<double> logits;

    SoftmaxPolicyParams() = default;
    SoftmaxPolicyParams(int h, int s, int a)
        : horizon(h), num_states(s), num_actions(a),
          logits(static_cast<std::size_t>(h) * s * a, 0.0) {}

    std::size_t index(int h, int s, int a) const {
        return (static_cast<std::size_t>(h) * num_states + s) * num_actions + a;
    }
    double& at(int h, int s, int a) { return logits[index(h, s, a)]; }
    double at(int h, int s, int a) const { return logits[index(h, s, a)]; }
};

PolicyTable policy_from_logits(const SoftmaxPolicyParams& params);

struct PgConfig {
    double step_size = 0.1;
    int batch_size = 20;
    int iterations = 1000;
    std::uint64_t seed = 0;
};

/// R_(i) = sum of the observed per-step rewards of agent i.
std::vector<double> returns_per_agent(const Trajectory& t, int num_agents);

/// Score-function gradient estimate over the logits. Max-min weights the
/// scores by the batch-argmin agent's returns only (ties to the lowest
/// index); proportional divides each agent's weighted score sum by its
/// batch return sum; alpha multiplies by |D|^(alpha-1) and divides by
/// (sum R)^alpha. Throws when proportional/alpha meet a nonpositive batch
/// return (cannot occur when rewards >= eps/H).
std::vector<double> estimate_gradient(const FairnessObjective& f,
                                      std::span<const Trajectory> batch,
                                      const SoftmaxPolicyParams& params);

struct PgResult {
    std::vector<double> fair_values;                // exact value per iteration (instrumentation)
    std::vector<std::vector<double>> agent_values;  // exact per-agent values per iteration
    SoftmaxPolicyParams final_params;
};

/// Plain ascent from zero logits: sample a batch, estimate the gradient,
/// step. Divergence shows up as a flat or declining curve, not an error.
PgResult run_policy_gradient(const TabularMdp& env, const FairnessObjective& f,
                             const PgConfig& cfg);

}  // namespace fairmdp
