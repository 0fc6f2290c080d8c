#pragma once

#include <cstdint>
#include <vector>

#include "fairmdp/confidence.hpp"
#include "fairmdp/mdp.hpp"
#include "fairmdp/solver.hpp"
#include "fairmdp/tables.hpp"

namespace fairmdp {

/// Running empirical estimates for the episodic loop: visit counts,
/// transition counts, and per-agent reward sums, updated from bandit
/// feedback only. The planned horizon K enters the width log terms, so it
/// is declared up front.
struct OnlineState {
    int num_agents = 0, num_states = 0, num_actions = 0, horizon = 0;
    int episode_index = 0;   // episodes folded in so far
    int planned_episodes = 1;
    double delta = 0.1;
    std::vector<long long> visit_counts;       // (H, S, A)
    std::vector<long long> transition_counts;  // (H-1, S, A, S')
    std::vector<double> reward_sums;           // (H, N, S, A)

    OnlineState() = default;
    OnlineState(const MdpDims& dims, int planned_episodes, double delta);

    long long visits(int h, int s, int a) const;
    long long transitions(int h, int s, int a, int s2) const;
    double reward_sum(int h, int i, int s, int a) const;

    /// Increments counts and reward sums along the visited path only.
    void update(const Trajectory& t);

    /// sum_{s'} transition counts == visit counts for every step below H.
    bool counts_consistent() const;
};

struct WidthTables {
    Array4 beta_p;  // (H-1, S, A, S')
    Array3 beta_r;  // (H, S, A)
};

/// Exact width formulas with the max{n,1} convention. width_scale
/// multiplies both tables; 1.0 is the analysis value, smaller values are
/// a practical tuning knob (off-paper).
WidthTables confidence_widths(const OnlineState& state, double delta, double width_scale = 1.0);

/// Empirical means plus widths; unvisited rows get the uniform p_bar
/// placeholder and zero r_bar.
ConfidenceModel build_confidence_model(const OnlineState& state, double width_scale = 1.0);

struct RunResult {
    std::vector<double> fair_values;            // exact value of each executed policy
    std::vector<double> optimistic_objectives;  // solve_fair_extended value per episode
    std::vector<double> solver_gaps;
    std::vector<PolicyTable> policies;
    std::vector<Trajectory> trajectories;
    ConfidenceModel final_model;
    int solver_warnings = 0;  // episodes where the solver hit max_iterations
};

struct OnlineConfig {
    int episodes = 600;
    double delta = 0.1;
    double width_scale = 1.0;
    SolverConfig solver;
};

/// Algorithm: per episode, build the confidence model, solve the extended
/// program, execute the policy, and fold the trajectory back in. The
/// exact per-episode value is evaluation instrumentation computed from
/// the true model; the learner itself never reads true parameters.
RunResult run_online(const TabularMdp& env, const FairnessObjective& f, const OnlineConfig& cfg,
                     std::uint64_t seed);

/// Reg(k) = sum_{j<=k} (V* - V^{pi_j}).
std::vector<double> regret_curve(const RunResult& result, double optimal_value);

/// Draws one member uniformly at episode start and follows it for the
/// whole episode. Its fair value is F applied to the per-agent averages
/// of the members' values.
struct MixturePolicy {
    std::vector<PolicyTable> members;

    explicit MixturePolicy(std::vector<PolicyTable> policies);
    const PolicyTable& pick(RandomStream& rng) const;
};

std::vector<double> mixture_agent_values(const MixturePolicy& mix, const TabularMdp& mdp);
double mixture_fair_value(const MixturePolicy& mix, const TabularMdp& mdp,
                          const FairnessObjective& f);

}  // namespace fairmdp
