#pragma once

#include <span>
#include <vector>

#include "fairmdp/confidence.hpp"
#include "fairmdp/fairness.hpp"
#include "fairmdp/tables.hpp"

namespace fairmdp {

enum class StepRule { Diminishing, LineSearch };
enum class SoftminSchedule { Fixed, Annealed };

// Defaults: exact line search with an annealed soft-min temperature. The
// open-loop 2/(t+2) rule stalls near max-min optima (the surrogate at the
// target temperature is effectively nonsmooth), while annealing from a
// smooth surrogate under exact steps converges reliably; both remain
// selectable.
struct SolverConfig {
    int max_iterations = 2000;
    double duality_gap_tolerance = 1e-5;
    StepRule step_rule = StepRule::LineSearch;
    SoftminSchedule softmin_schedule = SoftminSchedule::Annealed;
};

struct LinearOracleResult {
    OccupancyQ q;        // occupancy measure of a deterministic policy
    PolicyTable policy;  // the argmax policy, ties to the lowest action index
    double objective;    // sum_{h,s,a} c_h(s,a) q_h(s,a)
};

/// Maximizes sum c_h(s,a) q_h(s,a) over the occupancy polytope by
/// backward induction with immediate reward c.
LinearOracleResult linear_oracle_q(const Array3& weights, const TransitionKernel& p,
                                   std::span<const double> mu);

struct TransitionBandMax {
    std::vector<double> row;  // maximizing p~
    double value;             // sum p~(s') v(s')
};

/// Maximizes sum_{s'} p~(s') v(s') over the simplex intersected with the
/// entrywise band |p~ - p_bar| <= beta: start every entry at its lower
/// cap, then pour the remaining mass into states in decreasing v order up
/// to each upper cap. Ties in v break to the lowest state index. Throws
/// std::invalid_argument when the band is infeasible.
TransitionBandMax inner_max_transition(std::span<const double> v_next,
                                       std::span<const double> p_bar_row,
                                       std::span<const double> beta_row);

struct PlanResult {
    OccupancyQ q;
    std::vector<double> agent_values;
    double value = 0.0;  // exact objective at the final point
    double gap = 0.0;    // Frank-Wolfe duality gap at termination (smoothed objective)
    int iterations = 0;
    bool converged = false;
};

/// Frank-Wolfe maximization of F over the occupancy polytope of (p, mu).
/// Starts at the uniform-policy occupancy; each step linearizes through
/// the agent values and calls linear_oracle_q. Max-min runs on the
/// soft-min surrogate with tau = tolerance / (2 log N); the reported
/// value re-evaluates the exact min at the final point.
PlanResult solve_fair_plan(const RewardTable& rewards, const TransitionKernel& p,
                           std::span<const double> mu, const FairnessObjective& f,
                           const SolverConfig& cfg = {});

struct ExtendedResult {
    OccupancyZ z;
    std::vector<double> agent_values;  // under the optimistic rewards
    double value = 0.0;
    double gap = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Frank-Wolfe maximization of F over the state-action-next-state
/// polytope intersected with the confidence bands, with rewards fixed to
/// min(r_bar + beta^r, 1). The linear oracle is extended value iteration:
/// backward induction where each (h,s,a) contributes
/// c + inner_max_transition(V_{h+1}, p_bar, beta^p).
ExtendedResult solve_fair_extended(const ConfidenceModel& model, const FairnessObjective& f,
                                   std::span<const double> mu, const SolverConfig& cfg = {});

/// The optimistic reward table used by solve_fair_extended.
RewardTable optimistic_rewards(const ConfidenceModel& model);

}  // namespace fairmdp
