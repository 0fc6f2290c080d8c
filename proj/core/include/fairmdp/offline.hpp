#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairmdp/fairness.hpp"
#include "fairmdp/mdp.hpp"
#include "fairmdp/solver.hpp"
#include "fairmdp/tables.hpp"

namespace fairmdp {

struct DatasetProvenance {
    std::string behavior_policy;
    std::uint64_t seed = 0;
};

/// Fixed batch of episodes, assumed compliant with the underlying MDP
/// (holds by construction when produced by sample_episode).
struct Dataset {
    std::vector<Trajectory> episodes;
    DatasetProvenance provenance;
};

/// Empirical transitions plus the clamped pessimistic reward
///   r_lower = max{r_bar - b^r, eps/H} - H sum_{s'} b^p,
/// floored at -H so unvisited cells stay finite. The widths instantiate
/// the same formulas as the online confidence model with dataset counts
/// and K = |dataset|.
struct PessimisticModel {
    int num_agents = 0, num_states = 0, num_actions = 0, horizon = 0;
    TransitionKernel p_bar;  // uniform placeholder rows where unvisited
    RewardTable r_bar;
    RewardTable r_lower;
    Array3 b_r;   // (H, S, A)
    Array4 b_p;   // (H-1, S, A, S')
    Array3 counts;
    double delta = 0.1;
    double epsilon_floor = 0.1;
};

PessimisticModel build_pessimistic_model(const Dataset& data, const MdpDims& dims, double delta,
                                         double epsilon_floor);

/// The clamped pessimistic reward by itself, so width-override limits are
/// testable: zero widths give back r_bar exactly.
RewardTable pessimistic_rewards(const RewardTable& r_bar, const Array3& b_r, const Array4& b_p,
                                double epsilon_floor);

struct OfflineResult {
    PolicyTable policy;
    std::vector<double> pessimistic_agent_values;  // under (r_lower, p_bar)
    double pessimistic_value = 0.0;
    bool assumption_holds = true;  // every pessimistic agent value >= eps
    double gap = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Maximizes F(sum r_lower q) over the occupancy polytope of p_bar. When
/// some agent's value at the solution falls below the eps floor the
/// result carries assumption_holds = false (callers surface it as a
/// warning); the reported value then uses the floor-guarded objective.
OfflineResult solve_offline(const PessimisticModel& model, const FairnessObjective& f,
                            std::span<const double> mu, const SolverConfig& cfg = {});

/// oracle_value - F(exact values of policy under the true model).
double evaluate_suboptimality(const PolicyTable& policy, const TabularMdp& truth,
                              const FairnessObjective& f, double oracle_value);

/// Rolls out `episodes` episodes of the behavior policy.
Dataset collect_dataset(const TabularMdp& mdp, const PolicyTable& behavior, int episodes,
                        std::uint64_t seed, std::string description = "behavior");

}  // namespace fairmdp
