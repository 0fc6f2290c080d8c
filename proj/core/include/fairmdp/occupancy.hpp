#pragma once

#include <span>
#include <vector>

#include "fairmdp/tables.hpp"

namespace fairmdp {

/// Forward recursion q_1(s,a) = mu(s) pi_1(a|s),
/// q_h(s,a) = pi_h(a|s) sum_{s',a'} p_{h-1}(s|s',a') q_{h-1}(s',a').
OccupancyQ q_from_policy(const PolicyTable& policy, const TransitionKernel& p,
                         std::span<const double> mu);

/// V_{1,(i)} = sum_{h,s,a} r_{h,(i)}(s,a) q_h(s,a); linear in q.
std::vector<double> agent_values_from_q(const OccupancyQ& q, const RewardTable& rewards);

/// Rowwise normalization; zero-mass rows map to the uniform distribution.
PolicyTable policy_from_q(const OccupancyQ& q);

/// pi_h(a|s) = sum_{s'} z_h(s,a,s') / sum_{a',s'} z_h(s,a',s'); zero-mass
/// rows map to uniform.
PolicyTable policy_from_z(const OccupancyZ& z);

/// q_h(s,a) = sum_{s'} z_h(s,a,s').
OccupancyQ marginalize_z(const OccupancyZ& z);

/// z_h = p_h * q_h for h < H; the final slice splits q_H uniformly over
/// the bookkeeping next-state dimension.
OccupancyZ z_from_policy(const PolicyTable& policy, const TransitionKernel& p,
                         std::span<const double> mu);

/// Validates q against the occupancy polytope for kernel p: nonnegative,
/// sum_a q_1(s,a) = mu(s), flow conservation at every later step, and the
/// redundant per-step total mass of 1.
bool is_feasible_q(const OccupancyQ& q, const TransitionKernel& p, std::span<const double> mu,
                   double tol = 1e-6);

/// Validates z against the kernel-free polytope: nonnegative,
/// sum_{a,s'} z_1(s,a,s') = mu(s), and
/// sum_{a,s'} z_h(s,a,s') = sum_{s',a'} z_{h-1}(s',a',s) for h >= 2.
bool is_feasible_z(const OccupancyZ& z, std::span<const double> mu, double tol = 1e-6);

/// p~_h(s'|s,a) = z_h(s,a,s') / sum_y z_h(s,a,y); zero-mass rows map to
/// uniform. Only the first H-1 slices are physical transitions.
TransitionKernel induced_transition(const OccupancyZ& z);

}  // namespace fairmdp
