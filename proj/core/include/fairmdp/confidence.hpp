#pragma once

#include "fairmdp/tables.hpp"

namespace fairmdp {

/// Empirical means, visit counts, and confidence widths defining the
/// optimistic model set. Rows with zero visits hold a uniform placeholder
/// in p_bar and zero in r_bar; the widths there use the max{n,1}
/// convention and cover the whole simplex.
struct ConfidenceModel {
    int num_agents = 0, num_states = 0, num_actions = 0, horizon = 0;
    Array3 counts;           // (H, S, A) visit counts
    TransitionKernel p_bar;  // H-1 slices
    RewardTable r_bar;       // (H, N, S, A)
    Array4 beta_p;           // (H-1, S, A, S')
    Array3 beta_r;           // (H, S, A), shared across agents

    MdpDims dims() const { return {num_agents, num_states, num_actions, horizon}; }
};

/// L^p = ln(12 S^2 A H K / delta).
double transition_log_term(int S, int A, int H, int K, double delta);

/// L^r = 2 ln(3 S A H N K / delta).
double reward_log_term(int S, int A, int H, int N, int K, double delta);

/// beta^r = sqrt(L^r / max{n, 1}).
double reward_width(double log_term, long long n);

/// beta^p = sqrt(4 p(1-p) L^p / max{n, 1}) + 14 L^p / (3 max{n, 1})
/// (empirical-Bernstein form with the p_bar(1-p_bar) variance term).
double transition_width(double log_term, double p_bar, long long n);

}  // namespace fairmdp
