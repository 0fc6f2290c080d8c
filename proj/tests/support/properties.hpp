#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "fairmdp/fairness.hpp"
#include "fairmdp/mdp.hpp"
#include "fairmdp/occupancy.hpp"
#include "fairmdp/rng.hpp"

// Property-check loops shared by the unit tests and the acceptance suite.
namespace fairmdp::testing {

struct PropertyStats {
    long long trials = 0;
    long long violations = 0;
    double worst = 0.0;  // largest violation magnitude seen
};

inline std::vector<double> random_values(int n, double lo, double hi, RandomStream& rng) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

/// F(lambda v + (1-lambda) w) >= lambda F(v) + (1-lambda) F(w) - slack.
inline PropertyStats check_concavity(const FairnessObjective& f, int trials, std::uint64_t seed,
                                     double slack = 1e-12) {
    PropertyStats stats;
    RandomStream rng = RandomStream::derive(seed, {1});
    for (int t = 0; t < trials; ++t) {
        int n = 2 + rng.uniform_int(3);
        std::vector<double> v = random_values(n, f.epsilon_floor, 3.0, rng);
        std::vector<double> w = random_values(n, f.epsilon_floor, 3.0, rng);
        double lambda = rng.uniform(0.01, 0.99);
        std::vector<double> blend(n);
        for (int i = 0; i < n; ++i) blend[i] = lambda * v[i] + (1.0 - lambda) * w[i];
        double lhs = evaluate(f, blend);
        double rhs = lambda * evaluate(f, v) + (1.0 - lambda) * evaluate(f, w);
        ++stats.trials;
        if (lhs < rhs - slack) {
            ++stats.violations;
            stats.worst = std::max(stats.worst, rhs - lhs);
        }
    }
    return stats;
}

/// Entrywise v <= w implies F(v) <= F(w).
inline PropertyStats check_monotonicity(const FairnessObjective& f, int trials,
                                        std::uint64_t seed, double slack = 1e-12) {
    PropertyStats stats;
    RandomStream rng = RandomStream::derive(seed, {2});
    for (int t = 0; t < trials; ++t) {
        int n = 2 + rng.uniform_int(3);
        std::vector<double> v = random_values(n, f.epsilon_floor, 3.0, rng);
        std::vector<double> w(v);
        for (double& x : w) x += rng.uniform(0.0, 1.0);
        ++stats.trials;
        double diff = evaluate(f, v) - evaluate(f, w);
        if (diff > slack) {
            ++stats.violations;
            stats.worst = std::max(stats.worst, diff);
        }
    }
    return stats;
}

/// |F(v) - F(w)| <= N C_F max_i |v_i - w_i|.
inline PropertyStats check_lipschitz(const FairnessObjective& f, int trials, std::uint64_t seed,
                                     double slack = 1e-12) {
    PropertyStats stats;
    RandomStream rng = RandomStream::derive(seed, {3});
    for (int t = 0; t < trials; ++t) {
        int n = 2 + rng.uniform_int(3);
        std::vector<double> v = random_values(n, f.epsilon_floor, 3.0, rng);
        std::vector<double> w = random_values(n, f.epsilon_floor, 3.0, rng);
        double inf_norm = 0.0;
        for (int i = 0; i < n; ++i) inf_norm = std::max(inf_norm, std::abs(v[i] - w[i]));
        double bound = n * lipschitz_constant(f, n) * inf_norm;
        double diff = std::abs(evaluate(f, v) - evaluate(f, w));
        ++stats.trials;
        if (diff > bound + slack) {
            ++stats.violations;
            stats.worst = std::max(stats.worst, diff - bound);
        }
    }
    return stats;
}

/// |min v - min w| <= max_i |v_i - w_i|.
inline PropertyStats check_maxmin_contraction(int trials, std::uint64_t seed,
                                              double slack = 1e-12) {
    PropertyStats stats;
    RandomStream rng = RandomStream::derive(seed, {4});
    for (int t = 0; t < trials; ++t) {
        int n = 2 + rng.uniform_int(3);
        std::vector<double> v = random_values(n, -2.0, 3.0, rng);
        std::vector<double> w = random_values(n, -2.0, 3.0, rng);
        double inf_norm = 0.0;
        for (int i = 0; i < n; ++i) inf_norm = std::max(inf_norm, std::abs(v[i] - w[i]));
        double diff = std::abs(*std::min_element(v.begin(), v.end()) -
                               *std::min_element(w.begin(), w.end()));
        ++stats.trials;
        if (diff > inf_norm + slack) {
            ++stats.violations;
            stats.worst = std::max(stats.worst, diff - inf_norm);
        }
    }
    return stats;
}

/// Both sides of the value-difference identity for two arbitrary models
/// under one policy, from one start state: the direct DP difference and
/// the reward-gap plus transition-gap expansion under (P'', pi).
struct ValueDifferenceSides {
    std::vector<double> direct;    // V'_i(s) - V''_i(s)
    std::vector<double> expanded;  // lemma right-hand side per agent
};

inline ValueDifferenceSides value_difference_sides(const RewardTable& r1,
                                                   const TransitionKernel& p1,
                                                   const RewardTable& r2,
                                                   const TransitionKernel& p2,
                                                   const PolicyTable& policy, int start_state) {
    int N = r1.num_agents, S = r1.num_states, A = r1.num_actions, H = r1.horizon;
    std::vector<double> v1 = agent_values_dp_per_state(r1, p1, policy);
    std::vector<double> v2 = agent_values_dp_per_state(r2, p2, policy);

    // per-step value-to-go of model 1 (needed inside the expansion)
    // togo[h][i*S+s] = V'_{h,i}(s)
    std::vector<std::vector<double>> togo(H + 1,
                                          std::vector<double>(static_cast<std::size_t>(N) * S, 0.0));
    for (int h = H - 1; h >= 0; --h)
        for (int i = 0; i < N; ++i)
            for (int s = 0; s < S; ++s) {
                double acc = 0.0;
                for (int a = 0; a < A; ++a) {
                    double q = r1.at(h, i, s, a);
                    if (h + 1 < H) {
                        auto row = p1.row(h, s, a);
                        for (int s2 = 0; s2 < S; ++s2) q += row[s2] * togo[h + 1][i * S + s2];
                    }
                    acc += policy.at(h, s, a) * q;
                }
                togo[h][i * S + s] = acc;
            }

    // occupancy under (P'', pi) started from start_state
    std::vector<double> mu(S, 0.0);
    mu[start_state] = 1.0;
    OccupancyQ q = q_from_policy(policy, p2, mu);

    ValueDifferenceSides out;
    out.direct.resize(N);
    out.expanded.assign(N, 0.0);
    for (int i = 0; i < N; ++i)
        out.direct[i] = v1[i * S + start_state] - v2[i * S + start_state];
    for (int i = 0; i < N; ++i)
        for (int h = 0; h < H; ++h)
            for (int s = 0; s < S; ++s)
                for (int a = 0; a < A; ++a) {
                    double mass = q.at(h, s, a);
                    if (mass == 0.0) continue;
                    double term = r1.at(h, i, s, a) - r2.at(h, i, s, a);
                    if (h + 1 < H) {
                        auto row1 = p1.row(h, s, a);
                        auto row2 = p2.row(h, s, a);
                        for (int s2 = 0; s2 < S; ++s2)
                            term += (row1[s2] - row2[s2]) * togo[h + 1][i * S + s2];
                    }
                    out.expanded[i] += mass * term;
                }
    return out;
}

}  // namespace fairmdp::testing
