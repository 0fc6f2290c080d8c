#include "fairmdp/occupancy.hpp"

#include <cmath>
#include <stdexcept>

namespace fairmdp {

OccupancyQ q_from_policy(const PolicyTable& policy, const TransitionKernel& p,
                         std::span<const double> mu) {
    int H = policy.horizon, S = policy.num_states, A = policy.num_actions;
    OccupancyQ q(H, S, A);
    std::vector<double> dist(mu.begin(), mu.end());
    std::vector<double> next(S, 0.0);
    for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) q.at(h, s, a) = dist[s] * policy.at(h, s, a);
        if (h + 1 < H) {
            std::fill(next.begin(), next.end(), 0.0);
            for (int s = 0; s < S; ++s) {
                if (dist[s] == 0.0) continue;
                for (int a = 0; a < A; ++a) {
                    double m = q.at(h, s, a);
                    if (m == 0.0) continue;
                    auto row = p.row(h, s, a);
                    for (int s2 = 0; s2 < S; ++s2) next[s2] += m * row[s2];
                }
            }
            dist = next;
        }
    }
    return q;
}

std::vector<double> agent_values_from_q(const OccupancyQ& q, const RewardTable& rewards) {
    int N = rewards.num_agents;
    std::vector<double> v(N, 0.0);
    for (int i = 0; i < N; ++i)
        for (int h = 0; h < q.horizon; ++h)
            for (int s = 0; s < q.num_states; ++s)
                for (int a = 0; a < q.num_actions; ++a)
                    v[i] += rewards.at(h, i, s, a) * q.at(h, s, a);
    return v;
}

PolicyTable policy_from_q(const OccupancyQ& q) {
    PolicyTable policy(q.horizon, q.num_states, q.num_actions);
    for (int h = 0; h < q.horizon; ++h) {
        for (int s = 0; s < q.num_states; ++s) {
            auto src = q.row(h, s);
            auto dst = policy.row(h, s);
            double total = 0.0;
            for (double x : src) total += x;
            if (total > 0.0) {
                for (int a = 0; a < q.num_actions; ++a) dst[a] = src[a] / total;
            } else {
                for (double& x : dst) x = 1.0 / q.num_actions;
            }
        }
    }
    return policy;
}

PolicyTable policy_from_z(const OccupancyZ& z) {
    return policy_from_q(marginalize_z(z));
}

OccupancyQ marginalize_z(const OccupancyZ& z) {
    OccupancyQ q(z.horizon, z.num_states, z.num_actions);
    for (int h = 0; h < z.horizon; ++h)
        for (int s = 0; s < z.num_states; ++s)
            for (int a = 0; a < z.num_actions; ++a) {
                double total = 0.0;
                for (double x : z.row(h, s, a)) total += x;
                q.at(h, s, a) = total;
            }
    return q;
}

OccupancyZ z_from_policy(const PolicyTable& policy, const TransitionKernel& p,
                         std::span<const double> mu) {
    int H = policy.horizon, S = policy.num_states, A = policy.num_actions;
    OccupancyQ q = q_from_policy(policy, p, mu);
    OccupancyZ z(H, S, A);
    for (int h = 0; h < H; ++h)
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) {
                double m = q.at(h, s, a);
                auto dst = z.row(h, s, a);
                if (h + 1 < H) {
                    auto row = p.row(h, s, a);
                    for (int s2 = 0; s2 < S; ++s2) dst[s2] = m * row[s2];
                } else {
                    for (int s2 = 0; s2 < S; ++s2) dst[s2] = m / S;
                }
            }
    return z;
}

bool is_feasible_q(const OccupancyQ& q, const TransitionKernel& p, std::span<const double> mu,
                   double tol) {
    int H = q.horizon, S = q.num_states, A = q.num_actions;
    for (double x : q.mass)
        if (x < -tol) return false;
    for (int s = 0; s < S; ++s) {
        double total = 0.0;
        for (int a = 0; a < A; ++a) total += q.at(0, s, a);
        if (std::abs(total - mu[s]) > tol) return false;
    }
    for (int h = 1; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
            double lhs = 0.0;
            for (int a = 0; a < A; ++a) lhs += q.at(h, s, a);
            double rhs = 0.0;
            for (int s2 = 0; s2 < S; ++s2)
                for (int a2 = 0; a2 < A; ++a2) rhs += p.at(h - 1, s2, a2, s) * q.at(h - 1, s2, a2);
            if (std::abs(lhs - rhs) > tol) return false;
        }
    }
    // redundant check kept as validation, not imposed by construction
    for (int h = 0; h < H; ++h) {
        double total = 0.0;
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) total += q.at(h, s, a);
        if (std::abs(total - 1.0) > tol * S) return false;
    }
    return true;
}

bool is_feasible_z(const OccupancyZ& z, std::span<const double> mu, double tol) {
    int H = z.horizon, S = z.num_states, A = z.num_actions;
    for (double x : z.mass)
        if (x < -tol) return false;
    for (int s = 0; s < S; ++s) {
        double total = 0.0;
        for (int a = 0; a < A; ++a)
            for (double x : z.row(0, s, a)) total += x;
        if (std::abs(total - mu[s]) > tol) return false;
    }
    for (int h = 1; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
            double lhs = 0.0;
            for (int a = 0; a < A; ++a)
                for (double x : z.row(h, s, a)) lhs += x;
            double rhs = 0.0;
            for (int s2 = 0; s2 < S; ++s2)
                for (int a2 = 0; a2 < A; ++a2) rhs += z.at(h - 1, s2, a2, s);
            if (std::abs(lhs - rhs) > tol) return false;
        }
    }
    return true;
}

TransitionKernel induced_transition(const OccupancyZ& z) {
    int S = z.num_states, A = z.num_actions;
    TransitionKernel p(z.horizon, S, A);
    for (int h = 0; h < z.horizon; ++h)
        for (int s = 0; s < S; ++s)
            for (int a = 0; a < A; ++a) {
                auto src = z.row(h, s, a);
                auto dst = p.row(h, s, a);
                double total = 0.0;
                for (double x : src) total += x;
                if (total > 0.0) {
                    for (int s2 = 0; s2 < S; ++s2) dst[s2] = src[s2] / total;
                } else {
                    for (double& x : dst) x = 1.0 / S;
                }
            }
    return p;
}

}  // namespace fairmdp
