#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace fairmdp {

struct MdpDims {
    int num_agents = 1;
    int num_states = 1;
    int num_actions = 1;
    int horizon = 1;
};

/// Dense (h, s, a) grid of doubles, row-major with the action index fastest.
struct Array3 {
    int d0 = 0, d1 = 0, d2 = 0;
    std::vector<double> data;

    Array3() = default;
    Array3(int n0, int n1, int n2, double fill = 0.0)
        : d0(n0), d1(n1), d2(n2),
          data(static_cast<std::size_t>(n0) * n1 * n2, fill) {}

    std::size_t index(int i, int j, int k) const {
        assert(i >= 0 && i < d0 && j >= 0 && j < d1 && k >= 0 && k < d2);
        return (static_cast<std::size_t>(i) * d1 + j) * d2 + k;
    }
    double& at(int i, int j, int k) { return data[index(i, j, k)]; }
    double at(int i, int j, int k) const { return data[index(i, j, k)]; }
    std::span<double> row(int i, int j) {
        return {data.data() + index(i, j, 0), static_cast<std::size_t>(d2)};
    }
    std::span<const double> row(int i, int j) const {
        return {data.data() + index(i, j, 0), static_cast<std::size_t>(d2)};
    }
};

/// Dense (h, i, j, k) grid of doubles, innermost index fastest.
struct Array4 {
    int d0 = 0, d1 = 0, d2 = 0, d3 = 0;
    std::vector<double> data;

    Array4() = default;
    Array4(int n0, int n1, int n2, int n3, double fill = 0.0)
        : d0(n0), d1(n1), d2(n2), d3(n3),
          data(static_cast<std::size_t>(n0) * n1 * n2 * n3, fill) {}

    std::size_t index(int i, int j, int k, int l) const {
        assert(i >= 0 && i < d0 && j >= 0 && j < d1 && k >= 0 && k < d2 && l >= 0 && l < d3);
        return ((static_cast<std::size_t>(i) * d1 + j) * d2 + k) * d3 + l;
    }
    double& at(int i, int j, int k, int l) { return data[index(i, j, k, l)]; }
    double at(int i, int j, int k, int l) const { return data[index(i, j, k, l)]; }
    std::span<double> row(int i, int j, int k) {
        return {data.data() + index(i, j, k, 0), static_cast<std::size_t>(d3)};
    }
    std::span<const double> row(int i, int j, int k) const {
        return {data.data() + index(i, j, k, 0), static_cast<std::size_t>(d3)};
    }
};

/// pi[h][s][a]; every (h, s) row is a distribution over actions.
struct PolicyTable {
    int horizon = 0, num_states = 0, num_actions = 0;
    std::vector<double> probs;

    PolicyTable() = default;
    PolicyTable(int h, int s, int a, double fill = 0.0)
        : horizon(h), num_states(s), num_actions(a),
          probs(static_cast<std::size_t>(h) * s * a, fill) {}

    static PolicyTable uniform(int h, int s, int a) {
        return PolicyTable(h, s, a, 1.0 / a);
    }

    std::size_t index(int h, int s, int a) const {
        assert(h >= 0 && h < horizon && s >= 0 && s < num_states && a >= 0 && a < num_actions);
        return (static_cast<std::size_t>(h) * num_states + s) * num_actions + a;
    }
    double& at(int h, int s, int a) { return probs[index(h, s, a)]; }
    double at(int h, int s, int a) const { return probs[index(h, s, a)]; }
    std::span<double> row(int h, int s) {
        return {probs.data() + index(h, s, 0), static_cast<std::size_t>(num_actions)};
    }
    std::span<const double> row(int h, int s) const {
        return {probs.data() + index(h, s, 0), static_cast<std::size_t>(num_actions)};
    }
};

/// p[h][s][a][s'] for h = 1..H-1; each (h, s, a) row is a distribution
/// over next states. An MDP with horizon H carries H-1 slices.
struct TransitionKernel {
    int steps = 0, num_states = 0, num_actions = 0;
    std::vector<double> probs;

    TransitionKernel() = default;
    TransitionKernel(int steps_, int s, int a, double fill = 0.0)
        : steps(steps_), num_states(s), num_actions(a),
          probs(static_cast<std::size_t>(steps_) * s * a * s, fill) {}

    std::size_t index(int h, int s, int a, int s2) const {
        assert(h >= 0 && h < steps && s >= 0 && s < num_states && a >= 0 &&
               a < num_actions && s2 >= 0 && s2 < num_states);
        return ((static_cast<std::size_t>(h) * num_states + s) * num_actions + a) * num_states + s2;
    }
    double& at(int h, int s, int a, int s2) { return probs[index(h, s, a, s2)]; }
    double at(int h, int s, int a, int s2) const { return probs[index(h, s, a, s2)]; }
    std::span<double> row(int h, int s, int a) {
        return {probs.data() + index(h, s, a, 0), static_cast<std::size_t>(num_states)};
    }
    std::span<const double> row(int h, int s, int a) const {
        return {probs.data() + index(h, s, a, 0), static_cast<std::size_t>(num_states)};
    }
};

/// r[h][i][s][a]: per-step, per-agent mean reward.
struct RewardTable {
    int horizon = 0, num_agents = 0, num_states = 0, num_actions = 0;
    std::vector<double> values;

    RewardTable() = default;
    RewardTable(int h, int n, int s, int a, double fill = 0.0)
        : horizon(h), num_agents(n), num_states(s), num_actions(a),
          values(static_cast<std::size_t>(h) * n * s * a, fill) {}

    std::size_t index(int h, int i, int s, int a) const {
        assert(h >= 0 && h < horizon && i >= 0 && i < num_agents && s >= 0 &&
               s < num_states && a >= 0 && a < num_actions);
        return ((static_cast<std::size_t>(h) * num_agents + i) * num_states + s) * num_actions + a;
    }
    double& at(int h, int i, int s, int a) { return values[index(h, i, s, a)]; }
    double at(int h, int i, int s, int a) const { return values[index(h, i, s, a)]; }
};

/// State-action occupancy measure q[h][s][a].
struct OccupancyQ {
    int horizon = 0, num_states = 0, num_actions = 0;
    std::vector<double> mass;

    OccupancyQ() = default;
    OccupancyQ(int h, int s, int a, double fill = 0.0)
        : horizon(h), num_states(s), num_actions(a),
          mass(static_cast<std::size_t>(h) * s * a, fill) {}

    std::size_t index(int h, int s, int a) const {
        assert(h >= 0 && h < horizon && s >= 0 && s < num_states && a >= 0 && a < num_actions);
        return (static_cast<std::size_t>(h) * num_states + s) * num_actions + a;
    }
    double& at(int h, int s, int a) { return mass[index(h, s, a)]; }
    double at(int h, int s, int a) const { return mass[index(h, s, a)]; }
    std::span<double> row(int h, int s) {
        return {mass.data() + index(h, s, 0), static_cast<std::size_t>(num_actions)};
    }
    std::span<const double> row(int h, int s) const {
        return {mass.data() + index(h, s, 0), static_cast<std::size_t>(num_actions)};
    }
};

/// State-action-next-state occupancy measure z[h][s][a][s'].
/// Carries H slices; the h = H slice has no physical next state, its
/// s' dimension is a bookkeeping split whose marginal is q_H.
struct OccupancyZ {
    int horizon = 0, num_states = 0, num_actions = 0;
    std::vector<double> mass;

    OccupancyZ() = default;
    OccupancyZ(int h, int s, int a, double fill = 0.0)
        : horizon(h), num_states(s), num_actions(a),
          mass(static_cast<std::size_t>(h) * s * a * s, fill) {}

    std::size_t index(int h, int s, int a, int s2) const {
        assert(h >= 0 && h < horizon && s >= 0 && s < num_states && a >= 0 &&
               a < num_actions && s2 >= 0 && s2 < num_states);
        return ((static_cast<std::size_t>(h) * num_states + s) * num_actions + a) * num_states + s2;
    }
    double& at(int h, int s, int a, int s2) { return mass[index(h, s, a, s2)]; }
    double at(int h, int s, int a, int s2) const { return mass[index(h, s, a, s2)]; }
    std::span<double> row(int h, int s, int a) {
        return {mass.data() + index(h, s, a, 0), static_cast<std::size_t>(num_states)};
    }
    std::span<const double> row(int h, int s, int a) const {
        return {mass.data() + index(h, s, a, 0), static_cast<std::size_t>(num_states)};
    }
};

}  // namespace fairmdp
