#include "fairmdp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fairmdp/occupancy.hpp"

namespace fairmdp {

namespace {

// tau for the soft-min surrogate: bias tau log N stays below tol/2
double softmin_target_tau(const FairnessObjective& f, int num_agents, double tol) {
    if (f.kind != FairnessKind::MaxMin || num_agents < 2) return 1.0;
    return tol / (2.0 * std::log(static_cast<double>(num_agents)));
}

double annealed_tau(double target, int t) {
    return std::max(target, 0.2 * std::exp2(-static_cast<double>(t) / 20.0));
}

// golden-section maximization of the guarded objective along the segment
// v + gamma (v_vertex - v); values are linear in the measure, so the 1-D
// search works in value space
double line_search(const FairnessObjective& f, std::span<const double> v,
                   std::span<const double> v_vertex) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    std::vector<double> probe(v.size());
    auto value_at = [&](double gamma) {
        for (std::size_t i = 0; i < v.size(); ++i)
            probe[i] = v[i] + gamma * (v_vertex[i] - v[i]);
        return f.kind == FairnessKind::MaxMin ? evaluate_softmin(f, probe)
                                              : evaluate_guarded(f, probe);
    };
    double lo = 0.0, hi = 1.0;
    double m1 = hi - inv_phi * (hi - lo), m2 = lo + inv_phi * (hi - lo);
    double f1 = value_at(m1), f2 = value_at(m2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = m1;
            m1 = m2;
            f1 = f2;
            m2 = lo + inv_phi * (hi - lo);
            f2 = value_at(m2);
        } else {
            hi = m2;
            m2 = m1;
            f2 = f1;
            m1 = hi - inv_phi * (hi - lo);
            f1 = value_at(m1);
        }
    }
    return (lo + hi) / 2.0;
}

double report_value(const FairnessObjective& f, std::span<const double> v) {
    if (f.kind == FairnessKind::MaxMin) return *std::min_element(v.begin(), v.end());
    return evaluate_guarded(f, v);
}

}  // namespace

LinearOracleResult linear_oracle_q(const Array3& weights, const TransitionKernel& p,
                                   std::span<const double> mu) {
    int H = weights.d0, S = weights.d1, A = weights.d2;
    std::vector<double> value(S, 0.0), next(S, 0.0);
    PolicyTable policy(H, S, A);
    for (int h = H - 1; h >= 0; --h) {
        std::swap(value, next);
        for (int s = 0; s < S; ++s) {
            int best_a = 0;
            double best = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < A; ++a) {
                double q = weights.at(h, s, a);
                if (h + 1 < H) {
                    auto row = p.row(h, s, a);
                    for (int s2 = 0; s2 < S; ++s2) q += row[s2] * next[s2];
                }
                if (q > best) {
                    best = q;
                    best_a = a;
                }
            }
            value[s] = best;
            policy.at(h, s, best_a) = 1.0;
        }
    }
    LinearOracleResult out;
    out.objective = 0.0;
    for (int s = 0; s < S; ++s) out.objective += mu[s] * value[s];
    out.q = q_from_policy(policy, p, mu);
    out.policy = std::move(policy);
    return out;
}

TransitionBandMax inner_max_transition(std::span<const double> v_next,
                                       std::span<const double> p_bar_row,
                                       std::span<const double> beta_row) {
    std::size_t S = v_next.size();
    if (p_bar_row.size() != S || beta_row.size() != S)
        throw std::invalid_argument("inner_max_transition: size mismatch");
    TransitionBandMax out;
    out.row.resize(S);
    double lower_total = 0.0, upper_total = 0.0;
    std::vector<double> upper(S);
    for (std::size_t s = 0; s < S; ++s) {
        if (beta_row[s] < 0.0) throw std::invalid_argument("inner_max_transition: negative width");
        out.row[s] = std::clamp(p_bar_row[s] - beta_row[s], 0.0, 1.0);
        upper[s] = std::min(p_bar_row[s] + beta_row[s], 1.0);
        lower_total += out.row[s];
        upper_total += upper[s];
    }
    if (lower_total > 1.0 + 1e-12 || upper_total < 1.0 - 1e-12)
        throw std::invalid_argument("inner_max_transition: infeasible band");
    std::vector<int> order(S);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return v_next[a] > v_next[b]; });
    double rem = 1.0 - lower_total;
    for (int s : order) {
        if (rem <= 0.0) break;
        double add = std::min(upper[s] - out.row[s], rem);
        out.row[s] += add;
        rem -= add;
    }
    out.value = 0.0;
    for (std::size_t s = 0; s < S; ++s) out.value += out.row[s] * v_next[s];
    return out;
}

PlanResult solve_fair_plan(const RewardTable& rewards, const TransitionKernel& p,
                           std::span<const double> mu, const FairnessObjective& f,
                           const SolverConfig& cfg) {
    if (cfg.max_iterations < 1) throw std::invalid_argument("solver: max_iterations must be >= 1");
    if (cfg.duality_gap_tolerance <= 0.0)
        throw std::invalid_argument("solver: tolerance must be > 0");
    int H = rewards.horizon, S = rewards.num_states, A = rewards.num_actions;
    int N = rewards.num_agents;

    FairnessObjective fs = f;
    double tau_target = softmin_target_tau(f, N, cfg.duality_gap_tolerance);

    OccupancyQ q = q_from_policy(PolicyTable::uniform(H, S, A), p, mu);
    std::vector<double> v = agent_values_from_q(q, rewards);

    Array3 c(H, S, A);
    auto weights_from_gradient = [&](const std::vector<double>& g) {
        for (int h = 0; h < H; ++h)
            for (int s = 0; s < S; ++s)
                for (int a = 0; a < A; ++a) {
                    double w = 0.0;
                    for (int i = 0; i < N; ++i) w += g[i] * rewards.at(h, i, s, a);
                    c.at(h, s, a) = w;
                }
    };
    auto dot_q = [&](const OccupancyQ& x) {
        double acc = 0.0;
        for (std::size_t i = 0; i < x.mass.size(); ++i) acc += c.data[i] * x.mass[i];
        return acc;
    };

    PlanResult out;
    out.converged = false;
    int t = 0;
    for (; t < cfg.max_iterations; ++t) {
        fs.softmin_temperature = cfg.softmin_schedule == SoftminSchedule::Annealed
                                     ? annealed_tau(tau_target, t)
                                     : tau_target;
        std::vector<double> g = gradient_guarded(fs, v);
        weights_from_gradient(g);
        LinearOracleResult vertex = linear_oracle_q(c, p, mu);
        out.gap = vertex.objective - dot_q(q);
        if (out.gap <= cfg.duality_gap_tolerance &&
            fs.softmin_temperature <= tau_target * (1.0 + 1e-12)) {
            out.converged = true;
            break;
        }
        std::vector<double> v_vertex = agent_values_from_q(vertex.q, rewards);
        double gamma = cfg.step_rule == StepRule::LineSearch
                           ? line_search(fs, v, v_vertex)
                           : 2.0 / (t + 2.0);
        for (std::size_t i = 0; i < q.mass.size(); ++i)
            q.mass[i] += gamma * (vertex.q.mass[i] - q.mass[i]);
        for (int i = 0; i < N; ++i) v[i] += gamma * (v_vertex[i] - v[i]);
    }
    if (!out.converged) {
        // certify the returned point
        fs.softmin_temperature = tau_target;
        std::vector<double> g = gradient_guarded(fs, v);
        weights_from_gradient(g);
        LinearOracleResult vertex = linear_oracle_q(c, p, mu);
        out.gap = vertex.objective - dot_q(q);
        out.converged = out.gap <= cfg.duality_gap_tolerance;
    }
    out.iterations = t;
    out.q = std::move(q);
    out.agent_values = v;
    out.value = report_value(f, v);
    return out;
}

RewardTable optimistic_rewards(const ConfidenceModel& model) {
    int H = model.horizon, S = model.num_states, A = model.num_actions, N = model.num_agents;
    RewardTable r(H, N, S, A);
    for (int h = 0; h < H; ++h)
        for (int i = 0; i < N; ++i)
            for (int s = 0; s < S; ++s)
                for (int a = 0; a < A; ++a)
                    r.at(h, i, s, a) =
                        std::min(model.r_bar.at(h, i, s, a) + model.beta_r.at(h, s, a), 1.0);
    return r;
}

namespace {

struct ZVertex {
    OccupancyZ z;
    double objective;
};

// extended value iteration: the linear oracle over the band polytope
ZVertex extended_linear_oracle(const Array3& weights, const ConfidenceModel& model,
                               std::span<const double> mu) {
    int H = weights.d0, S = weights.d1, A = weights.d2;
    std::vector<double> value(S, 0.0), next(S, 0.0);
    std::vector<int> best_action(static_cast<std::size_t>(H) * S);
    // chosen transition row per (h, s) for h < H-1
    std::vector<double> chosen(H > 1 ? static_cast<std::size_t>(H - 1) * S * S : 0, 0.0);
    for (int h = H - 1; h >= 0; --h) {
        std::swap(value, next);
        for (int s = 0; s < S; ++s) {
            int best_a = 0;
            double best = -std::numeric_limits<double>::infinity();
            std::vector<double> best_row;
            for (int a = 0; a < A; ++a) {
                double q = weights.at(h, s, a);
                TransitionBandMax inner;
                if (h + 1 < H) {
                    inner = inner_max_transition(next, model.p_bar.row(h, s, a),
                                                 model.beta_p.row(h, s, a));
                    q += inner.value;
                }
                if (q > best) {
                    best = q;
                    best_a = a;
                    best_row = std::move(inner.row);
                }
            }
            value[s] = best;
            best_action[static_cast<std::size_t>(h) * S + s] = best_a;
            if (h + 1 < H)
                std::copy(best_row.begin(), best_row.end(),
                          chosen.begin() + (static_cast<std::size_t>(h) * S + s) * S);
        }
    }
    ZVertex out;
    out.objective = 0.0;
    for (int s = 0; s < S; ++s) out.objective += mu[s] * value[s];
    out.z = OccupancyZ(H, S, A);
    std::vector<double> dist(mu.begin(), mu.end());
    std::vector<double> dnext(S, 0.0);
    for (int h = 0; h < H; ++h) {
        std::fill(dnext.begin(), dnext.end(), 0.0);
        for (int s = 0; s < S; ++s) {
            double m = dist[s];
            if (m == 0.0) continue;
            int a = best_action[static_cast<std::size_t>(h) * S + s];
            auto dst = out.z.row(h, s, a);
            if (h + 1 < H) {
                const double* row = chosen.data() + (static_cast<std::size_t>(h) * S + s) * S;
                for (int s2 = 0; s2 < S; ++s2) {
                    dst[s2] = m * row[s2];
                    dnext[s2] += m * row[s2];
                }
            } else {
                for (int s2 = 0; s2 < S; ++s2) dst[s2] = m / S;
            }
        }
        dist = dnext;
    }
    return out;
}

}  // namespace

ExtendedResult solve_fair_extended(const ConfidenceModel& model, const FairnessObjective& f,
                                   std::span<const double> mu, const SolverConfig& cfg) {
    if (cfg.max_iterations < 1) throw std::invalid_argument("solver: max_iterations must be >= 1");
    if (cfg.duality_gap_tolerance <= 0.0)
        throw std::invalid_argument("solver: tolerance must be > 0");
    int H = model.horizon, S = model.num_states, A = model.num_actions, N = model.num_agents;

    RewardTable r_opt = optimistic_rewards(model);
    FairnessObjective fs = f;
    double tau_target = softmin_target_tau(f, N, cfg.duality_gap_tolerance);

    OccupancyZ z = z_from_policy(PolicyTable::uniform(H, S, A), model.p_bar, mu);
    OccupancyQ qz = marginalize_z(z);
    std::vector<double> v = agent_values_from_q(qz, r_opt);

    Array3 c(H, S, A);
    auto weights_from_gradient = [&](const std::vector<double>& g) {
        for (int h = 0; h < H; ++h)
            for (int s = 0; s < S; ++s)
                for (int a = 0; a < A; ++a) {
                    double w = 0.0;
                    for (int i = 0; i < N; ++i) w += g[i] * r_opt.at(h, i, s, a);
                    c.at(h, s, a) = w;
                }
    };
    auto dot_qz = [&]() {
        double acc = 0.0;
        for (std::size_t i = 0; i < qz.mass.size(); ++i) acc += c.data[i] * qz.mass[i];
        return acc;
    };

    ExtendedResult out;
    out.converged = false;
    int t = 0;
    for (; t < cfg.max_iterations; ++t) {
        fs.softmin_temperature = cfg.softmin_schedule == SoftminSchedule::Annealed
                                     ? annealed_tau(tau_target, t)
                                     : tau_target;
        std::vector<double> g = gradient_guarded(fs, v);
        weights_from_gradient(g);
        ZVertex vertex = extended_linear_oracle(c, model, mu);
        out.gap = vertex.objective - dot_qz();
        if (out.gap <= cfg.duality_gap_tolerance &&
            fs.softmin_temperature <= tau_target * (1.0 + 1e-12)) {
            out.converged = true;
            break;
        }
        OccupancyQ q_vertex = marginalize_z(vertex.z);
        std::vector<double> v_vertex = agent_values_from_q(q_vertex, r_opt);
        double gamma = cfg.step_rule == StepRule::LineSearch
                           ? line_search(fs, v, v_vertex)
                           : 2.0 / (t + 2.0);
        for (std::size_t i = 0; i < z.mass.size(); ++i)
            z.mass[i] += gamma * (vertex.z.mass[i] - z.mass[i]);
        for (std::size_t i = 0; i < qz.mass.size(); ++i)
            qz.mass[i] += gamma * (q_vertex.mass[i] - qz.mass[i]);
        for (int i = 0; i < N; ++i) v[i] += gamma * (v_vertex[i] - v[i]);
    }
    if (!out.converged) {
        fs.softmin_temperature = tau_target;
        std::vector<double> g = gradient_guarded(fs, v);
        weights_from_gradient(g);
        ZVertex vertex = extended_linear_oracle(c, model, mu);
        out.gap = vertex.objective - dot_qz();
        out.converged = out.gap <= cfg.duality_gap_tolerance;
    }
    out.iterations = t;
    out.z = std::move(z);
    out.agent_values = v;
    out.value = report_value(f, v);
    return out;
}

}  // namespace fairmdp
