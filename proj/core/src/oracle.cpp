#include "fairmdp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairmdp {

namespace {

// all length-A compositions of M grid units, lexicographic
void enumerate_rows(int actions, int units, std::vector<int>& prefix,
                    std::vector<std::vector<double>>& out) {
    if (actions == 1) {
        std::vector<double> row;
        row.reserve(prefix.size() + 1);
        int used = 0;
        for (int k : prefix) {
            row.push_back(static_cast<double>(k) / units);
            used += k;
        }
        row.push_back(static_cast<double>(units - used) / units);
        out.push_back(std::move(row));
        return;
    }
    int used = 0;
    for (int k : prefix) used += k;
    for (int k = 0; k <= units - used; ++k) {
        prefix.push_back(k);
        enumerate_rows(actions - 1, units, prefix, out);
        prefix.pop_back();
    }
}

struct Searcher {
    const TabularMdp& mdp;
    const FairnessObjective& f;
    long long budget;
    int S, A, H, N;

    std::vector<std::vector<double>> rows;  // simplex grid candidates
    // per (h, s, candidate): immediate reward per agent, pushed mass per next state
    std::vector<double> immediate;  // [((h*S+s)*R + c)*N + i]
    std::vector<double> push;       // [((h*S+s)*R + c)*S + s2]
    // per-agent optimal value-to-go over continuous policies
    std::vector<double> value_togo;  // [(i*(H+1) + h)*S + s]

    long long nodes = 0;
    double best = -std::numeric_limits<double>::infinity();
    bool have_best = false;
    std::vector<int> choice;  // candidate per (h*S+s); -1 = unreached, uniform
    std::vector<int> best_choice;

    // scratch indexed by assignment depth d = h*S + s
    std::vector<std::vector<double>> acc_stack;    // per-agent values so far
    std::vector<std::vector<double>> dnext_stack;  // mass pushed to step h+1 so far
    std::vector<std::vector<double>> dist_step;    // reach distribution per step
    std::vector<double> ub;

    Searcher(const TabularMdp& m, const FairnessObjective& fobj, int units, long long node_budget)
        : mdp(m), f(fobj), budget(node_budget), S(m.num_states), A(m.num_actions),
          H(m.horizon), N(m.num_agents) {
        std::vector<int> prefix;
        enumerate_rows(A, units, prefix, rows);
        std::size_t R = rows.size();
        immediate.assign(static_cast<std::size_t>(H) * S * R * N, 0.0);
        push.assign(static_cast<std::size_t>(H) * S * R * S, 0.0);
        for (int h = 0; h < H; ++h)
            for (int s = 0; s < S; ++s)
                for (std::size_t c = 0; c < R; ++c) {
                    const std::vector<double>& pi = rows[c];
                    std::size_t base = (static_cast<std::size_t>(h) * S + s) * R + c;
                    for (int i = 0; i < N; ++i) {
                        double acc = 0.0;
                        for (int a = 0; a < A; ++a) acc += pi[a] * m.reward.at(h, i, s, a);
                        immediate[base * N + i] = acc;
                    }
                    if (h + 1 < H)
                        for (int a = 0; a < A; ++a) {
                            if (pi[a] == 0.0) continue;
                            auto row = m.transition.row(h, s, a);
                            for (int s2 = 0; s2 < S; ++s2)
                                push[base * S + s2] += pi[a] * row[s2];
                        }
                }
        value_togo.assign(static_cast<std::size_t>(N) * (H + 1) * S, 0.0);
        for (int h = H - 1; h >= 0; --h)
            for (int i = 0; i < N; ++i)
                for (int s = 0; s < S; ++s) {
                    double bestq = -std::numeric_limits<double>::infinity();
                    for (int a = 0; a < A; ++a) {
                        double q = m.reward.at(h, i, s, a);
                        if (h + 1 < H) {
                            auto row = m.transition.row(h, s, a);
                            for (int s2 = 0; s2 < S; ++s2) q += row[s2] * togo(i, h + 1, s2);
                        }
                        bestq = std::max(bestq, q);
                    }
                    togo(i, h, s) = bestq;
                }
        choice.assign(static_cast<std::size_t>(H) * S, -1);
        best_choice = choice;
        acc_stack.assign(static_cast<std::size_t>(H) * S + 1, std::vector<double>(N, 0.0));
        dnext_stack.assign(static_cast<std::size_t>(H) * S + 1, std::vector<double>(S, 0.0));
        dist_step.assign(H, std::vector<double>(S, 0.0));
        ub.resize(N);
    }

    double& togo(int i, int h, int s) {
        return value_togo[(static_cast<std::size_t>(i) * (H + 1) + h) * S + s];
    }

    void run() {
        dist_step[0].assign(mdp.initial_distribution.begin(), mdp.initial_distribution.end());
        descend(0, 0);
    }

    void descend(int h, int s) {
        std::size_t d = static_cast<std::size_t>(h) * S + s;
        if (s == S) {
            if (h + 1 == H) {
                double val = evaluate_guarded(f, acc_stack[d]);
                if (val > best) {
                    best = val;
                    best_choice = choice;
                    have_best = true;
                }
                return;
            }
            dist_step[h + 1] = dnext_stack[d];
            std::fill(dnext_stack[d].begin(), dnext_stack[d].end(), 0.0);
            descend(h + 1, 0);
            return;
        }
        const std::vector<double>& dist = dist_step[h];
        if (dist[s] <= 1e-15) {
            // unreachable row: value-irrelevant, fix to uniform and move on
            choice[d] = -1;
            acc_stack[d + 1] = acc_stack[d];
            dnext_stack[d + 1] = dnext_stack[d];
            descend(h, s + 1);
            return;
        }
        std::size_t R = rows.size();
        bool last_step = h + 1 == H;
        double m = dist[s];
        for (std::size_t c = 0; c < R; ++c) {
            if (++nodes > budget)
                throw std::runtime_error(
                    "brute_force_oracle: node budget exceeded, use a coarser grid_step");
            std::size_t base = d * R + c;
            for (int i = 0; i < N; ++i)
                acc_stack[d + 1][i] = acc_stack[d][i] + m * immediate[base * N + i];
            if (!last_step)
                for (int s2 = 0; s2 < S; ++s2)
                    dnext_stack[d + 1][s2] = dnext_stack[d][s2] + m * push[base * S + s2];

            // optimistic completion: remaining rows of this step plus all
            // later steps at each agent's individual optimum
            for (int i = 0; i < N; ++i) {
                double u = acc_stack[d + 1][i];
                for (int s3 = s + 1; s3 < S; ++s3) u += dist[s3] * togo(i, h, s3);
                if (!last_step)
                    for (int s2 = 0; s2 < S; ++s2) u += dnext_stack[d + 1][s2] * togo(i, h + 1, s2);
                ub[i] = u;
            }
            if (evaluate_guarded(f, ub) <= best - 1e-12) continue;

            choice[d] = static_cast<int>(c);
            descend(h, s + 1);
        }
        choice[d] = -1;
    }

    PolicyTable assemble(const std::vector<int>& picks) const {
        PolicyTable policy(H, S, A);
        for (int h = 0; h < H; ++h)
            for (int s = 0; s < S; ++s) {
                auto row = policy.row(h, s);
                int c = picks[static_cast<std::size_t>(h) * S + s];
                if (c < 0) {
                    for (double& x : row) x = 1.0 / A;
                } else {
                    for (int a = 0; a < A; ++a) row[a] = rows[c][a];
                }
            }
        return policy;
    }
};

}  // namespace

OracleResult brute_force_oracle(const TabularMdp& mdp, const FairnessObjective& f,
                                const OracleOptions& options) {
    if (options.grid_step <= 0.0 || options.grid_step > 0.5)
        throw std::invalid_argument("brute_force_oracle: grid_step must be in (0, 0.5]");
    mdp.validate();
    int units = static_cast<int>(std::llround(1.0 / options.grid_step));
    Searcher search(mdp, f, units, options.node_budget);

    // on-grid incumbents sharpen pruning from the first node: each agent's
    // individually optimal deterministic policy, and the uniform policy
    // when the grid contains it
    std::vector<PolicyTable> incumbents;
    for (int i = 0; i < mdp.num_agents; ++i) {
        PolicyTable det(mdp.horizon, mdp.num_states, mdp.num_actions);
        for (int h = 0; h < mdp.horizon; ++h)
            for (int s = 0; s < mdp.num_states; ++s) {
                int best_a = 0;
                double best = -std::numeric_limits<double>::infinity();
                for (int a = 0; a < mdp.num_actions; ++a) {
                    double q = mdp.reward.at(h, i, s, a);
                    if (h + 1 < mdp.horizon) {
                        auto row = mdp.transition.row(h, s, a);
                        for (int s2 = 0; s2 < mdp.num_states; ++s2)
                            q += row[s2] * search.togo(i, h + 1, s2);
                    }
                    if (q > best) {
                        best = q;
                        best_a = a;
                    }
                }
                det.at(h, s, best_a) = 1.0;
            }
        incumbents.push_back(std::move(det));
    }
    if (units % mdp.num_actions == 0)
        incumbents.push_back(PolicyTable::uniform(mdp.horizon, mdp.num_states, mdp.num_actions));

    double incumbent_best = -std::numeric_limits<double>::infinity();
    std::size_t incumbent_arg = 0;
    for (std::size_t i = 0; i < incumbents.size(); ++i) {
        std::vector<double> v = exact_agent_values(mdp, incumbents[i]);
        double val = evaluate_guarded(f, v);
        if (val > incumbent_best) {
            incumbent_best = val;
            incumbent_arg = i;
        }
    }
    search.best = incumbent_best;
    search.have_best = false;

    search.run();

    OracleResult out;
    out.policy = search.have_best && search.best > incumbent_best
                     ? search.assemble(search.best_choice)
                     : incumbents[incumbent_arg];
    std::vector<double> v = exact_agent_values(mdp, out.policy);
    out.value = evaluate_guarded(f, v);
    out.error_bound = mdp.num_agents * lipschitz_constant(f, mdp.num_agents) * mdp.horizon *
                      options.grid_step;
    out.nodes = search.nodes;
    return out;
}

OracleResult brute_force_oracle(const TabularMdp& mdp, const FairnessObjective& f,
                                double grid_step) {
    OracleOptions options;
    options.grid_step = grid_step;
    return brute_force_oracle(mdp, f, options);
}

}  // namespace fairmdp
