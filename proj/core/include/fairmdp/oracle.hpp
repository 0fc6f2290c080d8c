#pragma once

#include "fairmdp/fairness.hpp"
#include "fairmdp/mdp.hpp"
#include "fairmdp/tables.hpp"

namespace fairmdp {

struct OracleOptions {
    double grid_step = 0.05;
    // enumeration nodes (row assignments) before giving up
    long long node_budget = 400'000'000;
};

struct OracleResult {
    double value = 0.0;
    PolicyTable policy;
    /// N * C_F * H * grid_step: how far below the true optimum the grid
    /// maximum can sit for Lipschitz objectives.
    double error_bound = 0.0;
    long long nodes = 0;
};

/// Exact maximization of F(exact_agent_values(pi)) over the product grid
/// of per-row simplex distributions at grid_step. Enumerates rows
/// depth-first, pruning subtrees whose per-agent optimal completions
/// (independent backward inductions, an upper bound by monotonicity of F)
/// cannot beat the incumbent; pruning never changes the returned maximum.
/// Rows of states that the prefix reaches with zero probability are fixed
/// to uniform and skipped: they cannot affect any value. Throws
/// std::runtime_error telling the caller to coarsen the grid once the
/// node budget is exceeded.
OracleResult brute_force_oracle(const TabularMdp& mdp, const FairnessObjective& f,
                                const OracleOptions& options);

OracleResult brute_force_oracle(const TabularMdp& mdp, const FairnessObjective& f,
                                double grid_step);

}  // namespace fairmdp
