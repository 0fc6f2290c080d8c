#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairmdp/mdp.hpp"
#include "fairmdp/pgrad.hpp"
#include "fairmdp/solver.hpp"
#include "fairmdp/toml.hpp"

namespace fairmdp {

enum class ExperimentMode { Plan, Online, Offline, Pg, Oracle };

ExperimentMode parse_experiment_mode(const std::string& text);
std::string experiment_mode_name(ExperimentMode mode);

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::Plan;
    RandomMdpConfig mdp;    // per-seed instance template; the seed field is set per seed
    std::string mdp_file;   // optional JSON instance replacing generation
    std::string fairness = "max-min";
    double delta = 0.1;
    int episodes = 600;     // online K
    double width_scale = 1.0;
    std::vector<int> offline_sizes = {1000};
    std::string data_file;  // offline: JSON-lines dataset replacing generation
    PgConfig pg;
    SolverConfig solver;
    double oracle_grid_step = 0.05;
    std::vector<std::uint64_t> seeds = {1};
    std::string output_dir = "out";
    int parallelism = 0;    // 0 = hardware concurrency
    bool dump_policy = false;
    bool dump_mdp = false;

    /// Throws std::invalid_argument on mode-specific missing/bad fields.
    void validate() const;
};

ExperimentConfig experiment_config_from_toml(const TomlTable& table);
ExperimentConfig load_experiment_config(const std::string& path);
std::string experiment_config_to_json(const ExperimentConfig& cfg);

/// Dispatches the configured mode across all seeds (worker pool), writes
/// <out>/seed-<n>.csv per seed, an aggregate CSV with rowwise
/// mean/min/max across seeds, and a JSON manifest. Failed seeds keep the
/// other seeds' outputs and are recorded in the manifest. Returns 0 on
/// success, 3 if any seed failed.
int run_experiment(const ExperimentConfig& cfg);

}  // namespace fairmdp
