// fairmdp: fair planning and learning in finite-horizon tabular MDPs.
//
// Subcommands mirror the experiment modes: plan, online, offline, pg,
// oracle. Settings come from an optional TOML config file; explicitly
// given flags override it. Exit codes: 0 success, 2 config error,
// 3 runtime error.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "fairmdp/experiment.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::string out, fairness, data, mdp_file, step_rule;
    std::vector<std::uint64_t> seeds;
    int episodes = 0, iters = 0, batch = 0, fw_iters = 0, parallelism = 0;
    double delta = 0.0, step = 0.0, fw_tol = 0.0, grid_step = 0.0, width_scale = 0.0;
    std::vector<int> sizes;
    bool dump_policy = false, dump_mdp = false;
};

void add_common_flags(CLI::App* sub, CliOverrides& o) {
    sub->add_option("--config", o.config_path, "TOML config file");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--fairness", o.fairness, "max-min | proportional | alpha:<float>");
    sub->add_option("--seeds", o.seeds, "seed list");
    sub->add_option("--delta", o.delta, "confidence level in (0,1)");
    sub->add_option("--fw-iters", o.fw_iters, "Frank-Wolfe iteration cap");
    sub->add_option("--fw-tol", o.fw_tol, "Frank-Wolfe duality gap tolerance");
    sub->add_option("--fw-step", o.step_rule, "diminishing | line-search");
    sub->add_option("--grid-step", o.grid_step, "oracle grid step");
    sub->add_option("--mdp", o.mdp_file, "JSON MDP instance replacing random generation");
    sub->add_option("--parallelism", o.parallelism, "worker threads across seeds");
    sub->add_flag("--dump-policy", o.dump_policy, "write solution policies as JSON");
    sub->add_flag("--dump-mdp", o.dump_mdp, "write per-seed MDP instances as JSON");
}

bool given(const CLI::App* sub, const std::string& name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt && opt->count() > 0;
}

fairmdp::ExperimentConfig build_config(const CLI::App* sub, const CliOverrides& o,
                                       fairmdp::ExperimentMode mode) {
    fairmdp::ExperimentConfig cfg;
    if (!o.config_path.empty()) cfg = fairmdp::load_experiment_config(o.config_path);
    cfg.mode = mode;
    if (given(sub, "--out")) cfg.output_dir = o.out;
    if (given(sub, "--fairness")) cfg.fairness = o.fairness;
    if (given(sub, "--seeds")) cfg.seeds = o.seeds;
    if (given(sub, "--delta")) cfg.delta = o.delta;
    if (given(sub, "--fw-iters")) cfg.solver.max_iterations = o.fw_iters;
    if (given(sub, "--fw-tol")) cfg.solver.duality_gap_tolerance = o.fw_tol;
    if (given(sub, "--fw-step")) {
        if (o.step_rule == "diminishing")
            cfg.solver.step_rule = fairmdp::StepRule::Diminishing;
        else if (o.step_rule == "line-search")
            cfg.solver.step_rule = fairmdp::StepRule::LineSearch;
        else
            throw std::invalid_argument("--fw-step must be diminishing|line-search");
    }
    if (given(sub, "--grid-step")) cfg.oracle_grid_step = o.grid_step;
    if (given(sub, "--mdp")) cfg.mdp_file = o.mdp_file;
    if (given(sub, "--parallelism")) cfg.parallelism = o.parallelism;
    if (given(sub, "--dump-policy")) cfg.dump_policy = true;
    if (given(sub, "--dump-mdp")) cfg.dump_mdp = true;
    if (given(sub, "--episodes")) cfg.episodes = o.episodes;
    if (given(sub, "--width-scale")) cfg.width_scale = o.width_scale;
    if (given(sub, "--data")) cfg.data_file = o.data;
    if (given(sub, "--sizes")) cfg.offline_sizes = o.sizes;
    if (given(sub, "--iters")) cfg.pg.iterations = o.iters;
    if (given(sub, "--batch")) cfg.pg.batch_size = o.batch;
    if (given(sub, "--step")) cfg.pg.step_size = o.step;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fair policies for multi-agent finite-horizon tabular MDPs"};
    app.require_subcommand(1);

    CliOverrides o;
    CLI::App* plan = app.add_subcommand("plan", "solve the fair program on a known model");
    CLI::App* online = app.add_subcommand("online", "episodic optimistic learning run");
    CLI::App* offline = app.add_subcommand("offline", "pessimistic learning from a fixed dataset");
    CLI::App* pg = app.add_subcommand("pg", "fair policy gradient with tabular softmax");
    CLI::App* oracle = app.add_subcommand("oracle", "grid-search ground truth");
    for (CLI::App* sub : {plan, online, offline, pg, oracle}) add_common_flags(sub, o);
    online->add_option("--episodes,-K", o.episodes, "number of episodes");
    online->add_option("--width-scale", o.width_scale, "confidence width multiplier (1.0 = analysis widths)");
    offline->add_option("--data", o.data, "JSON-lines dataset file");
    offline->add_option("--sizes", o.sizes, "dataset sizes to generate");
    pg->add_option("--iters", o.iters, "gradient iterations");
    pg->add_option("--batch", o.batch, "trajectories per iteration");
    pg->add_option("--step", o.step, "step size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    fairmdp::ExperimentMode mode = fairmdp::ExperimentMode::Plan;
    CLI::App* sub = plan;
    if (online->parsed()) mode = fairmdp::ExperimentMode::Online, sub = online;
    if (offline->parsed()) mode = fairmdp::ExperimentMode::Offline, sub = offline;
    if (pg->parsed()) mode = fairmdp::ExperimentMode::Pg, sub = pg;
    if (oracle->parsed()) mode = fairmdp::ExperimentMode::Oracle, sub = oracle;

    fairmdp::ExperimentConfig cfg;
    try {
        cfg = build_config(sub, o, mode);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    try {
        return fairmdp::run_experiment(cfg);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
