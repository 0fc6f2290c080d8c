#include "fairmdp/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "fairmdp/csv.hpp"
#include "fairmdp/occupancy.hpp"
#include "fairmdp/offline.hpp"
#include "fairmdp/online.hpp"
#include "fairmdp/oracle.hpp"
#include "fairmdp/serialize.hpp"

namespace fairmdp {

namespace fs = std::filesystem;
using nlohmann::json;

ExperimentMode parse_experiment_mode(const std::string& text) {
    if (text == "plan") return ExperimentMode::Plan;
    if (text == "online") return ExperimentMode::Online;
    if (text == "offline") return ExperimentMode::Offline;
    if (text == "pg") return ExperimentMode::Pg;
    if (text == "oracle") return ExperimentMode::Oracle;
    throw std::invalid_argument("unknown mode '" + text +
                                "' (expected plan|online|offline|pg|oracle)");
}

std::string experiment_mode_name(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::Plan: return "plan";
        case ExperimentMode::Online: return "online";
        case ExperimentMode::Offline: return "offline";
        case ExperimentMode::Pg: return "pg";
        case ExperimentMode::Oracle: return "oracle";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    FairnessObjective::parse(fairness, mdp.epsilon_floor);  // throws on bad spec
    if (seeds.empty()) throw std::invalid_argument("config: seeds must be nonempty");
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("config: delta not in (0,1)");
    if (oracle_grid_step <= 0.0 || oracle_grid_step > 0.5)
        throw std::invalid_argument("config: oracle grid step must be in (0, 0.5]");
    if (mode == ExperimentMode::Online && episodes < 1)
        throw std::invalid_argument("config: online episodes must be >= 1");
    if (mode == ExperimentMode::Offline) {
        if (offline_sizes.empty() && data_file.empty())
            throw std::invalid_argument("config: offline needs sizes or a data file");
        for (int n : offline_sizes)
            if (n < 1) throw std::invalid_argument("config: offline sizes must be >= 1");
    }
    if (mode == ExperimentMode::Pg &&
        (pg.iterations < 1 || pg.batch_size < 1 || pg.step_size < 0.0))
        throw std::invalid_argument("config: bad pg settings");
    if (width_scale <= 0.0) throw std::invalid_argument("config: width_scale must be > 0");
    if (output_dir.empty()) throw std::invalid_argument("config: output path empty");
}

namespace {

const std::set<std::string> kKnownKeys = {
    "mode", "output", "seeds", "parallelism", "fairness", "delta", "dump_policy", "dump_mdp",
    "mdp.num_agents", "mdp.num_states", "mdp.num_actions", "mdp.horizon", "mdp.reward_low",
    "mdp.reward_high", "mdp.noise_half_width", "mdp.epsilon_floor", "mdp.file",
    "online.episodes", "online.width_scale",
    "offline.sizes", "offline.data_file",
    "pg.iterations", "pg.batch", "pg.step",
    "solver.max_iterations", "solver.tolerance", "solver.step_rule", "solver.softmin_schedule",
    "oracle.grid_step",
};

StepRule parse_step_rule(const std::string& text) {
    if (text == "diminishing") return StepRule::Diminishing;
    if (text == "line-search") return StepRule::LineSearch;
    throw std::invalid_argument("config: step_rule must be diminishing|line-search");
}

SoftminSchedule parse_schedule(const std::string& text) {
    if (text == "fixed") return SoftminSchedule::Fixed;
    if (text == "annealed") return SoftminSchedule::Annealed;
    throw std::invalid_argument("config: softmin_schedule must be fixed|annealed");
}

}  // namespace

ExperimentConfig experiment_config_from_toml(const TomlTable& t) {
    for (const auto& [key, value] : t.values())
        if (!kKnownKeys.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
    ExperimentConfig cfg;
    if (t.contains("mode")) cfg.mode = parse_experiment_mode(t.get_string("mode"));
    if (t.contains("output")) cfg.output_dir = t.get_string("output");
    if (t.contains("seeds")) {
        cfg.seeds.clear();
        for (long long s : t.get_int_array("seeds")) {
            if (s < 0) throw std::invalid_argument("config: seeds must be >= 0");
            cfg.seeds.push_back(static_cast<std::uint64_t>(s));
        }
    }
    if (t.contains("parallelism")) cfg.parallelism = static_cast<int>(t.get_int("parallelism"));
    if (t.contains("fairness")) cfg.fairness = t.get_string("fairness");
    if (t.contains("delta")) cfg.delta = t.get_double("delta");
    if (t.contains("dump_policy")) cfg.dump_policy = t.get_bool("dump_policy");
    if (t.contains("dump_mdp")) cfg.dump_mdp = t.get_bool("dump_mdp");
    if (t.contains("mdp.num_agents")) cfg.mdp.num_agents = static_cast<int>(t.get_int("mdp.num_agents"));
    if (t.contains("mdp.num_states")) cfg.mdp.num_states = static_cast<int>(t.get_int("mdp.num_states"));
    if (t.contains("mdp.num_actions")) cfg.mdp.num_actions = static_cast<int>(t.get_int("mdp.num_actions"));
    if (t.contains("mdp.horizon")) cfg.mdp.horizon = static_cast<int>(t.get_int("mdp.horizon"));
    if (t.contains("mdp.reward_low")) cfg.mdp.reward_low = t.get_double("mdp.reward_low");
    if (t.contains("mdp.reward_high")) cfg.mdp.reward_high = t.get_double("mdp.reward_high");
    if (t.contains("mdp.noise_half_width"))
        cfg.mdp.noise_half_width = t.get_double("mdp.noise_half_width");
    if (t.contains("mdp.epsilon_floor")) cfg.mdp.epsilon_floor = t.get_double("mdp.epsilon_floor");
    if (t.contains("mdp.file")) cfg.mdp_file = t.get_string("mdp.file");
    if (t.contains("online.episodes")) cfg.episodes = static_cast<int>(t.get_int("online.episodes"));
    if (t.contains("online.width_scale")) cfg.width_scale = t.get_double("online.width_scale");
    if (t.contains("offline.sizes")) {
        cfg.offline_sizes.clear();
        for (long long n : t.get_int_array("offline.sizes"))
            cfg.offline_sizes.push_back(static_cast<int>(n));
    }
    if (t.contains("offline.data_file")) cfg.data_file = t.get_string("offline.data_file");
    if (t.contains("pg.iterations")) cfg.pg.iterations = static_cast<int>(t.get_int("pg.iterations"));
    if (t.contains("pg.batch")) cfg.pg.batch_size = static_cast<int>(t.get_int("pg.batch"));
    if (t.contains("pg.step")) cfg.pg.step_size = t.get_double("pg.step");
    if (t.contains("solver.max_iterations"))
        cfg.solver.max_iterations = static_cast<int>(t.get_int("solver.max_iterations"));
    if (t.contains("solver.tolerance"))
        cfg.solver.duality_gap_tolerance = t.get_double("solver.tolerance");
    if (t.contains("solver.step_rule"))
        cfg.solver.step_rule = parse_step_rule(t.get_string("solver.step_rule"));
    if (t.contains("solver.softmin_schedule"))
        cfg.solver.softmin_schedule = parse_schedule(t.get_string("solver.softmin_schedule"));
    if (t.contains("oracle.grid_step")) cfg.oracle_grid_step = t.get_double("oracle.grid_step");
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    return experiment_config_from_toml(TomlTable::parse_file(path));
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
    json j;
    j["mode"] = experiment_mode_name(cfg.mode);
    j["output"] = cfg.output_dir;
    j["seeds"] = cfg.seeds;
    j["parallelism"] = cfg.parallelism;
    j["fairness"] = cfg.fairness;
    j["delta"] = cfg.delta;
    j["dump_policy"] = cfg.dump_policy;
    j["dump_mdp"] = cfg.dump_mdp;
    j["mdp"] = {{"num_agents", cfg.mdp.num_agents},
                {"num_states", cfg.mdp.num_states},
                {"num_actions", cfg.mdp.num_actions},
                {"horizon", cfg.mdp.horizon},
                {"reward_low", cfg.mdp.reward_low},
                {"reward_high", cfg.mdp.reward_high},
                {"noise_half_width", cfg.mdp.noise_half_width},
                {"epsilon_floor", cfg.mdp.epsilon_floor},
                {"file", cfg.mdp_file}};
    j["online"] = {{"episodes", cfg.episodes}, {"width_scale", cfg.width_scale}};
    j["offline"] = {{"sizes", cfg.offline_sizes}, {"data_file", cfg.data_file}};
    j["pg"] = {{"iterations", cfg.pg.iterations},
               {"batch", cfg.pg.batch_size},
               {"step", cfg.pg.step_size}};
    j["solver"] = {{"max_iterations", cfg.solver.max_iterations},
                   {"tolerance", cfg.solver.duality_gap_tolerance},
                   {"step_rule", cfg.solver.step_rule == StepRule::LineSearch ? "line-search"
                                                                              : "diminishing"},
                   {"softmin_schedule",
                    cfg.solver.softmin_schedule == SoftminSchedule::Annealed ? "annealed"
                                                                             : "fixed"}};
    j["oracle"] = {{"grid_step", cfg.oracle_grid_step}};
    return j.dump(2);
}

namespace {

struct SeedJobResult {
    std::string csv_text;
    std::vector<double> index;
    std::vector<std::vector<double>> metrics;  // [metric][row]
    std::vector<std::pair<std::string, std::string>> extra_files;
    std::vector<std::string> warnings;
};

struct ModeSchema {
    std::string index_name;
    std::vector<std::string> metric_names;
};

ModeSchema mode_schema(ExperimentMode mode) {
    switch (mode) {
        case ExperimentMode::Plan: return {"row", {"value"}};
        case ExperimentMode::Online: return {"k", {"fair_value", "regret"}};
        case ExperimentMode::Offline: return {"episodes", {"pessimistic_value", "subopt"}};
        case ExperimentMode::Pg: return {"iteration", {"fair_value"}};
        case ExperimentMode::Oracle: return {"row", {"value"}};
    }
    return {"row", {}};
}

TabularMdp instance_for_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
    if (!cfg.mdp_file.empty()) {
        std::ifstream in(cfg.mdp_file);
        if (!in) throw std::runtime_error("cannot open mdp file " + cfg.mdp_file);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return mdp_from_json(text);
    }
    RandomMdpConfig mdp_cfg = cfg.mdp;
    mdp_cfg.seed = seed;
    return generate_random_mdp(mdp_cfg);
}

SeedJobResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
    SeedJobResult out;
    TabularMdp env = instance_for_seed(cfg, seed);
    FairnessObjective f = FairnessObjective::parse(cfg.fairness, env.epsilon_floor);
    if (cfg.dump_mdp) out.extra_files.emplace_back("mdp.json", mdp_to_json(env));

    switch (cfg.mode) {
        case ExperimentMode::Plan: {
            PlanResult plan =
                solve_fair_plan(env.reward, env.transition, env.initial_distribution, f, cfg.solver);
            CsvWriter csv({"value", "gap", "iterations", "converged"});
            csv.add_row({CsvWriter::format(plan.value), CsvWriter::format(plan.gap),
                         CsvWriter::format(plan.iterations),
                         plan.converged ? "1" : "0"});
            out.csv_text = csv.text();
            out.index = {0.0};
            out.metrics = {{plan.value}};
            if (cfg.dump_policy) {
                out.extra_files.emplace_back("policy.json",
                                             policy_to_json(policy_from_q(plan.q)));
                out.extra_files.emplace_back("occupancy.json", occupancy_q_to_json(plan.q));
            }
            break;
        }
        case ExperimentMode::Online: {
            OnlineConfig run_cfg{cfg.episodes, cfg.delta, cfg.width_scale, cfg.solver};
            RunResult run = run_online(env, f, run_cfg, seed);
            if (run.solver_warnings > 0)
                out.warnings.push_back("solver hit max_iterations in " +
                                       std::to_string(run.solver_warnings) + " of " +
                                       std::to_string(cfg.episodes) + " episodes");
            OracleResult oracle = brute_force_oracle(env, f, cfg.oracle_grid_step);
            std::vector<double> regret = regret_curve(run, oracle.value);
            CsvWriter csv({"k", "fair_value", "optimal_value", "regret", "optimistic_objective",
                           "solver_gap"});
            for (int k = 0; k < cfg.episodes; ++k)
                csv.add_row({CsvWriter::format(k + 1), CsvWriter::format(run.fair_values[k]),
                             CsvWriter::format(oracle.value), CsvWriter::format(regret[k]),
                             CsvWriter::format(run.optimistic_objectives[k]),
                             CsvWriter::format(run.solver_gaps[k])});
            out.csv_text = csv.text();
            out.index.resize(cfg.episodes);
            for (int k = 0; k < cfg.episodes; ++k) out.index[k] = k + 1;
            out.metrics = {run.fair_values, regret};
            if (cfg.dump_policy)
                out.extra_files.emplace_back("policy.json",
                                             policy_to_json(run.policies.back()));
            break;
        }
        case ExperimentMode::Offline: {
            std::optional<OracleResult> oracle;
            bool have_truth = cfg.data_file.empty();
            if (have_truth) oracle = brute_force_oracle(env, f, cfg.oracle_grid_step);
            CsvWriter csv({"episodes", "pessimistic_value", "true_fair_value", "oracle_value",
                           "subopt", "assumption_holds"});
            PolicyTable behavior =
                PolicyTable::uniform(env.horizon, env.num_states, env.num_actions);
            std::string policy_json;
            std::vector<int> sizes = cfg.offline_sizes;
            Dataset file_data;
            if (!cfg.data_file.empty()) {
                file_data = load_dataset_jsonl(cfg.data_file);
                sizes = {static_cast<int>(file_data.episodes.size())};
            }
            Dataset generated;
            for (int size : sizes) {
                if (cfg.data_file.empty())
                    generated = collect_dataset(env, behavior, size, seed, "uniform");
                const Dataset& data = cfg.data_file.empty() ? generated : file_data;
                PessimisticModel model =
                    build_pessimistic_model(data, env.dims(), cfg.delta, env.epsilon_floor);
                OfflineResult sol =
                    solve_offline(model, f, env.initial_distribution, cfg.solver);
                if (!sol.assumption_holds)
                    out.warnings.push_back(
                        "episodes=" + std::to_string(size) +
                        ": pessimistic agent value below the epsilon floor "
                        "(the suboptimality guarantee is not certified for this run; value reported anyway)");
                double true_value = std::numeric_limits<double>::quiet_NaN();
                double subopt = std::numeric_limits<double>::quiet_NaN();
                double oracle_value = std::numeric_limits<double>::quiet_NaN();
                if (have_truth) {
                    true_value = evaluate(f, exact_agent_values(env, sol.policy));
                    oracle_value = oracle->value;
                    subopt = oracle_value - true_value;
                }
                csv.add_row({CsvWriter::format(size), CsvWriter::format(sol.pessimistic_value),
                             CsvWriter::format(true_value), CsvWriter::format(oracle_value),
                             CsvWriter::format(subopt), sol.assumption_holds ? "1" : "0"});
                out.index.push_back(size);
                if (out.metrics.empty()) out.metrics.resize(2);
                out.metrics[0].push_back(sol.pessimistic_value);
                out.metrics[1].push_back(subopt);
                policy_json = policy_to_json(sol.policy);
            }
            out.csv_text = csv.text();
            if (cfg.dump_policy) out.extra_files.emplace_back("policy.json", policy_json);
            break;
        }
        case ExperimentMode::Pg: {
            PgConfig pg_cfg = cfg.pg;
            pg_cfg.seed = seed;
            PgResult run = run_policy_gradient(env, f, pg_cfg);
            std::vector<std::string> header = {"iteration", "fair_value"};
            for (int i = 0; i < env.num_agents; ++i) header.push_back("v" + std::to_string(i + 1));
            CsvWriter csv(header);
            for (int l = 0; l < pg_cfg.iterations; ++l) {
                std::vector<std::string> row = {CsvWriter::format(l + 1),
                                                CsvWriter::format(run.fair_values[l])};
                for (double v : run.agent_values[l]) row.push_back(CsvWriter::format(v));
                csv.add_row(row);
            }
            out.csv_text = csv.text();
            out.index.resize(pg_cfg.iterations);
            for (int l = 0; l < pg_cfg.iterations; ++l) out.index[l] = l + 1;
            out.metrics = {run.fair_values};
            if (cfg.dump_policy)
                out.extra_files.emplace_back("policy.json",
                                             policy_to_json(policy_from_logits(run.final_params)));
            break;
        }
        case ExperimentMode::Oracle: {
            OracleResult oracle = brute_force_oracle(env, f, cfg.oracle_grid_step);
            CsvWriter csv({"value", "error_bound", "grid_step", "nodes"});
            csv.add_row({CsvWriter::format(oracle.value), CsvWriter::format(oracle.error_bound),
                         CsvWriter::format(cfg.oracle_grid_step),
                         CsvWriter::format(oracle.nodes)});
            out.csv_text = csv.text();
            out.index = {0.0};
            out.metrics = {{oracle.value}};
            if (cfg.dump_policy)
                out.extra_files.emplace_back("policy.json", policy_to_json(oracle.policy));
            break;
        }
    }
    return out;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    auto start = std::chrono::steady_clock::now();
    fs::create_directories(cfg.output_dir);

    std::size_t n = cfg.seeds.size();
    std::vector<std::optional<SeedJobResult>> results(n);
    std::vector<std::string> errors(n);
    std::atomic<std::size_t> next{0};
    int workers = cfg.parallelism > 0
                      ? cfg.parallelism
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min<int>(workers, static_cast<int>(n));
    auto work = [&]() {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                results[i] = run_seed(cfg, cfg.seeds[i]);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }

    // per-seed files and warnings in seed order
    for (std::size_t i = 0; i < n; ++i) {
        if (!results[i]) continue;
        for (const std::string& w : results[i]->warnings)
            std::fprintf(stderr, "warning: seed %llu: %s\n",
                         static_cast<unsigned long long>(cfg.seeds[i]), w.c_str());
        std::string stem = "seed-" + std::to_string(cfg.seeds[i]);
        std::ofstream out(fs::path(cfg.output_dir) / (stem + ".csv"), std::ios::binary);
        out << results[i]->csv_text;
        for (const auto& [name, content] : results[i]->extra_files) {
            std::ofstream extra(fs::path(cfg.output_dir) / (stem + "." + name), std::ios::binary);
            extra << content;
        }
    }

    // aggregate over the seeds that completed
    ModeSchema schema = mode_schema(cfg.mode);
    std::vector<const SeedJobResult*> ok;
    for (const auto& r : results)
        if (r) ok.push_back(&*r);
    if (!ok.empty()) {
        std::vector<std::string> header = {schema.index_name};
        for (const std::string& m : schema.metric_names)
            for (const char* stat : {"_mean", "_min", "_max"}) header.push_back(m + stat);
        CsvWriter csv(header);
        std::size_t rows = ok[0]->index.size();
        for (std::size_t r = 0; r < rows; ++r) {
            std::vector<std::string> row = {CsvWriter::format(ok[0]->index[r])};
            for (std::size_t m = 0; m < schema.metric_names.size(); ++m) {
                double mean = 0.0, lo = ok[0]->metrics[m][r], hi = lo;
                for (const SeedJobResult* res : ok) {
                    double x = res->metrics[m][r];
                    mean += x;
                    lo = std::min(lo, x);
                    hi = std::max(hi, x);
                }
                mean /= static_cast<double>(ok.size());
                row.push_back(CsvWriter::format(mean));
                row.push_back(CsvWriter::format(lo));
                row.push_back(CsvWriter::format(hi));
            }
            csv.add_row(row);
        }
        csv.write(fs::path(cfg.output_dir) / "aggregate.csv");
    }

    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    json manifest;
    manifest["config"] = json::parse(experiment_config_to_json(cfg));
    manifest["version"] = "0.1.0";
    manifest["wall_time_ms"] = elapsed;
    json failures = json::array();
    for (std::size_t i = 0; i < n; ++i)
        if (!errors[i].empty())
            failures.push_back({{"seed", cfg.seeds[i]}, {"error", errors[i]}});
    manifest["failures"] = failures;
    std::ofstream mf(fs::path(cfg.output_dir) / "manifest.json", std::ios::binary);
    mf << manifest.dump(2) << "\n";

    return failures.empty() ? 0 : 3;
}

}  // namespace fairmdp
