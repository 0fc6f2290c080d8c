#include <benchmark/benchmark.h>

#include "fairmdp/mdp.hpp"
#include "fairmdp/occupancy.hpp"
#include "fairmdp/online.hpp"
#include "fairmdp/oracle.hpp"
#include "fairmdp/solver.hpp"

namespace {

using namespace fairmdp;

TabularMdp bench_instance(std::uint64_t seed) {
    RandomMdpConfig cfg;
    cfg.num_agents = 2;
    cfg.num_states = 2;
    cfg.num_actions = 2;
    cfg.horizon = 3;
    cfg.reward_low = 0.15;
    cfg.reward_high = 0.95;
    cfg.noise_half_width = 0.05;
    cfg.seed = seed;
    return generate_random_mdp(cfg);
}

FairnessObjective bench_fairness(int kind) {
    switch (kind) {
        case 0: return FairnessObjective::max_min();
        case 1: return FairnessObjective::proportional();
        default: return FairnessObjective::alpha_fair(2.0);
    }
}

void BM_QFromPolicy(benchmark::State& state) {
    TabularMdp mdp = bench_instance(1);
    PolicyTable pi = PolicyTable::uniform(3, 2, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(q_from_policy(pi, mdp.transition, mdp.initial_distribution));
}
BENCHMARK(BM_QFromPolicy);

void BM_SampleEpisode(benchmark::State& state) {
    TabularMdp mdp = bench_instance(1);
    PolicyTable pi = PolicyTable::uniform(3, 2, 2);
    RandomStream rng(7);
    for (auto _ : state) benchmark::DoNotOptimize(sample_episode(mdp, pi, rng));
}
BENCHMARK(BM_SampleEpisode);

void BM_LinearOracle(benchmark::State& state) {
    TabularMdp mdp = bench_instance(1);
    Array3 c(3, 2, 2);
    for (std::size_t i = 0; i < c.data.size(); ++i) c.data[i] = 0.1 * static_cast<double>(i);
    for (auto _ : state)
        benchmark::DoNotOptimize(linear_oracle_q(c, mdp.transition, mdp.initial_distribution));
}
BENCHMARK(BM_LinearOracle);

void BM_SolveFairPlan(benchmark::State& state) {
    TabularMdp mdp = bench_instance(2);
    FairnessObjective f = bench_fairness(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            solve_fair_plan(mdp.reward, mdp.transition, mdp.initial_distribution, f, {}));
}
BENCHMARK(BM_SolveFairPlan)->Arg(0)->Arg(1)->Arg(2);

void BM_SolveFairExtended(benchmark::State& state) {
    TabularMdp mdp = bench_instance(3);
    OnlineState online(mdp.dims(), 600, 0.1);
    PolicyTable pi = PolicyTable::uniform(3, 2, 2);
    for (int e = 0; e < 50; ++e) {
        RandomStream rng = RandomStream::derive(11, {static_cast<std::uint64_t>(e)});
        online.update(sample_episode(mdp, pi, rng));
    }
    ConfidenceModel model = build_confidence_model(online, 0.2);
    FairnessObjective f = bench_fairness(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_fair_extended(model, f, mdp.initial_distribution, {}));
}
BENCHMARK(BM_SolveFairExtended)->Arg(0)->Arg(1)->Arg(2);

void BM_BruteForceOracle(benchmark::State& state) {
    TabularMdp mdp = bench_instance(4);
    FairnessObjective f = bench_fairness(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_oracle(mdp, f, 0.05));
}
BENCHMARK(BM_BruteForceOracle)->Arg(0)->Arg(1)->Arg(2);

}  // namespace

BENCHMARK_MAIN();
