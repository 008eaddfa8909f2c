// Serial references against the OpenMP kernels. Run with
//   OMP_NUM_THREADS=<k> ./build/bench/pod_bench
#include <benchmark/benchmark.h>

#include "pod/engine.hpp"
#include "pod/equilibrium.hpp"
#include "pod/watchtower.hpp"

using namespace pod;

namespace {

EconomicParams params_for(int n) {
    EconomicParams p;
    p.n = n;
    p.theta = 0.9;
    p.cost_execute = 1;
    p.cost_validate = 100000;
    p.reward_bounty = 1.01 / phi(0.9, 1.0 / n);
    p.reward_challenge = 2;
    p.reward_whistleblower = 200000;
    p.stakes = equal_stakes(n);
    p.alpha_0 = 1.0 / n;
    p.total_stake = n * (100000 + 2.0 * n);
    p.collusion_deposit = 30000;
    p.collusion_rent = 0.5;
    return p;
}

void nash_parallel(benchmark::State& st) {
    auto g = make_game({GameKind::PoDWithCollusionAndWhistleblower, params_for(static_cast<int>(st.range(0)))});
    for (auto _ : st) benchmark::DoNotOptimize(find_pure_nash(*g));
    st.counters["profiles"] = static_cast<double>(profile_count(*g));
}

void nash_serial(benchmark::State& st) {
    auto g = make_game({GameKind::PoDWithCollusionAndWhistleblower, params_for(static_cast<int>(st.range(0)))});
    for (auto _ : st) benchmark::DoNotOptimize(find_pure_nash_serial(*g));
    st.counters["profiles"] = static_cast<double>(profile_count(*g));
}

void dominance_parallel(benchmark::State& st) {
    auto g = make_game({GameKind::PoD, params_for(static_cast<int>(st.range(0)))});
    for (auto _ : st) benchmark::DoNotOptimize(is_dominant(*g, Action::Diligent, 0));
}

void dominance_serial(benchmark::State& st) {
    auto g = make_game({GameKind::PoD, params_for(static_cast<int>(st.range(0)))});
    for (auto _ : st) benchmark::DoNotOptimize(is_dominant_serial(*g, Action::Diligent, 0));
}

void simulate(benchmark::State& st, bool serial) {
    Scenario s = load_scenario(std::string(POD_SCENARIO_DIR) + "/baseline.ini");
    s.epochs = 50;
    s.params.n = static_cast<std::uint32_t>(st.range(0));
    s.stakes.assign(s.params.n, 1.0 / s.params.n);
    s.params.alpha_0 = 1.0 / s.params.n - 1e-9;
    s.strategies.assign(s.params.n, Strategy::Diligent);
    s.workload.txs_per_batch = 64;
    SimulationOptions o;
    o.serial = serial;
    for (auto _ : st) benchmark::DoNotOptimize(run_simulation(s, o));
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * s.epochs));
}

void simulate_parallel(benchmark::State& st) { simulate(st, false); }
void simulate_serial(benchmark::State& st) { simulate(st, true); }

}  // namespace

BENCHMARK(nash_serial)->DenseRange(6, 8, 1)->Unit(benchmark::kMillisecond);
BENCHMARK(nash_parallel)->DenseRange(6, 8, 1)->Unit(benchmark::kMillisecond);
BENCHMARK(dominance_serial)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(dominance_parallel)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(simulate_serial)->Arg(10)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(simulate_parallel)->Arg(10)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
