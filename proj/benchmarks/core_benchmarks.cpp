#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ising/instances.hpp"
#include "ising/problem.hpp"
#include "ising/solvers.hpp"

using namespace ising;

namespace {

IsingProblem make_lattice(int L) {
    return gen_planted_square({L, 42, 0}, PlantMode::Mattis);
}

void BM_Energy(benchmark::State& state) {
    auto p = make_lattice(static_cast<int>(state.range(0)));
    SpinConfig config;
    std::mt19937_64 rng(1);
    for (int l = 0; l < p.size(); ++l)
        config.spins.push_back((rng() & 1) ? 1 : -1);
    for (auto _ : state) benchmark::DoNotOptimize(energy(p, config));
    state.SetItemsProcessed(state.iterations() * p.couplings().size());
}
BENCHMARK(BM_Energy)->Arg(8)->Arg(16)->Arg(32);

void BM_FieldProduct(benchmark::State& state) {
    auto p = make_lattice(static_cast<int>(state.range(0)));
    std::vector<double> x(p.size()), out(p.size());
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (auto& v : x) v = uni(rng);
    for (auto _ : state) {
        p.field(x, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * p.couplings().size());
}
BENCHMARK(BM_FieldProduct)->Arg(8)->Arg(16)->Arg(32);

void BM_SolverRun(benchmark::State& state, SolverKind kind) {
    auto p = make_lattice(8);
    auto params = SolverParams::defaults(kind, p);
    params.num_steps = 100;
    // keep schedules consistent with the reduced budget
    params.pump.total_steps = params.num_steps;
    params.coupling.total_steps = params.num_steps;
    params.noise.total_steps = params.num_steps;
    params.activation.total_steps = params.num_steps;
    params.temperature.total_steps = params.num_steps;
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run(p, params, seed++));
    state.SetItemsProcessed(state.iterations() * params.num_steps * p.size());
}
BENCHMARK_CAPTURE(BM_SolverRun, sim_cim, SolverKind::SimCim);
BENCHMARK_CAPTURE(BM_SolverRun, sbm, SolverKind::Sbm);
BENCHMARK_CAPTURE(BM_SolverRun, sa, SolverKind::Sa);

}  // namespace

BENCHMARK_MAIN();
