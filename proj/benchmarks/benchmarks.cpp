#include "qform/analysis.hpp"
#include "qform/event_solver.hpp"
#include "qform/hull.hpp"
#include "qform/oracle.hpp"

#include <benchmark/benchmark.h>

using namespace qform;

namespace {

const FormationSpec kSix = FormationSpec::uniform(6, 1, {6, 5, 4, 3, 2});
const FormationSpec kThree = FormationSpec::uniform(3, 1, {1, 1});

void BM_simulate_six_agent(benchmark::State& state) {
    const RatVec z0 = x_to_z({0, Rat(1, 2), 1, 2, 4, 5});
    for (auto _ : state) {
        const Trajectory traj = simulate_one(z0, kSix);
        benchmark::DoNotOptimize(traj.t_end);
    }
}
BENCHMARK(BM_simulate_six_agent);

void BM_simulate_enumerate_axis(benchmark::State& state) {
    SolverOptions opts;
    opts.policy = BranchPolicy::Enumerate;
    for (auto _ : state) {
        const auto trajectories = simulate({0, 2}, kThree, opts);
        benchmark::DoNotOptimize(trajectories.size());
    }
}
BENCHMARK(BM_simulate_enumerate_axis);

void BM_contains_zero(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    RatVec k(n - 1), d(n - 1, 1);
    for (int i = 0; i < n - 1; ++i) k[i] = n - i;
    const FormationSpec spec{n, d, k};
    const RatVec z(n - 1, 1);  // every coordinate active
    for (auto _ : state) {
        const auto zm = contains_zero(hull_at(z, spec));
        benchmark::DoNotOptimize(zm.contains);
    }
}
BENCHMARK(BM_contains_zero)->Arg(3)->Arg(6)->Arg(12);

void BM_euler_six_agent(benchmark::State& state) {
    const auto z0 = to_doubles(x_to_z({0, Rat(1, 2), 1, 2, 4, 5}));
    for (auto _ : state) {
        const auto s = simulate_euler(z0, kSix, 1e-3, 1.0);
        benchmark::DoNotOptimize(s.V.back());
    }
}
BENCHMARK(BM_euler_six_agent);

void BM_lyapunov_exact(benchmark::State& state) {
    const RatVec z{Rat(22, 7), Rat(-13, 9), Rat(355, 113), Rat(1, 3), Rat(-8, 5)};
    const FormationSpec spec = FormationSpec::uniform(6, 1, {6, 5, 4, 3, 2});
    for (auto _ : state) {
        const Rat v = lyapunov(z, spec);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_lyapunov_exact);

}  // namespace

BENCHMARK_MAIN();
