#include <benchmark/benchmark.h>

#include "vll/euler_reference.hpp"
#include "vll/field_core.hpp"
#include "vll/ns_solver.hpp"
#include "vll/relative_energy.hpp"

using namespace vll;

namespace {

struct Setup {
    Grid grid;
    FluidState state;
    FluidParams params;

    explicit Setup(std::size_t cells) : grid(make_grid(1.0, cells)) {
        const InitialDatum d = well_prepared_init(grid, WellPreparedData{});
        state = make_state(0.0, d.rho, d.u);
        params.rho_floor = default_floor(d.rho);
    }
};

void BM_Rhs(benchmark::State& st) {
    const Setup s(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(rhs(s.grid, s.state, s.params));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Rhs)->RangeMultiplier(4)->Range(256, 16384);

void BM_Step(benchmark::State& st) {
    const Setup s(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(step(s.grid, s.state, s.params, 0.5));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Step)->RangeMultiplier(4)->Range(256, 16384);

void BM_Gradient(benchmark::State& st) {
    const Setup s(static_cast<std::size_t>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(gradient(s.grid, s.state.rho));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}
BENCHMARK(BM_Gradient)->RangeMultiplier(4)->Range(256, 16384);

void BM_ReferenceSample(benchmark::State& st) {
    const Grid coarse = make_grid(1.0, 256);
    const EulerReference ref = solve_reference(coarse, WellPreparedData{}, EosParams{}, 0.05, 4, {0.01, 0.5});
    for (auto _ : st) benchmark::DoNotOptimize(sample(ref, coarse, 0.025));
}
BENCHMARK(BM_ReferenceSample);

void BM_RemainderTerms(benchmark::State& st) {
    const std::size_t cells = static_cast<std::size_t>(st.range(0));
    const Grid grid = make_grid(1.0, cells);
    const EulerReference ref = solve_reference(grid, WellPreparedData{}, EosParams{}, 0.05, 2, {0.01, 0.5});
    const Setup s(cells);
    FluidParams params = s.params;
    params.r1 = 0.01;
    const Trajectory traj = simulate(grid, s.state, params, 0.05, 0.01);
    const auto refs = sample_series(traj, ref);
    const auto comps = comparator_series(grid, refs, params.epsilon, ComparatorOptions{});
    for (auto _ : st) benchmark::DoNotOptimize(remainder_terms(traj, refs, comps, params));
}
BENCHMARK(BM_RemainderTerms)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
