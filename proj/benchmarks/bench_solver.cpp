#include <presist/bounds.hpp>
#include <presist/graph.hpp>
#include <presist/isoperimetry.hpp>
#include <presist/penergy.hpp>
#include <presist/walks.hpp>

#include <benchmark/benchmark.h>

using namespace presist;

namespace {

void BM_BuildBall(benchmark::State &state) {
    const int r = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_ball(GraphSpec::lattice(3, 0), r));
}
BENCHMARK(BM_BuildBall)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Resistance(benchmark::State &state) {
    const int r = static_cast<int>(state.range(0));
    const double p = static_cast<double>(state.range(1)) / 2.0;
    const auto ball = build_ball(GraphSpec::lattice(2, 0), r + 1);
    const auto prob = dirichlet_problem(ball, r, DirichletMode::Sphere);
    for (auto _ : state) benchmark::DoNotOptimize(p_resistance(prob, p).resistance);
    state.counters["vertices"] = static_cast<double>(prob.graph.size());
}
BENCHMARK(BM_Resistance)
    ->ArgsProduct({{8, 16, 32}, {3, 4, 6, 8}})
    ->ArgNames({"r", "2p"})
    ->Unit(benchmark::kMillisecond);

void BM_DirectVsCg(benchmark::State &state) {
    const auto ball = build_ball(GraphSpec::lattice(3, 0), 11);
    const auto prob = dirichlet_problem(ball, 10, DirichletMode::Sphere);
    SolverConfig cfg;
    cfg.direct_limit = state.range(0) ? 0 : prob.free_count() + 1;
    for (auto _ : state) benchmark::DoNotOptimize(p_resistance(prob, 2.0, cfg).resistance);
}
BENCHMARK(BM_DirectVsCg)->Arg(0)->Arg(1)->ArgNames({"cg"})->Unit(benchmark::kMillisecond);

void BM_EscapeCoupled(benchmark::State &state) {
    const auto ball = build_ball(GraphSpec::lattice(3, 0), 8);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_escape_coupled(ball, 8, static_cast<std::uint64_t>(state.range(0)), 1));
}
BENCHMARK(BM_EscapeCoupled)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ExactProfile(benchmark::State &state) {
    const auto g = build_cayley_graph(GraphSpec::chords(state.range(0), 3));
    for (auto _ : state) benchmark::DoNotOptimize(exact_profile(g, ProfileMode::AllSets));
}
BENCHMARK(BM_ExactProfile)->Arg(10)->Arg(12)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_NashWilliams(benchmark::State &state) {
    const auto ball = build_ball(GraphSpec::lattice(2, 0), 64);
    for (auto _ : state) benchmark::DoNotOptimize(nash_williams_bound(sphere_cutsets(ball, 64), 2.5));
}
BENCHMARK(BM_NashWilliams)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
