#include <trajeval/geometry.hpp>
#include <trajeval/metrics.hpp>
#include <trajeval/objective.hpp>
#include <trajeval/optimizer.hpp>

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace trajeval;

namespace {

geometry::SafetyEllipse ellipse(double cx, double cy, double rx, double ry, double rot) {
    return {{cx, cy}, rx, ry, rot};
}

Trajectory straight(double x0, double y0, double heading, double speed, std::size_t n, double dt) {
    Trajectory t;
    t.dt = dt;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = speed * dt * static_cast<double>(i);
        t.samples.push_back({dt * static_cast<double>(i),
                             {x0 + s * std::cos(heading), y0 + s * std::sin(heading)},
                             speed,
                             heading});
    }
    return t;
}

objective::ManeuverProblem crossing_problem() {
    objective::ManeuverProblem p;
    p.path = ReferencePath({{0.0, 40.0}, {0.0, -60.0}});
    p.start = {0.0, 8.0};
    p.params.goal = {0.0, -30.0};
    p.horizon_s = 15.0;
    p.opponent = objective::Opponent{{}, straight(-35.0, 0.0, 0.0, 7.0, 151, 0.1)};
    return p;
}

void BM_MinGap(benchmark::State& state) {
    const auto a = ellipse(0.0, 0.0, 6.0, 2.0, 0.3);
    const auto b = ellipse(20.0, 5.0, 4.0, 1.5, -1.1);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(geometry::min_gap(a, b, n));
}
BENCHMARK(BM_MinGap)->Arg(64)->Arg(256);

void BM_BruteForceDistance(benchmark::State& state) {
    const auto a = ellipse(0.0, 0.0, 6.0, 2.0, 0.3);
    const auto b = ellipse(20.0, 5.0, 4.0, 1.5, -1.1);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(geometry::brute_force_distance(a, b, n));
}
BENCHMARK(BM_BruteForceDistance)->Arg(64);

void BM_OverlapArea(benchmark::State& state) {
    const auto a = ellipse(0.0, 0.0, 6.0, 2.0, 0.3);
    const auto b = ellipse(3.0, 1.0, 4.0, 1.5, -1.1);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(geometry::overlap_area(a, b, n));
}
BENCHMARK(BM_OverlapArea)->Arg(64)->Arg(128)->Arg(512);

void BM_InteractionSeries(benchmark::State& state) {
    const auto ego = straight(0.0, 40.0, -std::numbers::pi / 2, 8.0, 151, 0.1);
    const auto opp = straight(-35.0, 0.0, 0.0, 7.0, 151, 0.1);
    const geometry::VehicleFootprint fp;
    const geometry::SafetyParams sp;
    for (auto _ : state) benchmark::DoNotOptimize(metrics::interaction_series(ego, opp, fp, fp, sp));
}
BENCHMARK(BM_InteractionSeries);

void BM_ObjectiveQ(benchmark::State& state) {
    const auto p = crossing_problem();
    const auto cand = objective::ManeuverCandidate::uniform({-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 1.0, 0.0, 0.0},
                                                            p.horizon_s);
    for (auto _ : state) benchmark::DoNotOptimize(objective::objective_q(cand, p));
}
BENCHMARK(BM_ObjectiveQ);

void BM_PsoSphere(benchmark::State& state) {
    const std::vector<optimizer::Bound> bounds(10, optimizer::Bound{-5.0, 5.0});
    optimizer::PsoConfig cfg;
    cfg.swarm_size = 30;
    cfg.iterations = static_cast<std::size_t>(state.range(0));
    auto sphere = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    };
    for (auto _ : state) benchmark::DoNotOptimize(optimizer::pso_minimize(sphere, bounds, cfg));
}
BENCHMARK(BM_PsoSphere)->Arg(50)->Arg(200);

void BM_OptimizeManeuver(benchmark::State& state) {
    const auto p = crossing_problem();
    optimizer::PsoConfig cfg;
    cfg.swarm_size = 20;
    cfg.iterations = 10;
    for (auto _ : state) benchmark::DoNotOptimize(optimizer::optimize_maneuver(p, cfg));
}
BENCHMARK(BM_OptimizeManeuver)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
