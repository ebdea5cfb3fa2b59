#pragma once
/**
 * @file  optimizer.hpp
 * @brief Seeded global-best particle swarm over box-bounded vectors.
 *
 * Random streams: particle i draws from its own std::mt19937_64, seeded with
 * splitmix64(seed + splitmix64(i)). Initialization draws one uniform per
 * dimension; every iteration draws (r1, r2) per dimension in dimension order.
 * Uniforms are the top 53 bits of each draw scaled by 2^-53, so a run is
 * reproducible on any conforming platform, and the first k iterations of a
 * longer run replay a shorter one exactly.
 */

#include <trajeval/objective.hpp>

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace trajeval::optimizer {

struct PsoConfig {
    std::size_t swarm_size = 40;
    std::size_t iterations = 150;
    double inertia = 0.729;
    double cognitive = 1.49445;
    double social = 1.49445;
    /// Maximum per-dimension speed as a fraction of the box width.
    double velocity_clamp = 0.5;
    std::uint64_t seed = 42;
    /// 0 disables early stopping.
    std::size_t stall_iterations = 0;
    double stall_tolerance = 1e-6;
    /// Threads used to evaluate particles; results do not depend on it.
    std::size_t workers = 1;

    void validate() const;
};

struct Bound {
    double lo = 0.0;
    double hi = 1.0;
};

using Objective = std::function<double(std::span<const double>)>;

struct PsoResult {
    std::vector<double> best_position;
    double best_value = 0.0;
    /// Global-best value after initialization, then after every iteration.
    std::vector<double> history;
    std::size_t evaluations = 0;
    bool stopped_early = false;
};

struct OptimizationResult {
    objective::ManeuverCandidate best_candidate;
    double best_q = 0.0;
    objective::CriteriaReport best_report;
    metrics::InteractionSeries best_series;
    std::vector<double> history;
    std::size_t evaluations = 0;
    bool stopped_early = false;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Minimizes `evaluate` over the box. Non-finite objective values count as
/// +infinity. With workers > 1, `evaluate` must be safe to call concurrently.
PsoResult pso_minimize(const Objective& evaluate, std::span<const Bound> bounds, const PsoConfig& cfg);

/// Searches acceleration knots in [a_min, a_max] for the problem's objective.
/// Validates the problem before searching.
OptimizationResult optimize_maneuver(const objective::ManeuverProblem& problem, const PsoConfig& cfg);

}  // namespace trajeval::optimizer
