#include <trajeval/optimizer.hpp>

#include <trajeval/error.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace trajeval::optimizer {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double sanitize(double value) { return std::isfinite(value) ? value : kInfinity; }

struct Particle {
    std::mt19937_64 rng;
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> best_position;
    double value = kInfinity;
    double best_value = kInfinity;
};

void evaluate_swarm(const Objective& evaluate, std::vector<Particle>& swarm, std::size_t workers) {
    const std::size_t n = swarm.size();
    workers = std::clamp<std::size_t>(workers, 1, n);
    if (workers == 1) {
        for (auto& p : swarm) p.value = sanitize(evaluate(p.position));
        return;
    }
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                swarm[i].value = sanitize(evaluate(swarm[i].position));
            }
        });
    }
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

void PsoConfig::validate() const {
    if (swarm_size < 4) throw ValidationError("PSO swarm_size must be at least 4");
    if (iterations < 1) throw ValidationError("PSO iterations must be at least 1");
    if (!(inertia >= 0.0 && inertia <= 1.2)) throw ValidationError("PSO inertia must lie in [0, 1.2]");
    if (!(cognitive >= 0.0) || !(social >= 0.0)) throw ValidationError("PSO c1 and c2 must be non-negative");
    if (!(velocity_clamp > 0.0 && velocity_clamp <= 1.0)) {
        throw ValidationError("PSO velocity_clamp must lie in (0, 1]");
    }
    if (!(stall_tolerance >= 0.0)) throw ValidationError("PSO stall_tolerance must be non-negative");
}

PsoResult pso_minimize(const Objective& evaluate, std::span<const Bound> bounds, const PsoConfig& cfg) {
    cfg.validate();
    if (bounds.empty()) throw ValidationError("PSO needs at least one dimension");
    for (const Bound& b : bounds) {
        if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || !(b.lo < b.hi)) {
            throw ValidationError("PSO bounds must be finite with lo < hi");
        }
    }
    const std::size_t dim = bounds.size();

    std::vector<Particle> swarm(cfg.swarm_size);
    for (std::size_t i = 0; i < swarm.size(); ++i) {
        Particle& p = swarm[i];
        p.rng.seed(splitmix64(cfg.seed + splitmix64(i)));
        p.position.resize(dim);
        p.velocity.assign(dim, 0.0);
        for (std::size_t d = 0; d < dim; ++d) {
            p.position[d] = bounds[d].lo + uniform01(p.rng) * (bounds[d].hi - bounds[d].lo);
        }
    }

    PsoResult result;
    std::vector<double> global_best(dim);
    double global_value = kInfinity;
    bool have_global = false;

    // Reduction in particle-index order keeps serial and threaded runs identical.
    auto absorb = [&] {
        for (Particle& p : swarm) {
            if (p.best_position.empty() || p.value < p.best_value) {
                p.best_value = p.value;
                p.best_position = p.position;
            }
        }
        for (const Particle& p : swarm) {
            if (!have_global || p.best_value < global_value) {
                global_value = p.best_value;
                global_best = p.best_position;
                have_global = true;
            }
        }
        result.history.push_back(global_value);
    };

    evaluate_swarm(evaluate, swarm, cfg.workers);
    result.evaluations += swarm.size();
    absorb();

    std::size_t stalled = 0;
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        for (Particle& p : swarm) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double r1 = uniform01(p.rng);
                const double r2 = uniform01(p.rng);
                const double width = bounds[d].hi - bounds[d].lo;
                const double vmax = cfg.velocity_clamp * width;
                double vel = cfg.inertia * p.velocity[d] +
                             cfg.cognitive * r1 * (p.best_position[d] - p.position[d]) +
                             cfg.social * r2 * (global_best[d] - p.position[d]);
                vel = std::clamp(vel, -vmax, vmax);
                p.velocity[d] = vel;
                p.position[d] = std::clamp(p.position[d] + vel, bounds[d].lo, bounds[d].hi);
            }
        }
        const double previous = global_value;
        evaluate_swarm(evaluate, swarm, cfg.workers);
        result.evaluations += swarm.size();
        absorb();

        if (cfg.stall_iterations > 0) {
            const double scale = std::max(std::abs(previous), std::numeric_limits<double>::min());
            const bool improved = std::isfinite(previous) ? (previous - global_value) > cfg.stall_tolerance * scale
                                                          : std::isfinite(global_value);
            stalled = improved ? 0 : stalled + 1;
            if (stalled >= cfg.stall_iterations) {
                result.stopped_early = true;
                break;
            }
        }
    }

    result.best_position = global_best;
    result.best_value = global_value;
    return result;
}

OptimizationResult optimize_maneuver(const objective::ManeuverProblem& problem, const PsoConfig& cfg) {
    problem.validate();
    cfg.validate();

    std::vector<Bound> bounds(problem.knots, Bound{problem.limits.a_min, problem.limits.a_max});
    auto to_candidate = [&](std::span<const double> x) {
        return objective::ManeuverCandidate::uniform(std::vector<double>(x.begin(), x.end()),
                                                     problem.horizon_s);
    };
    const Objective evaluate = [&](std::span<const double> x) {
        return objective::objective_q(to_candidate(x), problem).q;
    };

    const PsoResult pso = pso_minimize(evaluate, bounds, cfg);

    OptimizationResult out;
    out.best_candidate = to_candidate(pso.best_position);
    const auto integrated = objective::integrate_dynamics(problem.start, out.best_candidate, problem.path,
                                                          problem.limits, problem.dt);
    auto scored = objective::score_trajectory(integrated.trajectory, problem);
    out.best_q = scored.report.q;
    out.best_report = scored.report;
    out.best_series = std::move(scored.series);
    out.history = pso.history;
    out.evaluations = pso.evaluations;
    out.stopped_early = pso.stopped_early;
    return out;
}

}  // namespace trajeval::optimizer
