#include <trajeval/harness.hpp>

#include <trajeval/error.hpp>

#include <algorithm>

namespace trajeval::harness {

namespace {

EvaluationReport assemble(objective::ScoredTrajectory scored, Trajectory trajectory) {
    EvaluationReport out;
    out.criteria = scored.report;
    out.series = std::move(scored.series);
    out.jerk = std::move(scored.jerk);
    out.trajectory = std::move(trajectory);
    out.flags.unreached_goal = !out.criteria.goal_reached;
    out.flags.opponent_absent = out.criteria.opponent_absent;
    out.flags.penalty_saturated = out.criteria.penalty_saturated;
    out.flags.degenerate_overlaps = out.series.degenerate_overlaps;
    return out;
}

}  // namespace

EvaluationReport evaluate(const ScenarioConfig& scenario, const Trajectory& ego) {
    ego.validate();
    return assemble(objective::score_trajectory(ego, scenario.problem), ego);
}

EvaluationReport evaluate_candidate(const ScenarioConfig& scenario, const objective::ManeuverCandidate& candidate) {
    const auto& problem = scenario.problem;
    candidate.validate(problem.limits);
    auto integrated = objective::integrate_dynamics(problem.start, candidate, problem.path, problem.limits, problem.dt);
    auto scored = objective::score_trajectory(integrated.trajectory, problem);
    auto report = assemble(std::move(scored), std::move(integrated.trajectory));
    report.flags.saturated_at_zero = integrated.saturated_at_zero;
    report.flags.saturated_at_vmax = integrated.saturated_at_vmax;
    report.flags.end_of_path = integrated.end_of_path;
    return report;
}

EvaluationReport evaluate_baseline(const ScenarioConfig& scenario) {
    const auto& problem = scenario.problem;
    return evaluate_candidate(scenario, objective::ManeuverCandidate::uniform(
                                            std::vector<double>(problem.knots, 0.0), problem.horizon_s));
}

OptimizeOutcome run_optimize(const ScenarioConfig& scenario) {
    OptimizeOutcome out;
    out.result = optimizer::optimize_maneuver(scenario.problem, scenario.pso);
    out.optimized = evaluate_candidate(scenario, out.result.best_candidate);
    out.baseline = evaluate_baseline(scenario);
    return out;
}

double longest_stop_duration(const Trajectory& traj) {
    double best = 0.0;
    std::size_t run_start = 0;
    bool in_run = false;
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
        if (traj.samples[i].speed == 0.0) {
            if (!in_run) run_start = i;
            in_run = true;
            best = std::max(best, traj.samples[i].t - traj.samples[run_start].t);
        } else {
            in_run = false;
        }
    }
    return best;
}

}  // namespace trajeval::harness
