#include <trajeval/objective.hpp>

#include <trajeval/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace trajeval::objective {

void Limits::validate() const {
    if (!(a_min < 0.0) || !(a_max > 0.0)) throw ValidationError("limits require a_min < 0 < a_max");
    if (!(v_max > 0.0)) throw ValidationError("limits require v_max > 0");
}

ManeuverCandidate ManeuverCandidate::uniform(std::vector<double> knots, double horizon_s) {
    ManeuverCandidate cand;
    const std::size_t n = knots.size();
    cand.accel_knots = std::move(knots);
    cand.horizon_s = horizon_s;
    cand.knot_dt = n > 1 ? horizon_s / static_cast<double>(n - 1) : horizon_s;
    return cand;
}

double ManeuverCandidate::acceleration_at(double t) const {
    if (accel_knots.size() == 1 || t <= 0.0) return accel_knots.front();
    const double pos = t / knot_dt;
    const auto k = static_cast<std::size_t>(std::floor(pos));
    if (k + 1 >= accel_knots.size()) return accel_knots.back();
    const double f = pos - static_cast<double>(k);
    return accel_knots[k] + f * (accel_knots[k + 1] - accel_knots[k]);
}

void ManeuverCandidate::validate(const Limits& limits) const {
    if (accel_knots.empty()) throw ValidationError("maneuver candidate has no acceleration knots");
    if (!(horizon_s > 0.0) || !(knot_dt > 0.0)) {
        throw ValidationError("maneuver horizon and knot spacing must be positive");
    }
    for (double a : accel_knots) {
        if (!(a >= limits.a_min && a <= limits.a_max)) {
            throw ValidationError("acceleration knot " + std::to_string(a) + " outside [a_min, a_max]");
        }
    }
}

void PenaltyParams::validate() const {
    if (!(m > 0.0) || !(p > 1.0)) throw ValidationError("penalty requires M > 0 and p > 1");
}

void ObjectiveParams::validate() const {
    if (!(w_time > 0.0) || !(w_safe > 0.0)) throw ValidationError("objective weights must be positive");
    shaping.validate();
    longitudinal_penalty.validate();
    lateral_penalty.validate();
    thresholds.validate();
    safety.validate();
    if (!(goal_radius_m > 0.0)) throw ValidationError("goal radius must be positive");
    if (!(interaction_scale > 0.0)) throw ValidationError("interaction scale must be positive");
}

void ManeuverProblem::validate() const {
    limits.validate();
    footprint.validate();
    params.validate();
    if (!(dt > 0.0) || !(horizon_s > 0.0)) throw ValidationError("dt and horizon must be positive");
    if (knots == 0) throw ValidationError("at least one acceleration knot is required");
    if (std::llround(horizon_s / dt) < 2) throw ValidationError("horizon must span at least two steps");
    const double knot_dt = knots > 1 ? horizon_s / static_cast<double>(knots - 1) : horizon_s;
    if (dt > knot_dt + kTimeStepTolerance) throw ValidationError("dt must not exceed the knot spacing");
    if (!(start.s >= 0.0 && start.s <= path.length())) {
        throw ValidationError("start arc length lies outside the reference path");
    }
    if (!(start.v >= 0.0 && start.v <= limits.v_max)) {
        throw ValidationError("start speed must lie in [0, v_max]");
    }
    if (distance(path.position_at(start.s), params.goal) <= params.goal_radius_m) {
        throw ValidationError("start position is already inside the goal radius");
    }
    if (opponent) {
        opponent->footprint.validate();
        opponent->trajectory.validate(1);
        if (std::abs(opponent->trajectory.dt - dt) > kTimeStepTolerance) {
            throw AlignmentError("opponent trajectory time step differs from the simulation dt");
        }
        const double offset = opponent->trajectory.start_time() / dt;
        if (std::abs(offset - std::round(offset)) > 1e-6) {
            throw AlignmentError("opponent trajectory is not on the simulation time grid");
        }
        if (opponent->trajectory.start_time() > horizon_s || opponent->trajectory.end_time() < 0.0) {
            throw AlignmentError("opponent trajectory does not overlap the planning horizon");
        }
    }
}

IntegratedTrajectory integrate_dynamics(const VehicleState& start, const ManeuverCandidate& cand,
                                        const ReferencePath& path, const Limits& limits, double dt) {
    if (!(dt > 0.0) || dt > cand.knot_dt + kTimeStepTolerance) {
        throw ValidationError("integration dt must be positive and not exceed the knot spacing");
    }
    if (!(start.s >= 0.0 && start.s <= path.length())) {
        throw ValidationError("start arc length lies outside the reference path");
    }
    if (!(start.v >= 0.0)) throw ValidationError("start speed must be non-negative");

    const auto steps = static_cast<std::size_t>(std::llround(cand.horizon_s / dt));
    IntegratedTrajectory out;
    out.trajectory.dt = dt;
    out.trajectory.samples.reserve(steps + 1);
    out.arc_length.reserve(steps + 1);

    auto push = [&](std::size_t i, double s, double v) {
        out.trajectory.samples.push_back(
            {static_cast<double>(i) * dt, path.position_at(s), v, path.heading_at(s)});
        out.arc_length.push_back(s);
    };

    double s = start.s;
    double v = std::min(start.v, limits.v_max);
    push(0, s, v);
    for (std::size_t i = 0; i < steps; ++i) {
        const double a = cand.acceleration_at(static_cast<double>(i) * dt);
        double v_next = v + a * dt;
        if (v_next <= 0.0) {
            if (v_next < 0.0) ++out.saturated_at_zero;
            v_next = 0.0;
        } else if (v_next > limits.v_max) {
            ++out.saturated_at_vmax;
            v_next = limits.v_max;
        }
        const double s_next = s + v_next * dt;
        if (s_next > path.length()) {
            out.end_of_path = true;
            break;
        }
        s = s_next;
        v = v_next;
        push(i + 1, s, v);
    }
    return out;
}

bool penalty_saturates(double x, double m, double p) {
    return x >= 0.0 && m * p * x > metrics::kMaxCostExponent;
}

double penalty_psi(double x, double m, double p) {
    if (x < 0.0) return 0.0;
    const double exponent = std::min(m * p * x, metrics::kMaxCostExponent);
    return std::expm1(exponent) / m;
}

ScoredTrajectory score_trajectory(const Trajectory& ego, const ManeuverProblem& problem) {
    const ObjectiveParams& params = problem.params;
    ScoredTrajectory out;
    CriteriaReport& r = out.report;

    const std::ptrdiff_t entry = metrics::goal_entry_index(ego, params.goal, params.goal_radius_m);
    if (entry == 0) throw ValidationError("ego trajectory starts inside the goal radius");
    if (entry > 0) {
        r.goal_reached = true;
        r.t_global = ego.samples[static_cast<std::size_t>(entry)].t - ego.start_time();
    } else {
        r.goal_reached = false;
        r.goal_distance_m = distance(ego.samples.back().position, params.goal);
        r.t_global = (ego.end_time() - ego.start_time()) + r.goal_distance_m / problem.limits.v_max;
    }

    if (problem.opponent) {
        out.series = metrics::interaction_series(ego, problem.opponent->trajectory, problem.footprint,
                                                 problem.opponent->footprint, params.safety);
        r.worst_int = out.series.worst_value();
        r.worst_time = out.series.values[out.series.worst_index].t;
    } else {
        r.opponent_absent = true;
        r.worst_int = metrics::kAbsentOpponentInteraction;
        r.worst_time = ego.start_time();
    }
    r.c_safe = metrics::shaping_beta(params.interaction_scale * r.worst_int, params.shaping);

    out.jerk = metrics::jerk_profile(ego);
    if (out.jerk.t.empty()) {
        r.c_longi = -params.thresholds.tau_longi;
        r.c_lat = -params.thresholds.tau_lat;
    } else {
        const auto c = metrics::comfort_constraints(out.jerk, params.thresholds);
        r.c_longi = c.c_longi;
        r.c_lat = c.c_lat;
    }

    const auto& pl = params.longitudinal_penalty;
    const auto& pt = params.lateral_penalty;
    r.time_term = params.w_time * r.t_global;
    r.safety_term = params.w_safe * r.c_safe;
    r.penalty_longi = penalty_psi(r.c_longi, pl.m, pl.p);
    r.penalty_lat = penalty_psi(r.c_lat, pt.m, pt.p);
    r.penalty_saturated = penalty_saturates(r.c_longi, pl.m, pl.p) || penalty_saturates(r.c_lat, pt.m, pt.p);
    r.q = r.time_term + r.safety_term + r.penalty_longi + r.penalty_lat;
    return out;
}

ObjectiveValue objective_q(const ManeuverCandidate& cand, const ManeuverProblem& problem) {
    const auto integrated = integrate_dynamics(problem.start, cand, problem.path, problem.limits, problem.dt);
    auto scored = score_trajectory(integrated.trajectory, problem);
    return {scored.report.q, scored.report};
}

}  // namespace trajeval::objective
