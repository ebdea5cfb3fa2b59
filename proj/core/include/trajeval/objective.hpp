#pragma once
/**
 * @file  objective.hpp
 * @brief Longitudinal dynamics along a fixed path and the penalized scalar
 *        objective Q = w_time * T_global + w_safe * beta(max Int) + sum psi(C).
 *
 * The decision variables are acceleration knots spread uniformly over the
 * horizon; the commanded acceleration is linearly interpolated between knots
 * and held after the last one. Every infeasibility (unreached goal, jerk
 * violation, overflow) maps to a finite cost so population-based search
 * always gets an ordering.
 */

#include <trajeval/geometry.hpp>
#include <trajeval/metrics.hpp>
#include <trajeval/path.hpp>
#include <trajeval/trajectory.hpp>

#include <cstddef>
#include <optional>
#include <vector>

namespace trajeval::objective {

struct VehicleState {
    double s = 0.0;  ///< arc length along the reference path, m
    double v = 0.0;  ///< speed, m/s
};

struct Limits {
    double a_min = -3.0;
    double a_max = 2.0;
    double v_max = 13.9;

    void validate() const;
};

struct ManeuverCandidate {
    std::vector<double> accel_knots;
    double horizon_s = 15.0;
    /// Spacing of the knots; knot k sits at t = k * knot_dt.
    double knot_dt = 15.0;

    /// `knots` values spread over [0, horizon_s] (a single knot is constant).
    static ManeuverCandidate uniform(std::vector<double> knots, double horizon_s);

    [[nodiscard]] double acceleration_at(double t) const;
    /// Throws ValidationError when empty or outside [a_min, a_max].
    void validate(const Limits& limits) const;
};

struct PenaltyParams {
    double m = 1.0;
    double p = 5.0;

    void validate() const;
};

struct ObjectiveParams {
    double w_time = 1.0;
    double w_safe = 1.0;
    metrics::ShapingParams shaping;
    PenaltyParams longitudinal_penalty;
    PenaltyParams lateral_penalty;
    metrics::ComfortThresholds thresholds;
    geometry::SafetyParams safety;
    Vec2 goal;
    double goal_radius_m = 1.0;
    /// Multiplies max Int before shaping; 1 keeps the raw mixed-unit metric.
    double interaction_scale = 1.0;

    void validate() const;
};

struct Opponent {
    geometry::VehicleFootprint footprint;
    Trajectory trajectory;
};

/// Everything that stays fixed while candidates are scored.
struct ManeuverProblem {
    ReferencePath path{{{0.0, 0.0}, {1.0, 0.0}}};
    VehicleState start;
    Limits limits;
    geometry::VehicleFootprint footprint;
    std::optional<Opponent> opponent;
    ObjectiveParams params;
    double dt = 0.1;
    double horizon_s = 15.0;
    std::size_t knots = 10;

    /// Throws ValidationError (AlignmentError for opponent timing) before any
    /// search begins.
    void validate() const;
};

struct IntegratedTrajectory {
    Trajectory trajectory;
    std::vector<double> arc_length;
    std::size_t saturated_at_zero = 0;   ///< steps clamped at v = 0
    std::size_t saturated_at_vmax = 0;   ///< steps clamped at v_max
    bool end_of_path = false;            ///< truncated before the horizon
};

struct CriteriaReport {
    double t_global = 0.0;
    bool goal_reached = false;
    /// Distance from the final position to the goal when unreached.
    double goal_distance_m = 0.0;
    double worst_int = 0.0;
    double worst_time = 0.0;
    double c_safe = 0.0;      ///< beta(scale * worst_int), before w_safe
    double c_longi = 0.0;
    double c_lat = 0.0;
    double time_term = 0.0;
    double safety_term = 0.0;
    double penalty_longi = 0.0;
    double penalty_lat = 0.0;
    double q = 0.0;
    bool opponent_absent = false;
    bool penalty_saturated = false;
};

/// Criteria plus the series they were computed from.
struct ScoredTrajectory {
    CriteriaReport report;
    metrics::InteractionSeries series;
    metrics::JerkProfile jerk;
};

struct ObjectiveValue {
    double q = 0.0;
    CriteriaReport report;
};

/// Semi-implicit Euler: v' = clamp(v + a dt, 0, v_max), s' = s + v' dt.
/// Positions and headings are read off the path. Stops early, flagging
/// end_of_path, if the next step would run past the end of the path.
IntegratedTrajectory integrate_dynamics(const VehicleState& start, const ManeuverCandidate& cand,
                                        const ReferencePath& path, const Limits& limits, double dt);

/// 0 for x < 0, (exp(M p x) - 1) / M otherwise. The exponent is capped at
/// metrics::kMaxCostExponent; see penalty_saturates().
double penalty_psi(double x, double m, double p);
bool penalty_saturates(double x, double m, double p);

/// Scores an arbitrary ego trajectory against the problem's opponent, goal and
/// weights. Unreached goals cost the trajectory duration plus the remaining
/// straight-line distance at v_max.
ScoredTrajectory score_trajectory(const Trajectory& ego, const ManeuverProblem& problem);

ObjectiveValue objective_q(const ManeuverCandidate& cand, const ManeuverProblem& problem);

}  // namespace trajeval::objective
