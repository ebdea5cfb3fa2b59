#pragma once
/**
 * @file  metrics.hpp
 * @brief Per-trajectory criteria: interaction metric Int(t), shaped safety
 *        criterion, finite-difference jerk comfort constraints, travel time.
 */

#include <trajeval/geometry.hpp>
#include <trajeval/trajectory.hpp>

#include <cstddef>
#include <vector>

namespace trajeval::metrics {

/// Exponents above this are clamped before std::exp so every cost stays finite.
inline constexpr double kMaxCostExponent = 200.0;

/// Int value standing in for "no opponent": deep inside the separation tail.
inline constexpr double kAbsentOpponentInteraction = -1e6;

struct ShapingParams {
    double m_cap = 1.0;   ///< value at 0
    double slope = 5.0;   ///< derivative at 0
    double alpha = 0.5;   ///< decay exponent on the separated side

    void validate() const;
};

struct ComfortThresholds {
    double tau_longi = 0.9;  ///< m/s^3
    double tau_lat = 0.9;    ///< m/s^3

    void validate() const;
};

struct InteractionEval {
    double value = 0.0;
    geometry::Relation relation = geometry::Relation::Separated;
    /// Intersecting, but the overlap polygon has fewer than three vertices.
    bool degenerate = false;
};

struct InteractionPoint {
    double t = 0.0;
    /// Overlap area (m^2) when positive, minus the remaining gap (m) otherwise.
    double value = 0.0;
};

struct InteractionSeries {
    std::vector<InteractionPoint> values;
    std::size_t worst_index = 0;
    std::size_t degenerate_overlaps = 0;

    [[nodiscard]] bool empty() const { return values.empty(); }
    /// Throws DomainError on an empty series.
    [[nodiscard]] double worst_value() const;
};

struct JerkProfile {
    /// Interior sample times only; endpoints have no central difference.
    std::vector<double> t;
    std::vector<double> longitudinal;
    std::vector<double> lateral;
};

struct ComfortConstraints {
    double c_longi = 0.0;
    double c_lat = 0.0;
};

InteractionEval evaluate_interaction(const geometry::SafetyEllipse& ego,
                                     const geometry::SafetyEllipse& opp, std::size_t n);

/// Overlap area when the zones intersect, minus the minimum gap otherwise.
double intersection_metric(const geometry::SafetyEllipse& ego, const geometry::SafetyEllipse& opp,
                           std::size_t n);

/// Int(t) on every time step shared by both trajectories. Throws
/// AlignmentError when the steps differ or the time ranges do not overlap on
/// a common grid.
InteractionSeries interaction_series(const Trajectory& ego, const Trajectory& opp,
                                     const geometry::VehicleFootprint& ego_footprint,
                                     const geometry::VehicleFootprint& opp_footprint,
                                     const geometry::SafetyParams& params);

/// Shaping function: M (1 - p x / (M alpha))^-alpha for x <= 0 and
/// M exp(p x / M) above. Continuous with value M and slope p at 0.
double shaping_beta(double x, const ShapingParams& sp);

/// beta(scale * max_t Int(t)). Throws DomainError on an empty series.
double safety_criterion(const InteractionSeries& series, const ShapingParams& sp,
                        double scale = 1.0);

/// v'' - v (heading')^2 by central differences at interior index i.
double longitudinal_jerk(const Trajectory& traj, std::size_t i);

/// 2 v' heading' + v heading'' by central differences at interior index i.
/// Heading differences are unwrapped across the +-pi seam.
double lateral_jerk(const Trajectory& traj, std::size_t i);

JerkProfile jerk_profile(const Trajectory& traj);

/// max |jerk| - tau over interior samples, per component. Negative values
/// mean the constraint holds with margin.
ComfortConstraints comfort_constraints(const Trajectory& traj, const ComfortThresholds& th);
ComfortConstraints comfort_constraints(const JerkProfile& profile, const ComfortThresholds& th);

/// Index of the first sample within `goal_radius_m` of `goal`, if any.
std::ptrdiff_t goal_entry_index(const Trajectory& traj, const Vec2& goal, double goal_radius_m);

/// Time from the first sample to the first sample inside the goal radius.
/// Throws UnreachedGoalError if the goal is never entered and DomainError if
/// the trajectory starts inside it.
double travel_time(const Trajectory& traj, const Vec2& goal, double goal_radius_m);

}  // namespace trajeval::metrics
