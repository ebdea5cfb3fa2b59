#include <trajeval/metrics.hpp>

#include <trajeval/error.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace trajeval::metrics {

namespace {

/// Angle difference folded into (-pi, pi]; leaves in-range values untouched
/// so that small differences stay bit-exact.
double heading_step(double from, double to) {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    double d = to - from;
    while (d > std::numbers::pi) d -= kTwoPi;
    while (d <= -std::numbers::pi) d += kTwoPi;
    return d;
}

void require_interior(const Trajectory& traj, std::size_t i) {
    if (traj.size() < 3 || i < 1 || i + 1 >= traj.size()) {
        throw PreconditionError("jerk index " + std::to_string(i) +
                                " is not interior to a trajectory of " +
                                std::to_string(traj.size()) + " samples");
    }
}

struct Derivatives {
    double speed_rate;      // v'
    double speed_accel;     // v''
    double heading_rate;    // heading'
    double heading_accel;   // heading''
};

Derivatives central_differences(const Trajectory& traj, std::size_t i) {
    const auto& prev = traj.samples[i - 1];
    const auto& cur = traj.samples[i];
    const auto& next = traj.samples[i + 1];
    const double dt = traj.dt;
    const double back = heading_step(prev.heading, cur.heading);
    const double fwd = heading_step(cur.heading, next.heading);
    return {
        (next.speed - prev.speed) / (2.0 * dt),
        (next.speed - 2.0 * cur.speed + prev.speed) / (dt * dt),
        (fwd + back) / (2.0 * dt),
        (fwd - back) / (dt * dt),
    };
}

}  // namespace

void ShapingParams::validate() const {
    if (!(m_cap > 0.0)) throw ValidationError("shaping M must be positive");
    if (!(slope > 1.0)) throw ValidationError("shaping p must exceed 1");
    if (!(alpha > 0.0)) throw ValidationError("shaping alpha must be positive");
}

void ComfortThresholds::validate() const {
    if (!(tau_longi > 0.0) || !(tau_lat > 0.0)) {
        throw ValidationError("comfort thresholds must be positive");
    }
}

double InteractionSeries::worst_value() const {
    if (values.empty()) throw DomainError("interaction series is empty");
    return values[worst_index].value;
}

InteractionEval evaluate_interaction(const geometry::SafetyEllipse& ego,
                                     const geometry::SafetyEllipse& opp, std::size_t n) {
    InteractionEval out;
    out.relation = geometry::classify(ego, opp, n);
    if (out.relation == geometry::Relation::Intersecting) {
        const auto poly = geometry::overlap_polygon(ego, opp, n);
        out.degenerate = poly.degenerate();
        out.value = geometry::shoelace_area(poly);
    } else {
        out.value = -geometry::min_gap(ego, opp, n);
    }
    return out;
}

double intersection_metric(const geometry::SafetyEllipse& ego, const geometry::SafetyEllipse& opp,
                           std::size_t n) {
    return evaluate_interaction(ego, opp, n).value;
}

InteractionSeries interaction_series(const Trajectory& ego, const Trajectory& opp,
                                     const geometry::VehicleFootprint& ego_footprint,
                                     const geometry::VehicleFootprint& opp_footprint,
                                     const geometry::SafetyParams& params) {
    if (ego.empty() || opp.empty()) throw AlignmentError("interaction series needs two non-empty trajectories");
    if (std::abs(ego.dt - opp.dt) > kTimeStepTolerance) {
        throw AlignmentError("trajectories use different time steps (" + std::to_string(ego.dt) +
                             " vs " + std::to_string(opp.dt) + ")");
    }
    const double offset_steps = (opp.start_time() - ego.start_time()) / ego.dt;
    const double rounded = std::round(offset_steps);
    if (std::abs(offset_steps - rounded) > 1e-6) {
        throw AlignmentError("trajectory start times are not on a common time grid");
    }
    // ego index i pairs with opp index i - shift
    const auto shift = static_cast<std::ptrdiff_t>(rounded);
    const auto ego_n = static_cast<std::ptrdiff_t>(ego.size());
    const auto opp_n = static_cast<std::ptrdiff_t>(opp.size());
    const std::ptrdiff_t first = std::max<std::ptrdiff_t>(0, shift);
    const std::ptrdiff_t last = std::min(ego_n, opp_n + shift);
    if (first >= last) throw AlignmentError("trajectories do not overlap in time");

    InteractionSeries series;
    series.values.reserve(static_cast<std::size_t>(last - first));
    for (std::ptrdiff_t i = first; i < last; ++i) {
        const auto& e = ego.samples[static_cast<std::size_t>(i)];
        const auto& o = opp.samples[static_cast<std::size_t>(i - shift)];
        const auto ego_zone = geometry::adaptive_ellipse(ego_footprint, {e.position, e.heading}, e.speed, params);
        const auto opp_zone = geometry::adaptive_ellipse(opp_footprint, {o.position, o.heading}, o.speed, params);
        const auto eval = evaluate_interaction(ego_zone, opp_zone, params.boundary_samples);
        if (eval.degenerate) ++series.degenerate_overlaps;
        series.values.push_back({e.t, eval.value});
        if (eval.value > series.values[series.worst_index].value) {
            series.worst_index = series.values.size() - 1;
        }
    }
    return series;
}

double shaping_beta(double x, const ShapingParams& sp) {
    if (x <= 0.0) {
        const double base = 1.0 - sp.slope * x / (sp.m_cap * sp.alpha);
        return sp.m_cap * std::pow(base, -sp.alpha);
    }
    const double exponent = std::min(sp.slope * x / sp.m_cap, kMaxCostExponent);
    return sp.m_cap * std::exp(exponent);
}

double safety_criterion(const InteractionSeries& series, const ShapingParams& sp, double scale) {
    return shaping_beta(scale * series.worst_value(), sp);
}

double longitudinal_jerk(const Trajectory& traj, std::size_t i) {
    require_interior(traj, i);
    const Derivatives d = central_differences(traj, i);
    return d.speed_accel - traj.samples[i].speed * d.heading_rate * d.heading_rate;
}

double lateral_jerk(const Trajectory& traj, std::size_t i) {
    require_interior(traj, i);
    const Derivatives d = central_differences(traj, i);
    return 2.0 * d.speed_rate * d.heading_rate + traj.samples[i].speed * d.heading_accel;
}

JerkProfile jerk_profile(const Trajectory& traj) {
    JerkProfile profile;
    if (traj.size() < 3) return profile;
    const std::size_t interior = traj.size() - 2;
    profile.t.reserve(interior);
    profile.longitudinal.reserve(interior);
    profile.lateral.reserve(interior);
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        profile.t.push_back(traj.samples[i].t);
        profile.longitudinal.push_back(longitudinal_jerk(traj, i));
        profile.lateral.push_back(lateral_jerk(traj, i));
    }
    return profile;
}

ComfortConstraints comfort_constraints(const JerkProfile& profile, const ComfortThresholds& th) {
    if (profile.t.empty()) throw ValidationError("comfort constraints need at least one interior sample");
    double worst_longi = 0.0;
    double worst_lat = 0.0;
    for (std::size_t i = 0; i < profile.t.size(); ++i) {
        worst_longi = std::max(worst_longi, std::abs(profile.longitudinal[i]));
        worst_lat = std::max(worst_lat, std::abs(profile.lateral[i]));
    }
    return {worst_longi - th.tau_longi, worst_lat - th.tau_lat};
}

ComfortConstraints comfort_constraints(const Trajectory& traj, const ComfortThresholds& th) {
    traj.validate();
    return comfort_constraints(jerk_profile(traj), th);
}

std::ptrdiff_t goal_entry_index(const Trajectory& traj, const Vec2& goal, double goal_radius_m) {
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (distance(traj.samples[i].position, goal) <= goal_radius_m) return static_cast<std::ptrdiff_t>(i);
    }
    return -1;
}

double travel_time(const Trajectory& traj, const Vec2& goal, double goal_radius_m) {
    if (!(goal_radius_m > 0.0)) throw DomainError("goal radius must be positive");
    if (traj.empty()) throw UnreachedGoalError("empty trajectory never reaches the goal");
    const std::ptrdiff_t idx = goal_entry_index(traj, goal, goal_radius_m);
    if (idx < 0) throw UnreachedGoalError("trajectory never enters the goal radius");
    if (idx == 0) throw DomainError("trajectory starts inside the goal radius; travel time must be positive");
    return traj.samples[static_cast<std::size_t>(idx)].t - traj.start_time();
}

}  // namespace trajeval::metrics
