#pragma once
/**
 * @file  geometry.hpp
 * @brief Adaptive elliptical safety zones and their pairwise relations.
 *
 * Conventions:
 * - Lengths in meters, angles in radians, rotations counter-clockwise from +X.
 * - An ellipse's body frame has +X along the vehicle heading. `semi_axis_x`
 *   is the longitudinal semi-axis, `semi_axis_y` the lateral one.
 * - Boundaries are represented by N angular samples at parameter angles
 *   2*pi*k/N; every relation below is evaluated on those samples.
 */

#include <trajeval/vec2.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace trajeval::geometry {

/// Default number of boundary samples per ellipse.
inline constexpr std::size_t kDefaultBoundarySamples = 64;

/// Slack on the unit normalized-delta norm when testing containment. Points
/// generated on one boundary and tested against an identical ellipse land
/// within a few ulps of 1.
inline constexpr double kContainmentTolerance = 1e-9;

/// Overlap vertices closer than this are treated as one point.
inline constexpr double kDuplicateTolerance = 1e-9;

struct VehicleFootprint {
    double length_m = 4.5;
    double width_m = 1.8;

    /// Throws ValidationError unless 0 < width <= length.
    void validate() const;
};

struct SafetyParams {
    double ttc_threshold_s = 2.0;
    double lateral_margin_m = 0.5;
    std::size_t boundary_samples = kDefaultBoundarySamples;

    /// Throws ValidationError on non-positive TTC threshold, negative margin,
    /// or a sample count that is below 8 or odd.
    void validate() const;
};

struct Pose {
    Vec2 position;
    double heading_rad = 0.0;
};

struct SafetyEllipse {
    Vec2 center;
    double semi_axis_x = 1.0;
    double semi_axis_y = 1.0;
    double rotation_rad = 0.0;

    /// Builds an ellipse with the rotation wrapped into (-pi, pi]; throws
    /// DomainError on non-positive semi-axes.
    static SafetyEllipse make(Vec2 center, double semi_axis_x, double semi_axis_y,
                              double rotation_rad);

    [[nodiscard]] double area() const;
};

enum class Relation { Separated, Intersecting };

struct OverlapPolygon {
    /// Distinct vertices sorted counter-clockwise around `centroid`.
    std::vector<Vec2> vertices;
    Vec2 centroid;
    /// Boundary samples found inside the other ellipse, before deduplication.
    std::size_t collected_samples = 0;

    /// Fewer than three distinct vertices: grazing contact with zero area.
    [[nodiscard]] bool degenerate() const { return vertices.size() < 3; }
};

/// Safety zone of a vehicle: longitudinal semi-axis L/2 + TTC_th * speed,
/// lateral semi-axis W/2 + lateral margin, aligned with the heading.
/// Throws DomainError for negative speed.
SafetyEllipse adaptive_ellipse(const VehicleFootprint& footprint, const Pose& pose, double speed,
                               const SafetyParams& params);

/// Boundary points at parameter angles 2*pi*k/n; point 0 is on the +X body axis.
std::vector<Vec2> sample_boundary(const SafetyEllipse& e, std::size_t n);

/// Displacement from the center of `e` to `p`, rotated into the body frame and
/// scaled by the semi-axes. Norm < 1 inside, == 1 on the boundary.
Vec2 normalized_delta(const SafetyEllipse& e, const Vec2& p);

/// Point where the ray from the center of `e` through `p` crosses the boundary.
/// Throws DomainError when `p` coincides with the center.
Vec2 radial_projection(const SafetyEllipse& e, const Vec2& p);

/// True when `p` is inside or on `e` (with kContainmentTolerance slack).
bool contains(const SafetyEllipse& e, const Vec2& p);

Relation classify(const SafetyEllipse& ego, const SafetyEllipse& opp, std::size_t n);

/// O(n^2) gap estimate: smallest distance between the projections of the
/// opponent samples onto `ego` and the projections of the ego samples onto
/// `opp`. Throws PreconditionError on an intersecting pair.
double brute_force_distance(const SafetyEllipse& ego, const SafetyEllipse& opp, std::size_t n);

/// O(n) minimum remaining gap. Picks on each ellipse the projection of the
/// other ellipse's sample with the smallest radial residual and returns the
/// distance between the two picks. Throws PreconditionError on an
/// intersecting pair.
double min_gap(const SafetyEllipse& ego, const SafetyEllipse& opp, std::size_t n);

/// Boundary samples of each ellipse contained in the other, deduplicated and
/// sorted by angle around their centroid. Throws PreconditionError on a
/// separated pair.
OverlapPolygon overlap_polygon(const SafetyEllipse& ego, const SafetyEllipse& opp, std::size_t n);

/// Shoelace area of a closed polygon; 0 for fewer than three vertices.
double shoelace_area(std::span<const Vec2> vertices);
double shoelace_area(const OverlapPolygon& poly);

/// Signed Shoelace sum (positive for counter-clockwise order).
double signed_shoelace_area(std::span<const Vec2> vertices);

/// Area of overlap_polygon(ego, opp, n). Throws PreconditionError on a
/// separated pair.
double overlap_area(const SafetyEllipse& ego, const SafetyEllipse& opp, std::size_t n);

}  // namespace trajeval::geometry
