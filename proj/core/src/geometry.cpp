#include <trajeval/geometry.hpp>

#include <trajeval/error.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace trajeval::geometry {

namespace {

/// Ellipse with its rotation evaluated once, for the per-sample loops.
struct Frame {
    const SafetyEllipse& e;
    double c;
    double s;

    explicit Frame(const SafetyEllipse& ellipse)
        : e(ellipse), c(std::cos(ellipse.rotation_rad)), s(std::sin(ellipse.rotation_rad)) {}

    [[nodiscard]] Vec2 delta(const Vec2& p) const {
        const double dx = p.x - e.center.x;
        const double dy = p.y - e.center.y;
        return {(c * dx + s * dy) / e.semi_axis_x, (-s * dx + c * dy) / e.semi_axis_y};
    }

    [[nodiscard]] bool contains(const Vec2& p) const {
        return delta(p).norm() <= 1.0 + kContainmentTolerance;
    }

    [[nodiscard]] Vec2 project(const Vec2& p) const {
        const Vec2 d = delta(p);
        const double norm = d.norm();
        if (!(norm > 0.0)) {
            throw DomainError("radial projection is undefined at the ellipse center");
        }
        const double bx = e.semi_axis_x * d.x / norm;
        const double by = e.semi_axis_y * d.y / norm;
        return {e.center.x + c * bx - s * by, e.center.y + s * bx + c * by};
    }
};

void require_samples(std::size_t n) {
    if (n < 8) {
        throw PreconditionError("boundary sample count must be at least 8, got " + std::to_string(n));
    }
}

bool any_contained(const SafetyEllipse& container, std::span<const Vec2> points) {
    const Frame frame(container);
    return std::any_of(points.begin(), points.end(),
                       [&](const Vec2& p) { return frame.contains(p); });
}

Relation classify_samples(const SafetyEllipse& ego, std::span<const Vec2> ego_samples,
                          const SafetyEllipse& opp, std::span<const Vec2> opp_samples) {
    if (any_contained(ego, opp_samples) || any_contained(opp, ego_samples) ||
        contains(ego, opp.center) || contains(opp, ego.center)) {
        return Relation::Intersecting;
    }
    return Relation::Separated;
}

/// Removes points within kDuplicateTolerance of an earlier kept point.
std::vector<Vec2> deduplicate(std::vector<Vec2> points) {
    std::sort(points.begin(), points.end(),
              [](const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    std::vector<Vec2> kept;
    kept.reserve(points.size());
    for (const Vec2& p : points) {
        bool duplicate = false;
        for (auto it = kept.rbegin(); it != kept.rend() && p.x - it->x <= kDuplicateTolerance; ++it) {
            if (distance(p, *it) <= kDuplicateTolerance) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) kept.push_back(p);
    }
    return kept;
}

}  // namespace

void VehicleFootprint::validate() const {
    if (!(length_m > 0.0) || !(width_m > 0.0)) {
        throw ValidationError("vehicle footprint dimensions must be positive");
    }
    if (length_m < width_m) {
        throw ValidationError("vehicle footprint length must not be smaller than its width");
    }
}

void SafetyParams::validate() const {
    if (!(ttc_threshold_s > 0.0)) throw ValidationError("ttc_threshold_s must be positive");
    if (!(lateral_margin_m >= 0.0)) throw ValidationError("lateral_margin_m must be non-negative");
    if (boundary_samples < 8 || boundary_samples % 2 != 0) {
        throw ValidationError("boundary_samples must be even and at least 8, got " +
                              std::to_string(boundary_samples));
    }
}

SafetyEllipse SafetyEllipse::make(Vec2 center, double semi_axis_x, double semi_axis_y,
                                  double rotation_rad) {
    if (!(semi_axis_x > 0.0) || !(semi_axis_y > 0.0)) {
        throw DomainError("ellipse semi-axes must be positive");
    }
    return SafetyEllipse{center, semi_axis_x, semi_axis_y, wrap_angle(rotation_rad)};
}

double SafetyEllipse::area() const { return std::numbers::pi * semi_axis_x * semi_axis_y; }

SafetyEllipse adaptive_ellipse(const VehicleFootprint& footprint, const Pose& pose, double speed,
                               const SafetyParams& params) {
    if (!(speed >= 0.0)) {
        throw DomainError("speed must be non-negative, got " + std::to_string(speed));
    }
    const double longitudinal_margin = params.ttc_threshold_s * speed;
    return SafetyEllipse::make(pose.position, 0.5 * footprint.length_m + longitudinal_margin,
                               0.5 * footprint.width_m + params.lateral_margin_m, pose.heading_rad);
}

std::vector<Vec2> sample_boundary(const SafetyEllipse& e, std::size_t n) {
    require_samples(n);
    const double c = std::cos(e.rotation_rad);
    const double s = std::sin(e.rotation_rad);
    std::vector<Vec2> points;
    points.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        const double lx = e.semi_axis_x * std::cos(phi);
        const double ly = e.semi_axis_y * std::sin(phi);
        points.push_back({e.center.x + c * lx - s * ly, e.center.y + s * lx + c * ly});
    }
    return points;
}

Vec2 normalized_delta(const SafetyEllipse& e, const Vec2& p) { return Frame(e).delta(p); }

Vec2 radial_projection(const SafetyEllipse& e, const Vec2& p) { return Frame(e).project(p); }

bool contains(const SafetyEllipse& e, const Vec2& p) { return Frame(e).contains(p); }

Relation classify(const SafetyEllipse& ego, const SafetyEllipse& opp, std::size_t n) {
    const auto ego_samples = sample_boundary(ego, n);
    const auto opp_samples = sample_boundary(opp, n);
    return classify_samples(ego, ego_samples, opp, opp_samples);
}

double brute_force_distance(const SafetyEllipse& ego, const SafetyEllipse& opp, std::size_t n) {
    const auto ego_samples = sample_boundary(ego, n);
    const auto opp_samples = sample_boundary(opp, n);
    if (classify_samples(ego, ego_samples, opp, opp_samples) != Relation::Separated) {
        throw PreconditionError("brute_force_distance requires separated ellipses");
    }
    std::vector<Vec2> on_ego;
    std::vector<Vec2> on_opp;
    on_ego.reserve(n);
    on_opp.reserve(n);
    const Frame ego_frame(ego);
    const Frame opp_frame(opp);
    for (const Vec2& p : opp_samples) on_ego.push_back(ego_frame.project(p));
    for (const Vec2& p : ego_samples) on_opp.push_back(opp_frame.project(p));

    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& a : on_ego) {
        for (const Vec2& b : on_opp) best = std::min(best, distance(a, b));
    }
    return best;
}

namespace {

/// Projection onto `target` of the sample with the smallest radial residual.
Vec2 nearest_radial_projection(const SafetyEllipse& target, std::span<const Vec2> samples) {
    const Frame frame(target);
    double best_residual = std::numeric_limits<double>::infinity();
    Vec2 best_point = target.center;
    for (const Vec2& p : samples) {
        const Vec2 projected = frame.project(p);
        const double residual = distance(projected, p);
        if (residual < best_residual) {
            best_residual = residual;
            best_point = projected;
        }
    }
    return best_point;
}

}  // namespace

double min_gap(const SafetyEllipse& ego, const SafetyEllipse& opp, std::size_t n) {
    const auto ego_samples = sample_boundary(ego, n);
    const auto opp_samples = sample_boundary(opp, n);
    if (classify_samples(ego, ego_samples, opp, opp_samples) != Relation::Separated) {
        throw PreconditionError("min_gap requires separated ellipses");
    }
    const Vec2 on_ego = nearest_radial_projection(ego, opp_samples);
    const Vec2 on_opp = nearest_radial_projection(opp, ego_samples);
    return distance(on_ego, on_opp);
}

OverlapPolygon overlap_polygon(const SafetyEllipse& ego, const SafetyEllipse& opp, std::size_t n) {
    const auto ego_samples = sample_boundary(ego, n);
    const auto opp_samples = sample_boundary(opp, n);
    if (classify_samples(ego, ego_samples, opp, opp_samples) != Relation::Intersecting) {
        throw PreconditionError("overlap_polygon requires intersecting ellipses");
    }

    const Frame ego_frame(ego);
    const Frame opp_frame(opp);
    std::vector<Vec2> collected;
    for (const Vec2& p : opp_samples) {
        if (ego_frame.contains(p)) collected.push_back(p);
    }
    for (const Vec2& p : ego_samples) {
        if (opp_frame.contains(p)) collected.push_back(p);
    }

    OverlapPolygon poly;
    poly.collected_samples = collected.size();
    poly.vertices = deduplicate(std::move(collected));
    if (poly.vertices.empty()) return poly;

    Vec2 sum;
    for (const Vec2& v : poly.vertices) sum += v;
    poly.centroid = sum * (1.0 / static_cast<double>(poly.vertices.size()));

    struct Keyed {
        double angle;
        double radius;
        Vec2 point;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(poly.vertices.size());
    for (const Vec2& v : poly.vertices) {
        const Vec2 d = v - poly.centroid;
        keyed.push_back({std::atan2(d.y, d.x), d.norm(), v});
    }
    std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        return a.angle < b.angle || (a.angle == b.angle && a.radius < b.radius);
    });
    for (std::size_t i = 0; i < keyed.size(); ++i) poly.vertices[i] = keyed[i].point;
    return poly;
}

double signed_shoelace_area(std::span<const Vec2> vertices) {
    if (vertices.size() < 3) return 0.0;
    // Cross terms are summed in sorted order so the result does not depend on
    // which vertex the cycle starts at.
    std::vector<double> terms;
    terms.reserve(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Vec2& a = vertices[i];
        const Vec2& b = vertices[(i + 1) % vertices.size()];
        terms.push_back(a.x * b.y - a.y * b.x);
    }
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += t;
    return 0.5 * sum;
}

double shoelace_area(std::span<const Vec2> vertices) {
    return std::abs(signed_shoelace_area(vertices));
}

double shoelace_area(const OverlapPolygon& poly) {
    if (poly.degenerate()) return 0.0;
    return shoelace_area(std::span<const Vec2>(poly.vertices));
}

double overlap_area(const SafetyEllipse& ego, const SafetyEllipse& opp, std::size_t n) {
    return shoelace_area(overlap_polygon(ego, opp, n));
}

}  // namespace trajeval::geometry
