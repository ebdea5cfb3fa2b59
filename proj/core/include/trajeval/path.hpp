#pragma once

#include <trajeval/vec2.hpp>

#include <vector>

namespace trajeval {

/// Polyline parameterized by arc length. Headings are stored per waypoint
/// (bisector of the adjacent segments at interior vertices) and interpolated
/// linearly in between, so curved paths given as dense polylines produce a
/// continuous heading.
class ReferencePath {
public:
    /// Throws ValidationError for fewer than two waypoints or repeated
    /// consecutive waypoints.
    explicit ReferencePath(std::vector<Vec2> waypoints);

    [[nodiscard]] double length() const { return arc_.back(); }
    [[nodiscard]] const std::vector<Vec2>& waypoints() const { return waypoints_; }
    [[nodiscard]] const std::vector<double>& arc_lengths() const { return arc_; }
    [[nodiscard]] const std::vector<double>& headings() const { return headings_; }

    /// Position at arc length `s`, clamped to [0, length()].
    [[nodiscard]] Vec2 position_at(double s) const;
    [[nodiscard]] double heading_at(double s) const;

private:
    [[nodiscard]] std::size_t segment_index(double s) const;

    std::vector<Vec2> waypoints_;
    std::vector<double> arc_;
    std::vector<double> headings_;
};

}  // namespace trajeval
