#include <trajeval/path.hpp>

#include <trajeval/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace trajeval {

ReferencePath::ReferencePath(std::vector<Vec2> waypoints) : waypoints_(std::move(waypoints)) {
    if (waypoints_.size() < 2) throw ValidationError("reference path needs at least two waypoints");
    arc_.reserve(waypoints_.size());
    arc_.push_back(0.0);
    std::vector<double> segment_heading;
    for (std::size_t i = 1; i < waypoints_.size(); ++i) {
        const Vec2 d = waypoints_[i] - waypoints_[i - 1];
        const double len = d.norm();
        if (!(len > 0.0) || !std::isfinite(len)) {
            throw ValidationError("reference path waypoint " + std::to_string(i) +
                                  " repeats its predecessor");
        }
        arc_.push_back(arc_.back() + len);
        segment_heading.push_back(std::atan2(d.y, d.x));
    }
    headings_.reserve(waypoints_.size());
    headings_.push_back(segment_heading.front());
    for (std::size_t i = 1; i + 1 < waypoints_.size(); ++i) {
        const double turn = wrap_angle(segment_heading[i] - segment_heading[i - 1]);
        headings_.push_back(wrap_angle(segment_heading[i - 1] + 0.5 * turn));
    }
    headings_.push_back(segment_heading.back());
}

std::size_t ReferencePath::segment_index(double s) const {
    const auto it = std::upper_bound(arc_.begin(), arc_.end(), s);
    const auto idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - arc_.begin()));
    return std::min(idx, arc_.size() - 1) - 1;
}

Vec2 ReferencePath::position_at(double s) const {
    s = std::clamp(s, 0.0, length());
    const std::size_t i = segment_index(s);
    const double f = (s - arc_[i]) / (arc_[i + 1] - arc_[i]);
    return waypoints_[i] + (waypoints_[i + 1] - waypoints_[i]) * f;
}

double ReferencePath::heading_at(double s) const {
    s = std::clamp(s, 0.0, length());
    const std::size_t i = segment_index(s);
    const double f = (s - arc_[i]) / (arc_[i + 1] - arc_[i]);
    const double turn = wrap_angle(headings_[i + 1] - headings_[i]);
    if (turn == 0.0) return headings_[i];
    return wrap_angle(headings_[i] + f * turn);
}

}  // namespace trajeval
