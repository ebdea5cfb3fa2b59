#pragma once

#include <trajeval/vec2.hpp>

#include <cstddef>
#include <vector>

namespace trajeval {

/// Consecutive sample times may deviate from the nominal step by this much.
inline constexpr double kTimeStepTolerance = 1e-9;

struct TrajectorySample {
    double t = 0.0;
    Vec2 position;
    double speed = 0.0;
    /// Orientation of the velocity vector, radians.
    double heading = 0.0;
};

/// Uniformly sampled kinematic history of one vehicle.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    double dt = 0.1;

    [[nodiscard]] std::size_t size() const { return samples.size(); }
    [[nodiscard]] bool empty() const { return samples.empty(); }
    [[nodiscard]] double start_time() const { return samples.front().t; }
    [[nodiscard]] double end_time() const { return samples.back().t; }

    /// Throws ValidationError unless there are at least `min_samples` samples,
    /// dt > 0, speeds are non-negative and times advance by dt.
    void validate(std::size_t min_samples = 3) const;
};

}  // namespace trajeval
