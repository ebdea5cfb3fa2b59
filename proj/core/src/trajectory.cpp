#include <trajeval/trajectory.hpp>

#include <trajeval/error.hpp>

#include <cmath>
#include <string>

namespace trajeval {

void Trajectory::validate(std::size_t min_samples) const {
    if (samples.size() < min_samples) {
        throw ValidationError("trajectory has " + std::to_string(samples.size()) +
                              " samples, at least " + std::to_string(min_samples) + " required");
    }
    if (!(dt > 0.0)) throw ValidationError("trajectory time step must be positive");
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!std::isfinite(s.t) || !std::isfinite(s.position.x) || !std::isfinite(s.position.y) ||
            !std::isfinite(s.speed) || !std::isfinite(s.heading)) {
            throw ValidationError("trajectory sample " + std::to_string(i) + " is not finite");
        }
        if (s.speed < 0.0) {
            throw ValidationError("trajectory sample " + std::to_string(i) + " has negative speed");
        }
        if (i > 0 && std::abs(s.t - samples[i - 1].t - dt) > kTimeStepTolerance) {
            throw ValidationError("trajectory sample " + std::to_string(i) +
                                  " breaks the uniform time step");
        }
    }
}

}  // namespace trajeval
