#include <trajeval/harness.hpp>

#include <trajeval/error.hpp>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace trajeval::harness {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ValidationError("scenario " + where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing field '") + key + "'");
    return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(where + "." + key, "expected a finite number");
    return d;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    return number(obj, key, where);
}

std::size_t count_or(const json& obj, const char* key, std::size_t fallback, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        fail(where + "." + key, "expected a non-negative integer");
    }
    return v.get<std::size_t>();
}

Vec2 point(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        fail(where, "expected a point [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

ReferencePath path_from(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of points");
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < v.size(); ++i) pts.push_back(point(v[i], where + "[" + std::to_string(i) + "]"));
    return ReferencePath(std::move(pts));
}

geometry::VehicleFootprint footprint_from(const json& v, const std::string& where) {
    geometry::VehicleFootprint fp;
    fp.length_m = number(v, "length_m", where);
    fp.width_m = number(v, "width_m", where);
    return fp;
}

std::size_t default_boundary_samples() {
    const char* env = std::getenv(kBoundarySamplesEnv);
    if (env == nullptr || *env == '\0') return geometry::kDefaultBoundarySamples;
    errno = 0;
    char* end = nullptr;
    const long long n = std::strtoll(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0' || n <= 0) {
        throw ValidationError(std::string(kBoundarySamplesEnv) + " must be a positive integer, got '" + env + "'");
    }
    return static_cast<std::size_t>(n);
}

}  // namespace

Trajectory constant_speed_trajectory(const ReferencePath& path, double start_s, double speed, double dt,
                                     double horizon_s) {
    if (!(speed >= 0.0)) throw ValidationError("opponent speed must be non-negative");
    Trajectory traj;
    traj.dt = dt;
    const auto steps = std::llround(horizon_s / dt);
    for (long long i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double s = start_s + speed * t;
        if (s > path.length()) break;
        traj.samples.push_back({t, path.position_at(s), speed, path.heading_at(s)});
    }
    return traj;
}

ScenarioConfig parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
    if (!doc.is_object()) fail("document", "expected an object");
    ScenarioConfig cfg;
    const json& version = require(doc, "schema_version", "document");
    if (!version.is_number_integer() || version.get<int>() != kScenarioSchemaVersion) {
        fail("schema_version", "unsupported version (expected " + std::to_string(kScenarioSchemaVersion) + ")");
    }
    cfg.schema_version = version.get<int>();
    auto& problem = cfg.problem;

    const json sim = doc.value("simulation", json::object());
    problem.dt = number_or(sim, "dt", 0.1, "simulation");
    problem.horizon_s = number_or(sim, "horizon_s", 15.0, "simulation");
    problem.knots = count_or(sim, "knots", 10, "simulation");

    auto& params = problem.params;
    const json safety = doc.value("safety", json::object());
    params.safety.ttc_threshold_s = number_or(safety, "ttc_threshold_s", 2.0, "safety");
    params.safety.lateral_margin_m = number_or(safety, "lateral_margin_m", 0.5, "safety");
    params.safety.boundary_samples = count_or(safety, "boundary_samples", default_boundary_samples(), "safety");

    const json& ego = require(doc, "ego", "document");
    problem.footprint = footprint_from(require(ego, "footprint", "ego"), "ego.footprint");
    problem.path = path_from(require(ego, "path", "ego"), "ego.path");
    const json& start = require(ego, "start", "ego");
    problem.start.s = number_or(start, "s", 0.0, "ego.start");
    problem.start.v = number(start, "v", "ego.start");
    const json& limits = require(ego, "limits", "ego");
    problem.limits.a_min = number(limits, "a_min", "ego.limits");
    problem.limits.a_max = number(limits, "a_max", "ego.limits");
    problem.limits.v_max = number(limits, "v_max", "ego.limits");
    const json& goal = require(ego, "goal", "ego");
    if (goal.contains("point")) {
        params.goal = point(goal.at("point"), "ego.goal.point");
    } else {
        params.goal = problem.path.position_at(number(goal, "s", "ego.goal"));
    }
    params.goal_radius_m = number_or(goal, "radius_m", 1.0, "ego.goal");

    if (doc.contains("opponent") && !doc.at("opponent").is_null()) {
        const json& opp = doc.at("opponent");
        objective::Opponent opponent;
        opponent.footprint = footprint_from(require(opp, "footprint", "opponent"), "opponent.footprint");
        const json& src = require(opp, "trajectory", "opponent");
        const std::string kind = src.value("source", std::string{});
        if (kind == "constant_speed") {
            const ReferencePath opp_path = path_from(require(src, "path", "opponent.trajectory"), "opponent.trajectory.path");
            opponent.trajectory = constant_speed_trajectory(opp_path, number_or(src, "start_s", 0.0, "opponent.trajectory"),
                                                            number(src, "speed", "opponent.trajectory"), problem.dt,
                                                            problem.horizon_s);
        } else if (kind == "file") {
            const json& file = require(src, "file", "opponent.trajectory");
            if (!file.is_string()) fail("opponent.trajectory.file", "expected a path string");
            std::filesystem::path p = file.get<std::string>();
            if (p.is_relative()) p = base_dir / p;
            const TrajectoryFormat fmt = src.contains("format")
                                             ? (src.at("format") == "json" ? TrajectoryFormat::Json : TrajectoryFormat::Csv)
                                             : trajectory_format_from_path(p);
            opponent.trajectory = load_trajectory(p, fmt);
        } else {
            fail("opponent.trajectory.source", "expected 'constant_speed' or 'file'");
        }
        problem.opponent = std::move(opponent);
    }

    const json objective = doc.value("objective", json::object());
    params.w_time = number_or(objective, "w_time", 1.0, "objective");
    params.w_safe = number_or(objective, "w_safe", 1.0, "objective");
    params.interaction_scale = number_or(objective, "interaction_scale", 1.0, "objective");
    const json shaping = objective.value("shaping", json::object());
    params.shaping.m_cap = number_or(shaping, "m", 1.0, "objective.shaping");
    params.shaping.slope = number_or(shaping, "p", 5.0, "objective.shaping");
    params.shaping.alpha = number_or(shaping, "alpha", 0.5, "objective.shaping");
    const json penalties = objective.value("penalties", json::object());
    const json longi = penalties.value("longitudinal", json::object());
    const json lat = penalties.value("lateral", json::object());
    params.longitudinal_penalty = {number_or(longi, "m", 1.0, "objective.penalties.longitudinal"),
                                   number_or(longi, "p", 5.0, "objective.penalties.longitudinal")};
    params.lateral_penalty = {number_or(lat, "m", 1.0, "objective.penalties.lateral"),
                              number_or(lat, "p", 5.0, "objective.penalties.lateral")};
    const json comfort = objective.value("comfort", json::object());
    params.thresholds.tau_longi = number_or(comfort, "tau_longi", 0.9, "objective.comfort");
    params.thresholds.tau_lat = number_or(comfort, "tau_lat", 0.9, "objective.comfort");

    const json pso = doc.value("pso", json::object());
    auto& pc = cfg.pso;
    pc.swarm_size = count_or(pso, "swarm_size", pc.swarm_size, "pso");
    pc.iterations = count_or(pso, "iterations", pc.iterations, "pso");
    pc.inertia = number_or(pso, "inertia", pc.inertia, "pso");
    pc.cognitive = number_or(pso, "cognitive", pc.cognitive, "pso");
    pc.social = number_or(pso, "social", pc.social, "pso");
    pc.velocity_clamp = number_or(pso, "velocity_clamp", pc.velocity_clamp, "pso");
    pc.seed = count_or(pso, "seed", pc.seed, "pso");
    pc.stall_iterations = count_or(pso, "stall_iterations", pc.stall_iterations, "pso");
    pc.stall_tolerance = number_or(pso, "stall_tolerance", pc.stall_tolerance, "pso");
    pc.workers = count_or(pso, "workers", pc.workers, "pso");

    problem.validate();
    pc.validate();
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open scenario file " + file.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("scenario file " + file.string() + " is not valid JSON: " + e.what());
    }
    ScenarioConfig cfg = parse_scenario(doc, file.parent_path());
    cfg.source = file;
    return cfg;
}

}  // namespace trajeval::harness
