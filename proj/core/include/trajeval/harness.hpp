#pragma once
/**
 * @file  harness.hpp
 * @brief Scenario files, trajectory ingestion, evaluation/optimization entry
 *        points and report emission.
 *
 * Units everywhere: seconds, meters, radians.
 */

#include <trajeval/objective.hpp>
#include <trajeval/optimizer.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace trajeval::harness {

inline constexpr int kScenarioSchemaVersion = 1;
inline constexpr int kReportSchemaVersion = 1;

/// Overrides the boundary sample count for scenarios that do not set one.
inline constexpr const char* kBoundarySamplesEnv = "TRAJEVAL_BOUNDARY_SAMPLES";

enum class TrajectoryFormat { Csv, Json };
enum class ReportFormat { Json, CsvBundle };

struct ScenarioConfig {
    int schema_version = kScenarioSchemaVersion;
    objective::ManeuverProblem problem;
    optimizer::PsoConfig pso;
    std::filesystem::path source;
};

struct EvaluationFlags {
    std::size_t saturated_at_zero = 0;
    std::size_t saturated_at_vmax = 0;
    bool end_of_path = false;
    bool unreached_goal = false;
    bool opponent_absent = false;
    bool penalty_saturated = false;
    std::size_t degenerate_overlaps = 0;
};

struct EvaluationReport {
    objective::CriteriaReport criteria;
    metrics::InteractionSeries series;
    metrics::JerkProfile jerk;
    Trajectory trajectory;
    EvaluationFlags flags;
};

struct OptimizeOutcome {
    optimizer::OptimizationResult result;
    EvaluationReport optimized;
    EvaluationReport baseline;
};

/// Parses a scenario document. Relative trajectory files resolve against
/// `base_dir`. Throws ValidationError on schema or invariant violations and
/// IoError when a referenced file cannot be read.
ScenarioConfig parse_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir);
ScenarioConfig load_scenario(const std::filesystem::path& file);

/// Opponent moving at constant speed along a polyline, sampled on the
/// simulation grid until the horizon or the end of the polyline.
Trajectory constant_speed_trajectory(const ReferencePath& path, double start_s, double speed,
                                     double dt, double horizon_s);

TrajectoryFormat trajectory_format_from_path(const std::filesystem::path& file);

/// Reads columns t, x, y and optional v (alias speed) and heading. Missing
/// speed and heading are derived by central differences of position; a
/// non-uniform time column is resampled onto a uniform grid.
Trajectory load_trajectory(const std::filesystem::path& file, TrajectoryFormat format);
Trajectory parse_trajectory_csv(const std::string& text);
Trajectory parse_trajectory_json(const nlohmann::json& doc);

/// Scores a given ego trajectory against the scenario's opponent and goal.
EvaluationReport evaluate(const ScenarioConfig& scenario, const Trajectory& ego);

/// Integrates and scores one acceleration-knot candidate.
EvaluationReport evaluate_candidate(const ScenarioConfig& scenario,
                                    const objective::ManeuverCandidate& candidate);

/// Ego holding its start speed with no decision making.
EvaluationReport evaluate_baseline(const ScenarioConfig& scenario);

OptimizeOutcome run_optimize(const ScenarioConfig& scenario);

/// Longest run of consecutive samples with zero speed, measured from the
/// first to the last stationary sample. Zero when no two adjacent samples
/// are stationary.
double longest_stop_duration(const Trajectory& traj);

/// Fixed 12-significant-digit rendering used by every emitted number.
std::string format_number(double value);
/// `value` after a round trip through format_number().
double round_for_output(double value);

nlohmann::ordered_json report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const nlohmann::json& doc);
nlohmann::ordered_json optimization_to_json(const optimizer::OptimizationResult& result,
                                            const optimizer::PsoConfig& cfg);

/// Writes report.json, or int_series.csv / jerk.csv / speed.csv /
/// trajectory.csv, into `out_dir` (created if needed). Returns the paths.
std::vector<std::filesystem::path> emit_report(const EvaluationReport& report, ReportFormat format,
                                               const std::filesystem::path& out_dir);

/// Writes `doc` with two-space indentation and a trailing newline.
void write_json(const nlohmann::ordered_json& doc, const std::filesystem::path& file);
void write_text(const std::string& text, const std::filesystem::path& file);

}  // namespace trajeval::harness
