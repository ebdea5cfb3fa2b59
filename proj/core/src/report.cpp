#include <trajeval/harness.hpp>

#include <trajeval/error.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>

namespace trajeval::harness {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json num(double value) {
    if (!std::isfinite(value)) return nullptr;
    return round_for_output(value);
}

ordered_json column(const std::vector<double>& values) {
    ordered_json arr = ordered_json::array();
    for (double v : values) arr.push_back(num(v));
    return arr;
}

double read_num(const json& doc, const char* key) {
    const json& v = doc.at(key);
    if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
    return v.get<double>();
}

std::vector<double> read_column(const json& arr) {
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) out.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
    return out;
}

ordered_json criteria_json(const objective::CriteriaReport& c) {
    ordered_json j;
    j["q"] = num(c.q);
    j["t_global"] = num(c.t_global);
    j["goal_reached"] = c.goal_reached;
    j["goal_distance_m"] = num(c.goal_distance_m);
    j["c_safe"] = num(c.c_safe);
    j["c_longi"] = num(c.c_longi);
    j["c_lat"] = num(c.c_lat);
    j["worst_int"] = num(c.worst_int);
    j["worst_time"] = num(c.worst_time);
    j["terms"] = {{"time", num(c.time_term)},
                  {"safety", num(c.safety_term)},
                  {"penalty_longi", num(c.penalty_longi)},
                  {"penalty_lat", num(c.penalty_lat)}};
    return j;
}

ordered_json flags_json(const EvaluationFlags& f) {
    ordered_json j;
    j["saturated_at_zero"] = f.saturated_at_zero;
    j["saturated_at_vmax"] = f.saturated_at_vmax;
    j["end_of_path"] = f.end_of_path;
    j["unreached_goal"] = f.unreached_goal;
    j["opponent_absent"] = f.opponent_absent;
    j["penalty_saturated"] = f.penalty_saturated;
    j["degenerate_overlaps"] = f.degenerate_overlaps;
    return j;
}

std::string csv_row(std::initializer_list<double> values) {
    std::string line;
    for (double v : values) {
        if (!line.empty()) line += ',';
        line += format_number(v);
    }
    line += '\n';
    return line;
}

}  // namespace

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value == 0.0 ? 0.0 : value);
    return buf;
}

double round_for_output(double value) {
    if (!std::isfinite(value)) return value;
    return std::strtod(format_number(value).c_str(), nullptr);
}

ordered_json report_to_json(const EvaluationReport& report) {
    ordered_json j;
    j["schema_version"] = kReportSchemaVersion;
    j["criteria"] = criteria_json(report.criteria);
    j["flags"] = flags_json(report.flags);

    ordered_json summary;
    double max_int = 0.0;
    bool have = false;
    for (const auto& p : report.series.values) {
        if (!have || p.value > max_int) max_int = p.value;
        have = true;
    }
    summary["max_int"] = have ? num(max_int) : ordered_json(nullptr);
    summary["stop_duration_s"] = num(longest_stop_duration(report.trajectory));
    j["summary"] = summary;

    ordered_json series;
    std::vector<double> st, sv;
    for (const auto& p : report.series.values) {
        st.push_back(p.t);
        sv.push_back(p.value);
    }
    series["worst_index"] = report.series.worst_index;
    series["degenerate_overlaps"] = report.series.degenerate_overlaps;
    series["t"] = column(st);
    series["int_value"] = column(sv);
    j["int_series"] = series;

    j["jerk"] = {{"t", column(report.jerk.t)},
                 {"j_long", column(report.jerk.longitudinal)},
                 {"j_lat", column(report.jerk.lateral)}};

    ordered_json samples = ordered_json::array();
    for (const auto& s : report.trajectory.samples) {
        samples.push_back({{"t", num(s.t)},
                           {"x", num(s.position.x)},
                           {"y", num(s.position.y)},
                           {"v", num(s.speed)},
                           {"heading", num(s.heading)}});
    }
    j["trajectory"] = {{"dt", num(report.trajectory.dt)}, {"samples", std::move(samples)}};
    return j;
}

EvaluationReport report_from_json(const json& doc) {
    try {
        if (doc.at("schema_version").get<int>() != kReportSchemaVersion) {
            throw ValidationError("unsupported report schema version");
        }
        EvaluationReport r;
        const json& c = doc.at("criteria");
        auto& cr = r.criteria;
        cr.q = read_num(c, "q");
        cr.t_global = read_num(c, "t_global");
        cr.goal_reached = c.at("goal_reached").get<bool>();
        cr.goal_distance_m = read_num(c, "goal_distance_m");
        cr.c_safe = read_num(c, "c_safe");
        cr.c_longi = read_num(c, "c_longi");
        cr.c_lat = read_num(c, "c_lat");
        cr.worst_int = read_num(c, "worst_int");
        cr.worst_time = read_num(c, "worst_time");
        const json& terms = c.at("terms");
        cr.time_term = read_num(terms, "time");
        cr.safety_term = read_num(terms, "safety");
        cr.penalty_longi = read_num(terms, "penalty_longi");
        cr.penalty_lat = read_num(terms, "penalty_lat");

        const json& f = doc.at("flags");
        r.flags.saturated_at_zero = f.at("saturated_at_zero").get<std::size_t>();
        r.flags.saturated_at_vmax = f.at("saturated_at_vmax").get<std::size_t>();
        r.flags.end_of_path = f.at("end_of_path").get<bool>();
        r.flags.unreached_goal = f.at("unreached_goal").get<bool>();
        r.flags.opponent_absent = f.at("opponent_absent").get<bool>();
        r.flags.penalty_saturated = f.at("penalty_saturated").get<bool>();
        r.flags.degenerate_overlaps = f.at("degenerate_overlaps").get<std::size_t>();
        cr.opponent_absent = r.flags.opponent_absent;
        cr.penalty_saturated = r.flags.penalty_saturated;

        const json& s = doc.at("int_series");
        const auto st = read_column(s.at("t"));
        const auto sv = read_column(s.at("int_value"));
        if (st.size() != sv.size()) throw ValidationError("int_series columns differ in length");
        for (std::size_t i = 0; i < st.size(); ++i) r.series.values.push_back({st[i], sv[i]});
        r.series.worst_index = s.at("worst_index").get<std::size_t>();
        r.series.degenerate_overlaps = s.at("degenerate_overlaps").get<std::size_t>();

        const json& jk = doc.at("jerk");
        r.jerk.t = read_column(jk.at("t"));
        r.jerk.longitudinal = read_column(jk.at("j_long"));
        r.jerk.lateral = read_column(jk.at("j_lat"));
        if (r.jerk.t.size() != r.jerk.longitudinal.size() || r.jerk.t.size() != r.jerk.lateral.size()) {
            throw ValidationError("jerk columns differ in length");
        }

        const json& tr = doc.at("trajectory");
        r.trajectory.dt = read_num(tr, "dt");
        for (const auto& p : tr.at("samples")) {
            r.trajectory.samples.push_back(
                {read_num(p, "t"), {read_num(p, "x"), read_num(p, "y")}, read_num(p, "v"), read_num(p, "heading")});
        }
        return r;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed report: ") + e.what());
    }
}

ordered_json optimization_to_json(const optimizer::OptimizationResult& result, const optimizer::PsoConfig& cfg) {
    ordered_json j;
    j["pso"] = {{"swarm_size", cfg.swarm_size},
                {"iterations", cfg.iterations},
                {"inertia", num(cfg.inertia)},
                {"cognitive", num(cfg.cognitive)},
                {"social", num(cfg.social)},
                {"velocity_clamp", num(cfg.velocity_clamp)},
                {"seed", cfg.seed},
                {"stall_iterations", cfg.stall_iterations},
                {"stall_tolerance", num(cfg.stall_tolerance)}};
    j["best_q"] = num(result.best_q);
    j["best_candidate"] = {{"accel_knots", column(result.best_candidate.accel_knots)},
                           {"horizon_s", num(result.best_candidate.horizon_s)},
                           {"knot_dt", num(result.best_candidate.knot_dt)}};
    j["evaluations"] = result.evaluations;
    j["stopped_early"] = result.stopped_early;
    j["history"] = column(result.history);
    return j;
}

void write_text(const std::string& text, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + file.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + file.string());
}

void write_json(const ordered_json& doc, const std::filesystem::path& file) {
    write_text(doc.dump(2) + "\n", file);
}

std::vector<std::filesystem::path> emit_report(const EvaluationReport& report, ReportFormat format,
                                               const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

    if (format == ReportFormat::Json) {
        const auto file = out_dir / "report.json";
        write_json(report_to_json(report), file);
        return {file};
    }

    std::string series = "t,int_value\n";
    for (const auto& p : report.series.values) series += csv_row({p.t, p.value});
    std::string jerk = "t,j_long,j_lat\n";
    for (std::size_t i = 0; i < report.jerk.t.size(); ++i) {
        jerk += csv_row({report.jerk.t[i], report.jerk.longitudinal[i], report.jerk.lateral[i]});
    }
    std::string speed = "t,v\n";
    std::string traj = "t,x,y,v,heading\n";
    for (const auto& s : report.trajectory.samples) {
        speed += csv_row({s.t, s.speed});
        traj += csv_row({s.t, s.position.x, s.position.y, s.speed, s.heading});
    }

    std::vector<std::filesystem::path> files{out_dir / "int_series.csv", out_dir / "jerk.csv",
                                             out_dir / "speed.csv", out_dir / "trajectory.csv"};
    write_text(series, files[0]);
    write_text(jerk, files[1]);
    write_text(speed, files[2]);
    write_text(traj, files[3]);
    return files;
}

}  // namespace trajeval::harness
