// trajeval: evaluate, optimize and compare ego maneuvers against a scenario.

#include <trajeval/error.hpp>
#include <trajeval/harness.hpp>
#include <trajeval/metrics.hpp>
#include <trajeval/objective.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
namespace th = trajeval::harness;
using nlohmann::ordered_json;

namespace {

enum ExitCode : int { kOk = 0, kInternal = 1, kValidation = 2, kIo = 3, kUnreachedGoal = 4 };

th::ReportFormat report_format(const std::string& name) {
    return name == "csv" ? th::ReportFormat::CsvBundle : th::ReportFormat::Json;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw trajeval::IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

double max_int(const trajeval::metrics::InteractionSeries& s) {
    return s.empty() ? trajeval::metrics::kAbsentOpponentInteraction : s.worst_value();
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return xs;
}

struct EvaluateArgs {
    std::string scenario, trajectory, out, format = "json";
};

int run_evaluate(const EvaluateArgs& a) {
    const auto scenario = th::load_scenario(a.scenario);
    const fs::path traj_path = a.trajectory;
    const auto ego = th::load_trajectory(traj_path, th::trajectory_format_from_path(traj_path));
    const auto report = th::evaluate(scenario, ego);
    for (const auto& f : th::emit_report(report, report_format(a.format), a.out)) std::cout << f.string() << '\n';
    if (report.flags.unreached_goal) {
        std::cerr << "trajeval: ego never enters the goal radius\n";
        return kUnreachedGoal;
    }
    return kOk;
}

struct OptimizeArgs {
    std::string scenario, out, format = "json";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> iterations, swarm, workers;
    bool baseline = false;
};

int run_optimize(const OptimizeArgs& a) {
    auto scenario = th::load_scenario(a.scenario);
    if (a.seed) scenario.pso.seed = *a.seed;
    if (a.iterations) scenario.pso.iterations = *a.iterations;
    if (a.swarm) scenario.pso.swarm_size = *a.swarm;
    if (a.workers) scenario.pso.workers = *a.workers;
    scenario.pso.validate();

    const fs::path out = a.out;
    ensure_dir(out);
    const auto outcome = th::run_optimize(scenario);

    ordered_json doc;
    doc["schema_version"] = th::kReportSchemaVersion;
    doc["scenario"] = fs::path(a.scenario).filename().string();
    doc["optimization"] = th::optimization_to_json(outcome.result, scenario.pso);
    doc["optimized"] = th::report_to_json(outcome.optimized);
    if (a.baseline) doc["baseline"] = th::report_to_json(outcome.baseline);
    const fs::path file = out / "optimize.json";
    th::write_json(doc, file);
    std::cout << file.string() << '\n';

    if (report_format(a.format) == th::ReportFormat::CsvBundle) {
        for (const auto& f : th::emit_report(outcome.optimized, th::ReportFormat::CsvBundle, out / "optimized")) {
            std::cout << f.string() << '\n';
        }
        if (a.baseline) {
            for (const auto& f : th::emit_report(outcome.baseline, th::ReportFormat::CsvBundle, out / "baseline")) {
                std::cout << f.string() << '\n';
            }
        }
    }
    return kOk;
}

struct CompareArgs {
    std::string scenario, out;
    std::vector<std::string> trajectories;
};

int run_compare(const CompareArgs& a) {
    const auto scenario = th::load_scenario(a.scenario);
    struct Row {
        std::string file;
        th::EvaluationReport report;
    };
    std::vector<Row> rows;
    for (const auto& t : a.trajectories) {
        const fs::path p = t;
        rows.push_back({t, th::evaluate(scenario, th::load_trajectory(p, th::trajectory_format_from_path(p)))});
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& l, const Row& r) { return l.report.criteria.q < r.report.criteria.q; });

    ordered_json ranking = ordered_json::array();
    std::string csv = "rank,file,q,t_global,c_safe,c_longi,c_lat,max_int,goal_reached\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& c = rows[i].report.criteria;
        const double mi = max_int(rows[i].report.series);
        ordered_json entry;
        entry["rank"] = i + 1;
        entry["file"] = rows[i].file;
        entry["q"] = th::round_for_output(c.q);
        entry["t_global"] = th::round_for_output(c.t_global);
        entry["c_safe"] = th::round_for_output(c.c_safe);
        entry["c_longi"] = th::round_for_output(c.c_longi);
        entry["c_lat"] = th::round_for_output(c.c_lat);
        entry["max_int"] = th::round_for_output(mi);
        entry["goal_reached"] = c.goal_reached;
        ranking.push_back(entry);
        csv += std::to_string(i + 1) + "," + rows[i].file + "," + th::format_number(c.q) + "," +
               th::format_number(c.t_global) + "," + th::format_number(c.c_safe) + "," +
               th::format_number(c.c_longi) + "," + th::format_number(c.c_lat) + "," + th::format_number(mi) + "," +
               (c.goal_reached ? "true" : "false") + "\n";
    }
    const fs::path out = a.out;
    ensure_dir(out);
    ordered_json doc;
    doc["schema_version"] = th::kReportSchemaVersion;
    doc["ranking"] = ranking;
    th::write_json(doc, out / "compare.json");
    th::write_text(csv, out / "compare.csv");
    std::cout << (out / "compare.json").string() << '\n' << (out / "compare.csv").string() << '\n';
    return kOk;
}

struct SweepBetaArgs {
    double m = 1.0, p = 5.0, x_min = -10.0, x_max = 2.0;
    std::vector<double> alpha{0.2, 0.3, 0.5, 0.9, 8.0};
    std::size_t samples = 241;
    std::string out;
};

int run_sweep_beta(const SweepBetaArgs& a) {
    std::vector<trajeval::metrics::ShapingParams> params;
    std::string csv = "x";
    for (double alpha : a.alpha) {
        params.push_back({a.m, a.p, alpha});
        params.back().validate();
        csv += ",alpha_" + th::format_number(alpha);
    }
    csv += '\n';
    for (double x : linspace(a.x_min, a.x_max, a.samples)) {
        csv += th::format_number(x);
        for (const auto& sp : params) csv += "," + th::format_number(trajeval::metrics::shaping_beta(x, sp));
        csv += '\n';
    }
    const fs::path out = a.out;
    ensure_dir(out);
    th::write_text(csv, out / "beta_sweep.csv");
    std::cout << (out / "beta_sweep.csv").string() << '\n';
    return kOk;
}

struct SweepPsiArgs {
    std::vector<double> m{1.0}, p{5.0};
    double x_min = -0.5, x_max = 1.0;
    std::size_t samples = 151;
    std::string out;
};

int run_sweep_psi(const SweepPsiArgs& a) {
    std::vector<trajeval::objective::PenaltyParams> params;
    std::string csv = "x";
    for (double m : a.m) {
        for (double p : a.p) {
            params.push_back({m, p});
            params.back().validate();
            csv += ",m_" + th::format_number(m) + "_p_" + th::format_number(p);
        }
    }
    csv += '\n';
    for (double x : linspace(a.x_min, a.x_max, a.samples)) {
        csv += th::format_number(x);
        for (const auto& pp : params) csv += "," + th::format_number(trajeval::objective::penalty_psi(x, pp.m, pp.p));
        csv += '\n';
    }
    const fs::path out = a.out;
    ensure_dir(out);
    th::write_text(csv, out / "psi_sweep.csv");
    std::cout << (out / "psi_sweep.csv").string() << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Evaluate and optimize ego maneuvers at an unsignalized crossing"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "trajeval 0.1.0");

    const auto formats = CLI::IsMember({"json", "csv"});

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "Score a recorded or generated ego trajectory");
    evaluate->add_option("--scenario", ev.scenario, "Scenario JSON file")->required();
    evaluate->add_option("--trajectory", ev.trajectory, "Ego trajectory (.csv or .json)")->required();
    evaluate->add_option("--out", ev.out, "Output directory")->required();
    evaluate->add_option("--format", ev.format, "Report format")->check(formats)->capture_default_str();

    OptimizeArgs op;
    auto* optimize = app.add_subcommand("optimize", "Search acceleration knots with the seeded swarm");
    optimize->add_option("--scenario", op.scenario, "Scenario JSON file")->required();
    optimize->add_option("--out", op.out, "Output directory")->required();
    optimize->add_option("--seed", op.seed, "Override the scenario PSO seed");
    optimize->add_option("--iterations", op.iterations, "Override the PSO iteration count");
    optimize->add_option("--swarm", op.swarm, "Override the PSO swarm size");
    optimize->add_option("--workers", op.workers, "Evaluation threads (results do not depend on it)");
    optimize->add_flag("--baseline", op.baseline, "Also emit the constant-speed baseline report");
    optimize->add_option("--format", op.format, "Also write CSV bundles when 'csv'")->check(formats)->capture_default_str();

    CompareArgs cp;
    auto* compare = app.add_subcommand("compare", "Rank several ego trajectories by Q");
    compare->add_option("--scenario", cp.scenario, "Scenario JSON file")->required();
    compare->add_option("--trajectory", cp.trajectories, "Ego trajectories")->required();
    compare->add_option("--out", cp.out, "Output directory")->required();

    SweepBetaArgs sb;
    auto* sweep_beta = app.add_subcommand("sweep-beta", "Tabulate the safety shaping curve");
    sweep_beta->add_option("--m", sb.m, "Value at zero")->capture_default_str();
    sweep_beta->add_option("--p", sb.p, "Slope at zero")->capture_default_str();
    sweep_beta->add_option("--alpha", sb.alpha, "Comma-separated decay exponents")->delimiter(',');
    sweep_beta->add_option("--x-min", sb.x_min)->capture_default_str();
    sweep_beta->add_option("--x-max", sb.x_max)->capture_default_str();
    sweep_beta->add_option("--samples", sb.samples)->check(CLI::Range(2, 100000))->capture_default_str();
    sweep_beta->add_option("--out", sb.out, "Output directory")->required();

    SweepPsiArgs sp;
    auto* sweep_psi = app.add_subcommand("sweep-psi", "Tabulate the comfort penalty curve");
    sweep_psi->add_option("--m", sp.m, "Comma-separated M values")->delimiter(',');
    sweep_psi->add_option("--p", sp.p, "Comma-separated p values")->delimiter(',');
    sweep_psi->add_option("--x-min", sp.x_min)->capture_default_str();
    sweep_psi->add_option("--x-max", sp.x_max)->capture_default_str();
    sweep_psi->add_option("--samples", sp.samples)->check(CLI::Range(2, 100000))->capture_default_str();
    sweep_psi->add_option("--out", sp.out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*evaluate) return run_evaluate(ev);
        if (*optimize) return run_optimize(op);
        if (*compare) return run_compare(cp);
        if (*sweep_beta) return run_sweep_beta(sb);
        if (*sweep_psi) return run_sweep_psi(sp);
    } catch (const trajeval::ValidationError& e) {
        std::cerr << "trajeval: invalid input: " << e.what() << '\n';
        return kValidation;
    } catch (const trajeval::IoError& e) {
        std::cerr << "trajeval: I/O error: " << e.what() << '\n';
        return kIo;
    } catch (const trajeval::UnreachedGoalError& e) {
        std::cerr << "trajeval: " << e.what() << '\n';
        return kUnreachedGoal;
    } catch (const std::exception& e) {
        std::cerr << "trajeval: internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kInternal;
}
