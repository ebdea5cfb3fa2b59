#include <trajeval/harness.hpp>

#include <trajeval/error.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

namespace trajeval::harness {

namespace {

using nlohmann::json;

constexpr double kResampleTolerance = 1e-6;

// Columns as read, before derivation and resampling.
struct RawTrack {
    std::vector<double> t, x, y;
    std::optional<std::vector<double>> v, heading;
    std::vector<std::size_t> rows;  // source row of each entry, for messages
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

[[noreturn]] void cell_error(std::size_t row, std::string_view column, const std::string& what) {
    throw ValidationError("trajectory row " + std::to_string(row) + ", column '" + std::string(column) + "': " + what);
}

double parse_cell(std::string_view text, std::size_t row, std::string_view column) {
    if (text.empty()) cell_error(row, column, "empty cell");
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        cell_error(row, column, "cannot parse '" + std::string(text) + "' as a number");
    }
    if (!std::isfinite(value)) cell_error(row, column, "value is not finite");
    return value;
}

std::string canonical_column(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "speed") return "v";
    if (s == "yaw" || s == "theta") return "heading";
    return s;
}

// Central differences in the interior, one-sided at the ends. Works on
// non-uniform time stamps.
std::vector<double> derive_speed(const RawTrack& r) {
    const std::size_t n = r.t.size();
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i == 0 ? 0 : i - 1;
        const std::size_t b = i + 1 == n ? n - 1 : i + 1;
        v[i] = std::hypot(r.x[b] - r.x[a], r.y[b] - r.y[a]) / (r.t[b] - r.t[a]);
    }
    return v;
}

std::vector<double> unwrap(std::vector<double> angles) {
    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    double shift = 0.0;
    for (std::size_t i = 1; i < angles.size(); ++i) {
        const double raw = angles[i];
        const double step = raw + shift - angles[i - 1];
        if (std::abs(step) > std::numbers::pi) shift -= kTwoPi * std::round(step / kTwoPi);
        angles[i] = raw + shift;
    }
    return angles;
}

std::vector<double> derive_heading(const RawTrack& r) {
    const std::size_t n = r.t.size();
    std::vector<double> h(n, 0.0);
    std::optional<std::size_t> first_moving;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i == 0 ? 0 : i - 1;
        const std::size_t b = i + 1 == n ? n - 1 : i + 1;
        const double dx = r.x[b] - r.x[a];
        const double dy = r.y[b] - r.y[a];
        if (dx != 0.0 || dy != 0.0) {
            h[i] = std::atan2(dy, dx);
            if (!first_moving) first_moving = i;
        } else if (first_moving) {
            h[i] = h[i - 1];  // stationary: keep the previous orientation
        }
    }
    if (first_moving) std::fill(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(*first_moving), h[*first_moving]);
    return unwrap(std::move(h));
}

double interpolate(const std::vector<double>& t, const std::vector<double>& f, double at) {
    const auto it = std::upper_bound(t.begin(), t.end(), at);
    if (it == t.begin()) return f.front();
    if (it == t.end()) return f.back();
    const auto k = static_cast<std::size_t>(it - t.begin());
    const double w = (at - t[k - 1]) / (t[k] - t[k - 1]);
    return f[k - 1] + w * (f[k] - f[k - 1]);
}

Trajectory finalize(RawTrack r) {
    const std::size_t n = r.t.size();
    if (n < 3) throw ValidationError("trajectory is too short: " + std::to_string(n) + " rows, at least 3 required");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(r.t[i] > r.t[i - 1])) {
            throw ValidationError("trajectory time column is not strictly increasing at row " +
                                  std::to_string(r.rows[i]));
        }
    }
    std::vector<double> v = r.v ? *r.v : derive_speed(r);
    std::vector<double> heading = r.heading ? *r.heading : derive_heading(r);
    for (std::size_t i = 0; i < n; ++i) {
        if (v[i] < 0.0) cell_error(r.rows[i], "v", "speed must be non-negative");
    }

    const double t0 = r.t.front();
    const double dt = (r.t.back() - t0) / static_cast<double>(n - 1);
    double deviation = 0.0;
    for (std::size_t i = 1; i < n; ++i) deviation = std::max(deviation, std::abs((r.t[i] - r.t[i - 1]) - dt));

    Trajectory traj;
    traj.dt = dt;
    traj.samples.resize(n);
    if (deviation > kResampleTolerance) {
        const std::vector<double> continuous = unwrap(heading);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = k + 1 == n ? r.t.back() : t0 + static_cast<double>(k) * dt;
            traj.samples[k] = {t,
                               {interpolate(r.t, r.x, t), interpolate(r.t, r.y, t)},
                               interpolate(r.t, v, t),
                               interpolate(r.t, continuous, t)};
        }
    } else {
        // Jitter within tolerance: keep values, place stamps on the grid.
        for (std::size_t k = 0; k < n; ++k) {
            const double t = deviation > kTimeStepTolerance ? t0 + static_cast<double>(k) * dt : r.t[k];
            traj.samples[k] = {t, {r.x[k], r.y[k]}, v[k], heading[k]};
        }
    }
    traj.validate();
    return traj;
}

}  // namespace

TrajectoryFormat trajectory_format_from_path(const std::filesystem::path& file) {
    std::string ext = file.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".csv") return TrajectoryFormat::Csv;
    if (ext == ".json") return TrajectoryFormat::Json;
    throw ValidationError("cannot infer trajectory format from extension of " + file.string());
}

Trajectory parse_trajectory_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t row = 0;
    std::vector<std::string> columns;
    while (std::getline(in, line)) {
        ++row;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        for (auto c : split(t)) columns.push_back(canonical_column(c));
        break;
    }
    if (columns.empty()) throw ValidationError("trajectory CSV has no header row");

    auto index_of = [&](const char* name) -> std::optional<std::size_t> {
        const auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end()) return std::nullopt;
        return static_cast<std::size_t>(it - columns.begin());
    };
    const auto it_t = index_of("t");
    const auto it_x = index_of("x");
    const auto it_y = index_of("y");
    if (!it_t || !it_x || !it_y) throw ValidationError("trajectory CSV requires columns t, x, y");
    const auto it_v = index_of("v");
    const auto it_h = index_of("heading");

    RawTrack r;
    if (it_v) r.v.emplace();
    if (it_h) r.heading.emplace();
    while (std::getline(in, line)) {
        ++row;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto cells = split(t);
        if (cells.size() != columns.size()) {
            throw ValidationError("trajectory row " + std::to_string(row) + ": expected " +
                                  std::to_string(columns.size()) + " cells, found " + std::to_string(cells.size()));
        }
        r.rows.push_back(row);
        r.t.push_back(parse_cell(cells[*it_t], row, "t"));
        r.x.push_back(parse_cell(cells[*it_x], row, "x"));
        r.y.push_back(parse_cell(cells[*it_y], row, "y"));
        if (it_v) r.v->push_back(parse_cell(cells[*it_v], row, "v"));
        if (it_h) r.heading->push_back(parse_cell(cells[*it_h], row, "heading"));
    }
    return finalize(std::move(r));
}

Trajectory parse_trajectory_json(const json& doc) {
    const json* samples = &doc;
    if (doc.is_object()) {
        if (!doc.contains("samples")) throw ValidationError("trajectory JSON requires a 'samples' array");
        samples = &doc.at("samples");
    }
    if (!samples->is_array()) throw ValidationError("trajectory JSON 'samples' must be an array");

    RawTrack r;
    bool has_v = true;
    bool has_h = true;
    for (const auto& s : *samples) {
        has_v = has_v && s.is_object() && (s.contains("v") || s.contains("speed"));
        has_h = has_h && s.is_object() && s.contains("heading");
    }
    if (has_v) r.v.emplace();
    if (has_h) r.heading.emplace();

    std::size_t row = 0;
    for (const auto& s : *samples) {
        ++row;
        if (!s.is_object()) throw ValidationError("trajectory sample " + std::to_string(row) + " is not an object");
        auto field = [&](const char* key) {
            if (!s.contains(key)) cell_error(row, key, "missing");
            const json& v = s.at(key);
            if (!v.is_number()) cell_error(row, key, "not a number");
            const double d = v.get<double>();
            if (!std::isfinite(d)) cell_error(row, key, "value is not finite");
            return d;
        };
        r.rows.push_back(row);
        r.t.push_back(field("t"));
        r.x.push_back(field("x"));
        r.y.push_back(field("y"));
        if (has_v) r.v->push_back(field(s.contains("v") ? "v" : "speed"));
        if (has_h) r.heading->push_back(field("heading"));
    }
    return finalize(std::move(r));
}

Trajectory load_trajectory(const std::filesystem::path& file, TrajectoryFormat format) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open trajectory file " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in && !in.eof()) throw IoError("failed reading trajectory file " + file.string());
    try {
        if (format == TrajectoryFormat::Csv) return parse_trajectory_csv(buf.str());
        json doc;
        try {
            doc = json::parse(buf.str());
        } catch (const json::parse_error& e) {
            throw ValidationError(std::string("not valid JSON: ") + e.what());
        }
        return parse_trajectory_json(doc);
    } catch (const ValidationError& e) {
        throw ValidationError(file.string() + ": " + e.what());
    }
}

}  // namespace trajeval::harness
