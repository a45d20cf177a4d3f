#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "opsplit/core/prox_function.hpp"
#include "opsplit/core/report.hpp"
#include "opsplit/experiments/config.hpp"

namespace opsplit {

namespace fs = std::filesystem;

enum class Column { Fpr, DistSq, ObjErr, ObjErrErgodic, FeasGap, BoundFpr, BoundObjLo, BoundObjHi, BoundFeas };

inline constexpr std::array<std::string_view, 9> kColumnNames = {
    "fpr", "dist_sq", "obj_err", "obj_err_ergodic", "feas_gap", "bound_fpr", "bound_obj_lo", "bound_obj_hi", "bound_feas"};

inline std::optional<Column> parse_column(std::string_view name) {
    for (std::size_t i = 0; i < kColumnNames.size(); ++i)
        if (kColumnNames[i] == name) return static_cast<Column>(i);
    return std::nullopt;
}

// Per-iteration table with the fixed CSV schema; absent values stay empty.
class TraceTable {
public:
    explicit TraceTable(std::size_t rows = 0) { resize(rows); }

    void resize(std::size_t rows) {
        for (auto& c : cells_) c.resize(rows);
    }
    std::size_t rows() const { return cells_[0].size(); }

    void set(Column c, std::size_t k, double value) {
        require(k < rows(), ErrorKind::InvalidArgument, "trace row out of range");
        cells_[index(c)][k] = value;
    }

    // Copies series[i] into row offset + i, clipped to the table.
    void fill(Column c, const std::vector<double>& series, std::size_t offset = 0) {
        for (std::size_t i = 0; i < series.size() && offset + i < rows(); ++i) cells_[index(c)][offset + i] = series[i];
    }

    template <class Fn>
    void fill_with(Column c, Fn&& fn, std::size_t from = 0) {
        for (std::size_t k = from; k < rows(); ++k) cells_[index(c)][k] = fn(k);
    }

    const std::optional<double>& at(Column c, std::size_t k) const { return cells_[index(c)][k]; }

    bool has(Column c) const {
        for (const auto& v : cells_[index(c)])
            if (v) return true;
        return false;
    }

private:
    static std::size_t index(Column c) { return static_cast<std::size_t>(c); }
    std::array<std::vector<std::optional<double>>, kColumnNames.size()> cells_;
};

// Shortest decimal form that round-trips; identical inputs give identical text.
inline std::string format_number(double v) {
    std::array<char, 64> buffer{};
    const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), v);
    if (ec != std::errc()) return "nan";
    return std::string(buffer.data(), end);
}

inline void write_csv(const TraceTable& table, std::ostream& out) {
    out << "k";
    for (auto name : kColumnNames) out << ',' << name;
    out << '\n';
    for (std::size_t k = 0; k < table.rows(); ++k) {
        out << k;
        for (std::size_t c = 0; c < kColumnNames.size(); ++c) {
            out << ',';
            if (const auto& v = table.at(static_cast<Column>(c), k)) out << format_number(*v);
        }
        out << '\n';
    }
}

struct ExperimentResult {
    std::string name;
    std::uint64_t seed = 0;
    Json config = nullptr;
    TraceTable trace;
    std::vector<BoundReport> checks;
    Json metrics = Json::object();
    std::vector<std::string> plot_columns = {"fpr", "dist_sq", "obj_err", "feas_gap"};
    std::string error; // solver or configuration failure

    bool pass() const {
        if (!error.empty()) return false;
        for (const auto& c : checks)
            if (!c.pass()) return false;
        return true;
    }

    BoundReport& add(BoundReport r) { return checks.emplace_back(std::move(r)); }
};

namespace detail {

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json entry_json(const BoundEntry& e) {
    return {{"k", e.k},
            {"bound", number_or_null(e.bound)},
            {"measured", number_or_null(e.measured)},
            {"margin", number_or_null(e.margin)},
            {"pass", e.pass()}};
}

} // namespace detail

// Reports keep every failing entry (up to a cap), the worst entry, and an even sample of the rest.
inline Json check_json(const BoundReport& r, std::size_t sample = 256) {
    Json j;
    j["name"] = r.name();
    j["sense"] = r.sense() == BoundSense::Upper ? "upper" : "lower";
    j["pass"] = r.pass();
    j["count"] = r.entries().size();
    j["worst_margin"] = detail::number_or_null(r.worst_margin());
    j["first_violation"] = r.first_violation() ? Json(*r.first_violation()) : Json(nullptr);
    const auto& entries = r.entries();
    std::vector<bool> keep(entries.size(), false);
    const std::size_t stride = std::max<std::size_t>(1, entries.size() / sample);
    std::size_t failing = 0;
    double worst = kInfinity;
    std::size_t worst_at = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i % stride == 0 || i + 1 == entries.size()) keep[i] = true;
        if (!entries[i].pass() && failing < sample) keep[i] = true, ++failing;
        if (entries[i].margin < worst) worst = entries[i].margin, worst_at = i;
    }
    if (!entries.empty()) keep[worst_at] = true;
    Json list = Json::array();
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (keep[i]) list.push_back(detail::entry_json(entries[i]));
    j["entries"] = std::move(list);
    return j;
}

inline Json report_json(const ExperimentResult& r) {
    Json j;
    j["name"] = r.name;
    j["pass"] = r.pass();
    j["seed"] = r.seed;
    j["error"] = r.error.empty() ? Json(nullptr) : Json(r.error);
    j["config"] = r.config;
    j["metrics"] = r.metrics;
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(check_json(c));
    j["checks"] = std::move(checks);
    return j;
}

// Two whitespace-separated columns (k, value) per series, gnuplot blocks separated by
// two blank lines. Rows with no value are skipped. Returns true when an existing file
// was replaced.
inline bool emit_plot_data(const TraceTable& table, const std::vector<std::string>& columns, const fs::path& path,
                           std::ostream* notices = &std::cerr) {
    std::vector<Column> selected;
    for (const auto& name : columns) {
        const auto c = parse_column(name);
        require(c.has_value(), ErrorKind::InvalidArgument, "unknown plot column '" + name + "'");
        require(table.rows() == 0 || table.has(*c), ErrorKind::InvalidArgument,
                "column '" + name + "' has no values in this trace");
        selected.push_back(*c);
    }
    const bool existed = fs::exists(path);
    if (existed && notices) *notices << "note: overwriting " << path.string() << '\n';
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(bool(out), ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
    for (std::size_t s = 0; s < selected.size(); ++s) {
        if (s > 0) out << "\n\n";
        out << "# k " << columns[s] << '\n';
        for (std::size_t k = 0; k < table.rows(); ++k)
            if (const auto& v = table.at(selected[s], k)) out << k << ' ' << format_number(*v) << '\n';
    }
    return existed;
}

inline constexpr const char* kOutputRootVariable = "OPSPLIT_OUTPUT_ROOT";

inline fs::path output_root() {
    const char* root = std::getenv(kOutputRootVariable);
    return root && *root ? fs::path(root) : fs::path("opsplit-output");
}

struct ArtifactPaths {
    fs::path dir, trace, report, plot;
};

// Writes trace.csv, report.json and plot.dat under dir.
inline ArtifactPaths write_artifacts(const ExperimentResult& r, const fs::path& dir) {
    fs::create_directories(dir);
    ArtifactPaths p{dir, dir / "trace.csv", dir / "report.json", dir / "plot.dat"};
    {
        std::ofstream csv(p.trace, std::ios::binary | std::ios::trunc);
        write_csv(r.trace, csv);
    }
    {
        std::ofstream report(p.report, std::ios::binary | std::ios::trunc);
        report << report_json(r).dump(2) << '\n';
    }
    std::vector<std::string> columns;
    for (const auto& c : r.plot_columns)
        if (const auto col = parse_column(c); col && (r.trace.rows() == 0 || r.trace.has(*col))) columns.push_back(c);
    emit_plot_data(r.trace, columns, p.plot, nullptr);
    return p;
}

struct ReportSummary {
    struct Line {
        std::string name;
        bool pass = false;
        std::string detail;
    };
    std::vector<Line> lines;

    bool pass() const {
        if (lines.empty()) return false;
        for (const auto& l : lines)
            if (!l.pass) return false;
        return true;
    }
};

// Collects every report.json below dir, sorted by path.
inline ReportSummary summarize_reports(const fs::path& dir) {
    require(fs::is_directory(dir), ErrorKind::InvalidArgument, "'" + dir.string() + "' is not a directory");
    std::vector<fs::path> found;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().filename() == "report.json") found.push_back(e.path());
    std::sort(found.begin(), found.end());
    ReportSummary s;
    for (const auto& path : found) {
        ReportSummary::Line line;
        try {
            const Json j = parse_json_text(read_text_file(path), path.string());
            line.name = j.value("name", path.parent_path().filename().string());
            line.pass = j.value("pass", false);
            std::size_t failed = 0, total = 0;
            for (const auto& c : j.value("checks", Json::array())) {
                ++total;
                if (!c.value("pass", false)) {
                    ++failed;
                    line.detail += (line.detail.empty() ? "failed: " : ", ") + c.value("name", std::string("?"));
                }
            }
            if (line.detail.empty()) line.detail = std::to_string(total) + " checks";
            if (j.contains("error") && j["error"].is_string()) line.detail += "; error: " + j["error"].get<std::string>();
        } catch (const Error& e) {
            line.name = path.string();
            line.detail = e.what();
        }
        s.lines.push_back(std::move(line));
    }
    return s;
}

} // namespace opsplit
