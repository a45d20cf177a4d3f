// opsplit command-line front end.
//
//   opsplit_cli run <config.json>     run one experiment and write its artifacts
//   opsplit_cli reproduce <name>...   run registry entries
//   opsplit_cli list [--problems]     show the registry (or the problem catalog)
//   opsplit_cli report <dir>          summarize every report.json below dir
//
// Artifacts go under $OPSPLIT_OUTPUT_ROOT (default ./opsplit-output). The exit code
// is 0 iff every check passed, 1 on a failed check, 2 on a usage or config error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "opsplit/experiments/registry.hpp"

namespace {

using namespace opsplit;

constexpr int kFailed = 1;
constexpr int kUsage = 2;

void print_checks(const ExperimentResult& r) {
    for (const auto& c : r.checks) {
        std::cout << "  " << (c.pass() ? "pass" : "FAIL") << "  " << c.name() << "  (" << c.entries().size()
                  << " entries, worst margin " << format_number(c.worst_margin());
        if (auto k = c.first_violation()) std::cout << ", first violation at k=" << *k;
        std::cout << ")\n";
    }
    if (!r.error.empty()) std::cout << "  error: " << r.error << '\n';
}

fs::path resolve_output(const std::string& requested, const std::string& fallback) {
    const fs::path p = requested.empty() ? fs::path(fallback) : fs::path(requested);
    return p.is_absolute() ? p : output_root() / p;
}

int run_command(const std::string& path) {
    ExperimentConfig config;
    try {
        config = load_config(path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    const auto result = run_experiment(config);
    const auto paths = write_artifacts(result, resolve_output(config.output, config.name));
    std::cout << (result.pass() ? "PASS " : "FAIL ") << result.name << " -> " << paths.dir.string() << '\n';
    print_checks(result);
    return result.pass() ? 0 : kFailed;
}

int reproduce_command(const std::vector<std::string>& names) {
    for (const auto& name : names) {
        try {
            find_reproduction(name);
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kUsage;
        }
    }
    bool all = true;
    for (const auto& name : names) {
        const auto start = std::chrono::steady_clock::now();
        const auto outcome = reproduce(name);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const auto paths = write_artifacts(outcome.result, output_root() / name);
        std::cout << (outcome.accepted ? "PASS " : "FAIL ") << name << " (" << std::fixed << std::setprecision(2)
                  << seconds << " s) -> " << paths.dir.string() << '\n';
        std::cout.unsetf(std::ios::fixed);
        print_checks(outcome.result);
        all = all && outcome.accepted;
    }
    return all ? 0 : kFailed;
}

void list_command(bool problems) {
    if (problems) {
        for (const auto& p : problem_catalog()) {
            std::string algorithms;
            for (auto a : p.algorithms) algorithms += (algorithms.empty() ? "" : ",") + to_string(a);
            std::cout << std::left << std::setw(20) << p.name << std::setw(24) << algorithms << p.summary << '\n';
            if (!p.defaults.empty()) std::cout << std::string(20, ' ') << "params " << p.defaults.dump() << '\n';
        }
        return;
    }
    for (const auto& e : reproductions())
        std::cout << std::left << std::setw(26) << e.name << "criterion " << std::setw(4) << e.criterion
                  << std::setw(8) << to_string(e.runtime) << e.description << '\n';
}

int report_command(const std::string& dir) {
    ReportSummary summary;
    try {
        summary = summarize_reports(dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    if (summary.lines.empty()) {
        std::cerr << "no report.json found under " << dir << '\n';
        return kFailed;
    }
    std::size_t passed = 0;
    for (const auto& line : summary.lines) {
        std::cout << (line.pass ? "PASS " : "FAIL ") << line.name << "  " << line.detail << '\n';
        passed += line.pass;
    }
    std::cout << passed << "/" << summary.lines.size() << " reports pass\n";
    return summary.pass() ? 0 : kFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Operator-splitting experiments: convergence-rate checks and reproductions"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run the experiment described by a JSON config");
    run->add_option("config", config_path, "path to the config file")->required();

    std::vector<std::string> names;
    auto* repro = app.add_subcommand("reproduce", "run named registry entries");
    repro->add_option("names", names, "registry entry names (see list)")->required();

    bool problems = false;
    auto* list = app.add_subcommand("list", "list registry entries");
    list->add_flag("--problems", problems, "list problem kinds instead");

    std::string report_dir;
    auto* report = app.add_subcommand("report", "summarize the reports under a directory");
    report->add_option("dir", report_dir, "directory to scan")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kUsage;
    }

    if (*run) return run_command(config_path);
    if (*repro) return reproduce_command(names);
    if (*list) {
        list_command(problems);
        return 0;
    }
    return report_command(report_dir);
}
