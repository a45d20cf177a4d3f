// Runs every registry entry and prints one line per acceptance criterion.
// Exit status is 0 iff all criteria pass. Artifacts land under
// $OPSPLIT_OUTPUT_ROOT/acceptance/<entry>.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "opsplit/experiments/registry.hpp"

namespace {

const std::map<int, std::string> kCriteria = {
    {1, "KM fixed-point residual bound, monotonicity and summability"},
    {2, "inexact KM with summable errors"},
    {3, "DRS fixed-point residual lower bound"},
    {4, "arbitrarily slow DRS"},
    {5, "forward-backward and proximal point rates"},
    {6, "proximal point lower bounds"},
    {7, "one-dimensional DRS residual rate"},
    {8, "ergodic tightness on the absolute-value example"},
    {9, "feasibility example on two axes"},
    {10, "fundamental inequalities on random pairs"},
    {11, "nonergodic bands and the d_V lower rate"},
    {12, "distance and indicator give the same DRS sequence"},
    {13, "ADMM equals PRS on the dual"},
    {14, "ADMM feasibility and objective bounds"},
    {15, "decentralized ADMM on a path graph"},
    {16, "summable-sequence lemma"},
};

} // namespace

int main() {
    using namespace opsplit;
    std::map<int, std::vector<std::pair<std::string, bool>>> outcomes;
    for (const auto& entry : reproductions()) {
        const auto start = std::chrono::steady_clock::now();
        const auto out = reproduce(entry);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_artifacts(out.result, output_root() / "acceptance" / entry.name);
        std::printf("  [%s] %-26s %7.2f s%s%s\n", out.accepted ? "ok" : "!!", entry.name.c_str(), seconds,
                    out.result.error.empty() ? "" : "  ", out.result.error.c_str());
        for (const auto& c : out.result.checks)
            if (!c.pass())
                std::printf("        failed %s at k=%zu (margin %s)\n", c.name().c_str(), c.first_violation().value_or(0),
                            format_number(c.worst_margin()).c_str());
        outcomes[entry.criterion].emplace_back(entry.name, out.accepted);
    }

    bool all = true;
    std::printf("\n");
    for (const auto& [number, title] : kCriteria) {
        const auto& entries = outcomes[number];
        bool pass = !entries.empty();
        std::string names;
        for (const auto& [name, ok] : entries) {
            pass = pass && ok;
            names += (names.empty() ? "" : ", ") + name;
        }
        all = all && pass;
        std::printf("criterion %2d: %s  %s [%s]\n", number, pass ? "PASS" : "FAIL", title.c_str(),
                    names.empty() ? "no entry" : names.c_str());
    }
    std::printf("\n%s\n", all ? "all criteria pass" : "some criteria FAIL");
    return all ? 0 : 1;
}
