#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "opsplit/experiments/problems.hpp"
#include "opsplit/km/engine.hpp"
#include "opsplit/rates/sequence_lemma.hpp"

namespace opsplit {

enum class RuntimeClass { Fast, Medium, Slow }; // under 1 s, under 10 s, longer

inline const char* to_string(RuntimeClass r) {
    switch (r) {
    case RuntimeClass::Fast: return "fast";
    case RuntimeClass::Medium: return "medium";
    case RuntimeClass::Slow: return "slow";
    }
    return "unknown";
}

struct ReproductionEntry {
    std::string name;
    std::string description;
    int criterion = 0; // acceptance criterion this entry decides
    RuntimeClass runtime = RuntimeClass::Fast;
    std::function<ExperimentResult()> build;
    std::function<bool(const ExperimentResult&)> accept = [](const ExperimentResult& r) { return r.pass(); };
};

namespace detail {

// Copies a report's entries into `into` (same sense), keeping each entry's tolerance.
inline void append_entries(BoundReport& into, const BoundReport& from) {
    for (const auto& e : from.entries()) into.add(e.k, e.bound, e.measured, e.tolerance);
}

// Folds runs into one result. With labels, checks are kept per run as "label/check";
// without, same-named checks are merged across runs. The first run supplies the trace.
inline ExperimentResult combine(std::string name, std::vector<ExperimentResult> runs,
                                const std::vector<std::string>& labels = {}) {
    ExperimentResult out;
    out.name = std::move(name);
    require(!runs.empty(), ErrorKind::InvalidArgument, "nothing to combine");
    out.seed = runs.front().seed;
    out.trace = std::move(runs.front().trace);
    out.config = Json::array();
    Json failing = Json::array();
    Json per_run = Json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        auto& run = runs[i];
        const std::string label = labels.empty() ? std::to_string(i) : labels[i];
        out.config.push_back(run.config);
        if (!run.pass()) failing.push_back(label);
        if (!run.error.empty()) out.error += (out.error.empty() ? "" : "; ") + label + ": " + run.error;
        if (!run.metrics.empty()) per_run.push_back({{"run", label}, {"metrics", run.metrics}});
        for (auto& check : run.checks) {
            if (!labels.empty()) {
                BoundReport renamed(label + "/" + check.name(), check.sense());
                append_entries(renamed, check);
                out.add(std::move(renamed));
                continue;
            }
            auto same = std::find_if(out.checks.begin(), out.checks.end(),
                                     [&](const BoundReport& r) { return r.name() == check.name(); });
            if (same == out.checks.end()) out.add(std::move(check));
            else append_entries(*same, check);
        }
    }
    out.metrics["runs"] = runs.size();
    out.metrics["failing_runs"] = std::move(failing);
    if (!per_run.empty()) out.metrics["per_run"] = std::move(per_run);
    return out;
}

inline ExperimentResult run_json(const Json& j) { return run_experiment(parse_config_json(j)); }

// Composition of projections onto two random affine sets in R^n through a common point.
struct ProjectionPair {
    ProxFunction a, b;
    Vector common;
    Vector operator()(const Vector& z) const { return a.prox(1.0, b.prox(1.0, z)); }
};

inline ProjectionPair projection_pair(std::mt19937_64& rng, Eigen::Index n) {
    const Vector p = gaussian_vector(rng, n);
    const auto sa = Subspace::from_spanning(gaussian_matrix(rng, n, 2 * n / 5));
    const auto sb = Subspace::from_spanning(gaussian_matrix(rng, n, n / 2));
    return {ProxFunction::indicator_affine(sa, p), ProxFunction::indicator_affine(sb, p), p};
}

inline ExperimentResult km_runs(bool inexact) {
    constexpr std::size_t kSeeds = 50, kIters = 10000;
    constexpr Eigen::Index kDim = 20;
    const auto schedule = RelaxationSchedule::constant(0.5);
    std::vector<ExperimentResult> runs;
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
        std::mt19937_64 rng(seed);
        const auto T = projection_pair(rng, kDim);
        const Vector z0 = T.common + gaussian_vector(rng, kDim, 2.0);
        const double d0sq = (z0 - T.common).squaredNorm();
        KmOptions options;
        options.keep_iterates = false;
        options.reference = T.common;
        if (inexact) options.errors = ErrorSchedule::decaying(1.5, 1.0, seed);
        const auto t = run_km(T, schedule, z0, kIters, options);
        ExperimentResult r;
        r.seed = seed;
        r.config = {{"operator", "projection composition"}, {"dim", kDim}, {"seed", seed}, {"iters", kIters},
                    {"schedule", "constant 0.5"}, {"errors", inexact ? "norm (k+1)^-1.5" : "none"}};
        if (t.aborted) r.error = t.diagnostic;
        r.trace.resize(t.size());
        r.trace.fill(Column::Fpr, t.fpr);
        r.trace.fill(Column::DistSq, t.dist_sq);
        if (inexact) {
            r.add(check_inexact_fpr(t, schedule, d0sq));
            r.add(check_little_o_tail(t));
        } else {
            r.trace.fill(Column::BoundFpr, fpr_bound_series(schedule, d0sq, t.size()));
            r.add(check_fpr_bound(t, schedule, d0sq));
            r.add(check_fpr_monotone(t));
            r.add(check_fejer(t, T.common));
            r.add(check_fpr_summability(t, schedule, d0sq));
        }
        runs.push_back(std::move(r));
    }
    return combine(inexact ? "km-inexact" : "km-fpr", std::move(runs));
}

// Random sequences satisfying the hypotheses of each clause of the summable-sequence lemma.
inline SequenceCheck random_sequence(std::mt19937_64& rng, LemmaPart part) {
    std::uniform_int_distribution<std::size_t> length(20, 400);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = length(rng);
    SequenceCheck s;
    s.part = part;
    s.lambda.resize(n);
    for (auto& l : s.lambda) l = 0.05 + 0.95 * unit(rng);
    s.a.resize(n);
    switch (part) {
    case LemmaPart::Monotone: {
        double a = 10.0 * unit(rng);
        for (auto& x : s.a) x = a, a *= 0.8 + 0.2 * unit(rng);
        break;
    }
    case LemmaPart::MonotoneUpToErrors: {
        double base = 10.0 * unit(rng);
        for (std::size_t k = 0; k < n; ++k) {
            s.a[k] = base * (1.0 + 0.5 * unit(rng) / double(k + 1));
            base *= 0.9 + 0.1 * unit(rng);
        }
        s.e.resize(n - 1);
        for (std::size_t k = 0; k + 1 < n; ++k)
            s.e[k] = std::max(0.0, s.a[k + 1] - s.a[k]) + unit(rng) / double((k + 1) * (k + 1));
        break;
    }
    case LemmaPart::FasterRates: {
        s.b.resize(n + 1);
        s.b[0] = 10.0 * unit(rng);
        for (std::size_t k = 0; k < n; ++k) s.b[k + 1] = s.b[k] * (0.7 + 0.3 * unit(rng));
        s.e.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            s.e[k] = unit(rng) / double((k + 1) * (k + 1) * (k + 1));
            s.a[k] = unit(rng) * (s.b[k] - s.b[k + 1] + s.e[k]) / s.lambda[k];
        }
        break;
    }
    case LemmaPart::RunningMin: {
        std::lognormal_distribution<double> noise(0.0, 1.0);
        for (std::size_t k = 0; k < n; ++k) s.a[k] = noise(rng) / double(k + 1);
        break;
    }
    }
    return s;
}

inline ExperimentResult summable_lemma_runs() {
    constexpr std::size_t kPerPart = 200;
    std::vector<ExperimentResult> runs;
    std::vector<std::string> labels;
    for (auto part : {LemmaPart::Monotone, LemmaPart::MonotoneUpToErrors, LemmaPart::FasterRates, LemmaPart::RunningMin}) {
        ExperimentResult r;
        r.config = {{"part", int(part)}, {"sequences", kPerPart}};
        std::mt19937_64 rng(1000 + std::uint64_t(part));
        BoundReport merged;
        for (std::size_t i = 0; i < kPerPart; ++i) {
            const auto report = verify_summable_lemma(random_sequence(rng, part));
            if (i == 0) merged = BoundReport(report.name(), report.sense());
            append_entries(merged, report);
        }
        r.add(std::move(merged));
        runs.push_back(std::move(r));
        labels.push_back("part" + std::to_string(int(part)));
    }
    return combine("summable-lemma", std::move(runs), labels);
}

inline Json explicit_random_schedule(std::uint64_t seed, std::size_t iters) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> values(iters + 1);
    // (0, 1] with occasional exact PRS steps
    for (auto& v : values) v = unit(rng) < 0.1 ? 1.0 : 1.0 - unit(rng) * (1.0 - 1e-3);
    return values;
}

} // namespace detail

inline const std::vector<ReproductionEntry>& reproductions() {
    using detail::combine;
    using detail::run_json;
    using R = RuntimeClass;
    static const std::vector<ReproductionEntry> entries = {
        {"km-fpr", "KM iteration on random projection compositions in R^20: FPR bound, monotonicity, summability", 1,
         R::Medium, [] { return detail::km_runs(false); }},
        {"km-inexact", "KM with errors of norm (k+1)^-1.5: error-accounted FPR bound and tail decay", 2, R::Medium,
         [] { return detail::km_runs(true); }},
        {"optimal-fpr", "rotation pair in R^(2*10^5): FPR stays above 0.99 (k+1)^-1.5", 3, R::Medium,
         [] { return run_json({{"name", "optimal-fpr"}, {"problem", "thm_optimal_fpr"}}); }},
        {"arbitrarily-slow", "DRS whose distance to the solution decays no faster than (k+2)^-0.05 / e", 4, R::Fast,
         [] { return run_json({{"name", "arbitrarily-slow"}, {"problem", "arbitrarily_slow"}}); }},
        {"fbs-rates", "forward-backward on a lasso in R^10 at gamma = beta and gamma = 1.5 beta", 5, R::Fast,
         [] {
             std::vector<ExperimentResult> runs;
             for (double ratio : {1.0, 1.5})
                 runs.push_back(run_json({{"name", "fbs-rates"}, {"problem", "lasso"}, {"algorithm", "fbs"},
                                          {"step_ratio", ratio}, {"iters", 10000}}));
             return combine("fbs-rates", std::move(runs), {"ratio=1", "ratio=1.5"});
         }},
        {"ppa-rates", "proximal point on least squares: objective and FPR rates", 5, R::Fast,
         [] { return run_json({{"name", "ppa-rates"}, {"problem", "least_squares"}, {"iters", 10000}}); }},
        {"ppa-lower", "proximal point on a diagonal quadratic: FPR and objective lower bounds", 6, R::Fast,
         [] { return run_json({{"name", "ppa-lower"}, {"problem", "ppa_diagonal"}}); }},
        {"drs-1d", "DRS on |x| and |x - 1|: FPR of order 1/(k+1)^2", 7, R::Medium,
         [] { return run_json({{"name", "drs-1d"}, {"problem", "scalar_pair"}, {"checks", {"drs-1d", "fpr"}}}); }},
        {"abs-ergodic", "PRS on |x|: oracle trace and ergodic tightness ratios at eps = 0.1 and 0.01", 8, R::Fast,
         [] {
             std::vector<ExperimentResult> runs;
             for (double eps : {0.1, 0.01})
                 runs.push_back(run_json({{"name", "abs-ergodic"}, {"problem", "abs_example"}, {"algorithm", "prs"},
                                          {"schedule", 1.0}, {"eps", eps}, {"iters", 10000},
                                          {"checks", {"oracle", "tightness", "fundamental", "ergodic", "lipschitz"}}}));
             return combine("abs-ergodic", std::move(runs), {"eps=0.1", "eps=0.01"});
         }},
        {"square-feasibility", "PRS on two axes in R^2: oracle trace and ergodic gap within a factor two of its bound", 9,
         R::Fast,
         [] {
             return run_json({{"name", "square-feasibility"}, {"problem", "square_feasibility"}, {"schedule", 1.0},
                              {"iters", 1000}});
         },
         [](const ExperimentResult& r) {
             if (!r.pass() || !r.metrics.contains("gap_factor")) return false;
             const double f = r.metrics["gap_factor"].get<double>();
             return f >= 1.0 && f <= 2.0 + 1e-12;
         }},
        {"fundamental-inequalities", "100 random quadratic + l1 pairs with random relaxation in (0, 1]", 10, R::Fast,
         [] {
             std::vector<ExperimentResult> runs;
             for (std::uint64_t seed = 0; seed < 100; ++seed)
                 runs.push_back(run_json({{"name", "fundamental-inequalities"}, {"problem", "random_pair"}, {"seed", seed},
                                          {"iters", 200}, {"schedule", detail::explicit_random_schedule(seed, 200)},
                                          {"checks", {"fundamental"}}}));
             return combine("fundamental-inequalities", std::move(runs));
         }},
        {"ergodic-prs", "ergodic objective and feasibility bands for relaxed PRS on random pairs", 10, R::Fast,
         [] {
             std::vector<ExperimentResult> runs;
             std::vector<std::string> labels;
             for (double lambda : {0.5, 0.9, 1.0}) {
                 for (std::uint64_t seed = 0; seed < 10; ++seed) {
                     runs.push_back(run_json({{"name", "ergodic-prs"}, {"problem", "random_pair"}, {"seed", seed},
                                              {"iters", 2000}, {"schedule", lambda},
                                              {"checks", {"ergodic", "fejer", "sqrt-fpr"}}}));
                     labels.push_back("lambda=" + format_number(lambda) + ",seed=" + std::to_string(seed));
                 }
             }
             return combine("ergodic-prs", std::move(runs), labels);
         }},
        {"nonergodic-prs", "DRS on d_V and iota_U (10^4 blocks): nonergodic band and Lipschitz bound for k <= 10^4", 11,
         R::Slow,
         [] {
             return run_json({{"name", "nonergodic-prs"}, {"problem", "dv_lower"}, {"blocks", 10000}, {"iters", 10000},
                              {"checks", {"band", "lipschitz"}}});
         }},
        {"lipschitz-cors", "ergodic and nonergodic bounds with one Lipschitz function", 11, R::Medium,
         [] {
             std::vector<ExperimentResult> runs;
             runs.push_back(run_json({{"name", "lipschitz-cors"}, {"problem", "abs_example"}, {"algorithm", "drs"},
                                      {"checks", {"lipschitz", "ergodic", "nonergodic"}}}));
             runs.push_back(run_json({{"name", "lipschitz-cors"}, {"problem", "abs_example"}, {"schedule", 1.0},
                                      {"checks", {"lipschitz", "ergodic"}}}));
             runs.push_back(run_json({{"name", "lipschitz-cors"}, {"problem", "scalar_pair"}, {"schedule", 0.8},
                                      {"algorithm", "prs"}, {"checks", {"lipschitz", "nonergodic"}}}));
             return combine("lipschitz-cors", std::move(runs), {"abs-drs", "abs-prs", "scalar-pair"});
         }},
        {"dv-lower", "DRS on d_V and iota_U (10^5 blocks): d_V(x_g) decays no faster than (k+1)^-0.85", 11, R::Medium,
         [] { return run_json({{"name", "dv-lower"}, {"problem", "dv_lower"}}); }},
        {"same-sequence", "d_V and iota_V give the same DRS sequence when gamma >= ||z0||", 12, R::Fast,
         [] {
             return run_json({{"name", "same-sequence"}, {"problem", "dv_lower"}, {"blocks", 10000}, {"iters", 1},
                              {"checks", {"lockstep"}}});
         }},
        {"admm-equivalence", "ADMM matches PRS on the dual for a one-feature lasso", 13, R::Fast,
         [] {
             return run_json({{"name", "admm-equivalence"}, {"problem", "admm_lasso"}, {"rows", 5}, {"cols", 1},
                              {"iters", 1000}, {"checks", {"dual-prs", "step"}}});
         }},
        {"admm-dual-feas", "ADMM feasibility and objective bands for relaxed schedules", 14, R::Medium,
         [] {
             std::vector<ExperimentResult> runs;
             for (double lambda : {0.5, 0.8, 1.0})
                 runs.push_back(run_json({{"name", "admm-dual-feas"}, {"problem", "admm_lasso"}, {"schedule", lambda},
                                          {"iters", 10000}, {"checks", {"bands"}}}));
             return combine("admm-dual-feas", std::move(runs), {"lambda=0.5", "lambda=0.8", "lambda=1"});
         }},
        {"admm-primal", "ADMM fundamental inequalities and the primal-dual identity", 14, R::Medium,
         [] {
             std::vector<ExperimentResult> runs;
             for (double lambda : {0.5, 0.9})
                 runs.push_back(run_json({{"name", "admm-primal"}, {"problem", "admm_lasso"}, {"schedule", lambda},
                                          {"iters", 10000}, {"checks", {"fundamental", "step"}}}));
             return combine("admm-primal", std::move(runs), {"lambda=0.5", "lambda=0.9"});
         }},
        {"distributed-admm", "decentralized ADMM on a 5-node path: consensus, band, locality", 15, R::Fast,
         [] { return run_json({{"name", "distributed-admm"}, {"problem", "consensus_path"}}); }},
        {"summable-lemma", "200 random sequences per clause of the summable-sequence lemma", 16, R::Fast,
         [] { return detail::summable_lemma_runs(); }},
    };
    return entries;
}

inline const ReproductionEntry& find_reproduction(const std::string& name) {
    std::string known;
    for (const auto& e : reproductions()) {
        if (e.name == name) return e;
        known += "\n  " + e.name;
    }
    fail(ErrorKind::InvalidArgument, "unknown reproduction '" + name + "'; available:" + known);
}

struct ReproductionOutcome {
    ExperimentResult result;
    bool accepted = false;
};

// Builds the entry and applies its acceptance predicate. Build failures are recorded
// in the result rather than thrown.
inline ReproductionOutcome reproduce(const ReproductionEntry& entry) {
    ReproductionOutcome out;
    try {
        out.result = entry.build();
    } catch (const Error& e) {
        out.result.error = e.what();
    }
    out.result.name = entry.name;
    out.result.metrics["criterion"] = entry.criterion;
    out.accepted = entry.accept(out.result);
    return out;
}

inline ReproductionOutcome reproduce(const std::string& name) { return reproduce(find_reproduction(name)); }

} // namespace opsplit
