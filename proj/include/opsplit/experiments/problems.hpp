#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "opsplit/admm/bounds.hpp"
#include "opsplit/admm/distributed.hpp"
#include "opsplit/admm/model_fitting.hpp"
#include "opsplit/counterexamples/lower_bounds.hpp"
#include "opsplit/counterexamples/oracles.hpp"
#include "opsplit/experiments/artifacts.hpp"
#include "opsplit/experiments/config.hpp"
#include "opsplit/feasibility/feasibility.hpp"
#include "opsplit/km/checks.hpp"
#include "opsplit/rates/checks.hpp"
#include "opsplit/rates/fit.hpp"

namespace opsplit {

struct ProblemKind {
    std::string name;
    std::string summary;
    std::vector<Algorithm> algorithms; // the first one is the default
    Json defaults;                     // every accepted parameter with its default
    std::vector<std::string> checks;   // accepted check names
    std::optional<std::size_t> iters;  // default iteration count
    std::function<std::vector<std::string>(const ExperimentConfig&)> default_checks;
    std::function<void(const ExperimentConfig&, ExperimentResult&)> run;
};

namespace detail {

inline Vector gaussian_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
    return v;
}

inline Matrix gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> normal;
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    return m;
}

inline Vector resolve_start(const ExperimentConfig& c, const Vector& fallback) {
    switch (c.z0.kind) {
    case StartSpec::Kind::ProblemDefault: return fallback;
    case StartSpec::Kind::Explicit: {
        require(Eigen::Index(c.z0.values.size()) == fallback.size(), ErrorKind::InvalidConfig,
                "z0 has " + std::to_string(c.z0.values.size()) + " entries; problem '" + c.problem + "' needs " +
                    std::to_string(fallback.size()));
        return Eigen::Map<const Vector>(c.z0.values.data(), fallback.size());
    }
    case StartSpec::Kind::Random: {
        std::mt19937_64 rng(c.z0.seed);
        return gaussian_vector(rng, fallback.size(), c.z0.scale);
    }
    }
    return fallback;
}

inline bool default_start(const ExperimentConfig& c) { return c.z0.kind == StartSpec::Kind::ProblemDefault; }

inline RelaxationSchedule schedule_for(const ExperimentConfig& c) {
    return c.algo() == Algorithm::Drs ? RelaxationSchedule::constant(0.5) : c.schedule.build();
}

inline bool tau_positive(const RelaxationSchedule& s, std::size_t iters) {
    for (std::size_t k = 0; k <= iters; ++k)
        if (!(s.tau(k) > 0.0)) return false;
    return true;
}

inline std::vector<double> cumulative(const std::vector<double>& lambda) {
    std::vector<double> out(lambda.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < lambda.size(); ++k) out[k] = acc += lambda[k];
    return out;
}

// A single-entry report: measured against bound with no slack.
inline BoundReport single(std::string name, BoundSense sense, std::size_t k, double bound, double measured) {
    BoundReport r(std::move(name), sense, 0.0, 0.0);
    r.add(k, bound, measured, 0.0);
    return r;
}

struct SplittingSetup {
    ProxFunction f, g;
    Vector z0;
    SolutionCertificate cert;
    std::optional<double> lipschitz; // modulus of f, for bounds evaluated at x_g
};

struct SplittingRun {
    IterationTrace trace;
    RelaxationSchedule schedule;
    std::vector<double> xg_error;         // (f + g)(x_g^k) - F*
    std::vector<double> ergodic_xg_error; // (f + g)(xbar_g^k) - F*
};

// Relaxed PRS with the generic checks: fpr, fejer, fundamental, nonergodic, ergodic,
// sqrt-fpr, lipschitz. Problem-specific checks run on the returned trace.
inline SplittingRun run_splitting(const ExperimentConfig& c, const SplittingSetup& s, ExperimentResult& r,
                                  bool keep_iterates = false) {
    SplittingRun run{IterationTrace{}, schedule_for(c), {}, {}};
    const std::size_t iters = c.iterations();
    const auto& cert = s.cert;
    const bool lipschitz = c.has_check("lipschitz");
    require(!lipschitz || s.lipschitz.has_value(), ErrorKind::InvalidConfig,
            "lipschitz check needs a Lipschitz first function");

    SplittingOptions options;
    options.keep_iterates = keep_iterates || c.has_check("fundamental");
    options.reference = cert.zstar;
    options.evaluate_ergodic_objective = true;
    Vector sum_g = Vector::Zero(s.z0.size());
    double weight = 0.0;
    if (lipschitz) {
        options.observer = [&](std::size_t k, const TriangleIterate& t) {
            run.xg_error.push_back(s.f.value(t.x_g) + s.g.value(t.x_g) - cert.obj_star);
            const double l = run.schedule.lambda(k);
            sum_g += l * t.x_g;
            weight += l;
            const Vector bar = sum_g / weight;
            run.ergodic_xg_error.push_back(s.f.value(bar) + s.g.value(bar) - cert.obj_star);
        };
    }
    run.trace = run_relaxed_prs(s.f, s.g, c.gamma, run.schedule, s.z0, iters, options);
    const auto& t = run.trace;
    require(!t.aborted, ErrorKind::NonFinite, t.diagnostic);

    const bool tau_ok = tau_positive(run.schedule, iters);
    double tau_lo = kInfinity;
    for (double l : t.lambda) tau_lo = std::min(tau_lo, l * (1.0 - l));
    const auto lam_cum = cumulative(t.lambda);
    const double d0sq = cert.dist0 * cert.dist0;

    TraceTable& table = r.trace;
    table.resize(t.size());
    table.fill(Column::Fpr, t.fpr);
    table.fill(Column::DistSq, t.dist_sq);
    table.fill_with(Column::ObjErr, [&](std::size_t k) { return t.objective[k] - cert.obj_star; });
    table.fill_with(Column::ObjErrErgodic, [&](std::size_t k) { return t.ergodic_objective[k] - cert.obj_star; });
    table.fill(Column::FeasGap, t.ergodic_gap);
    table.fill_with(Column::BoundFeas, [&](std::size_t k) { return ergodic_feasibility_bound(cert, lam_cum[k]); });
    if (tau_ok) {
        table.fill(Column::BoundFpr, fpr_bound_series(run.schedule, d0sq, t.size()));
        table.fill_with(Column::BoundObjLo, [&](std::size_t k) { return nonergodic_objective_bounds(cert, tau_lo, k).lower; });
        table.fill_with(Column::BoundObjHi, [&](std::size_t k) { return nonergodic_objective_bounds(cert, tau_lo, k).upper; });
    }

    auto need_tau = [&](const char* check) {
        require(tau_ok, ErrorKind::UnsupportedSchedule,
                std::string(check) + " check needs lambda_k < 1 for every k; schedule is " + run.schedule.describe());
    };
    if (c.has_check("fpr")) {
        need_tau("fpr");
        r.add(check_fpr_bound(t, run.schedule, d0sq));
        r.add(check_fpr_summability(t, run.schedule, d0sq));
    }
    if (c.has_check("fejer")) {
        r.add(check_fejer(t, cert.zstar));
        if (tau_ok) r.add(check_fpr_monotone(t));
    }
    if (c.has_check("fundamental")) {
        auto rep = check_fundamental_inequalities(t, cert);
        r.add(std::move(rep.upper));
        r.add(std::move(rep.lower));
    }
    if (c.has_check("nonergodic")) {
        need_tau("nonergodic");
        auto [upper, lower] = check_nonergodic_band(t, cert);
        r.add(std::move(upper));
        r.add(std::move(lower));
    }
    if (c.has_check("ergodic")) {
        auto rep = check_ergodic_bands(t, cert);
        r.add(std::move(rep.upper));
        r.add(std::move(rep.lower));
        r.add(std::move(rep.feasibility));
    }
    if (c.has_check("sqrt-fpr")) {
        auto [upper, lower] = check_sqrt_fpr_product(t, cert);
        r.add(std::move(upper));
        r.add(std::move(lower));
    }
    if (lipschitz) {
        BoundReport erg("lipschitz-ergodic", BoundSense::Upper);
        for (std::size_t k = 0; k < t.size(); ++k)
            erg.add(k, lipschitz_objective_bound(cert, *s.lipschitz, RateMode::Ergodic, lam_cum[k]),
                    run.ergodic_xg_error[k]);
        r.add(std::move(erg));
        if (tau_ok) {
            BoundReport last("lipschitz-nonergodic", BoundSense::Upper);
            for (std::size_t k = 0; k < t.size(); ++k)
                last.add(k, lipschitz_objective_bound(cert, *s.lipschitz, RateMode::Nonergodic, tau_lo * double(k + 1)),
                         run.xg_error[k]);
            r.add(std::move(last));
        }
    }
    r.metrics["dist0"] = cert.dist0;
    r.metrics["obj_star"] = cert.obj_star;
    r.metrics["schedule"] = run.schedule.describe();
    return run;
}

inline std::vector<std::string> generic_defaults(const ExperimentConfig& c, std::vector<std::string> base) {
    const auto s = schedule_for(c);
    if (tau_positive(s, c.iterations())) {
        base.push_back("fpr");
        base.push_back("nonergodic");
    }
    return base;
}

// ---------------------------------------------------------------- individual problems

inline void run_abs_example(const ExperimentConfig& c, ExperimentResult& r) {
    const double eps = c.param("eps");
    const auto ex = abs_example(eps);
    SplittingSetup s{ex.f, ex.g, resolve_start(c, ex.z0), {}, 1.0};
    s.cert = make_certificate(s.f, s.g, c.gamma, Vector::Zero(1), s.z0);
    const bool oracle_setting = c.schedule.is_constant(1.0) && c.algo() == Algorithm::Prs && c.gamma == 1.0 &&
                                default_start(c);
    const bool oracle = c.has_check("oracle"), tight = c.has_check("tightness");
    require(!(oracle || tight) || oracle_setting, ErrorKind::InvalidConfig,
            "oracle and tightness checks need algorithm prs, schedule 1, gamma 1 and the default z0");
    const auto run = run_splitting(c, s, r, oracle || tight);
    const auto& t = run.trace;
    if (oracle) {
        BoundReport rep("abs-oracle", BoundSense::Upper, 1e-12, 0.0);
        for (std::size_t k = 0; k < t.size(); ++k) {
            const auto o = abs_example_oracle(eps, k);
            const double dev = std::max({std::abs(t.z[k][0] - o.z), std::abs(t.triangles[k].x_g[0] - o.x_g),
                                         std::abs(t.triangles[k].x_f[0] - o.x_f),
                                         std::abs(t.ergodic_g[k][0] - o.ergodic_g),
                                         std::abs(t.ergodic_f[k][0] - o.ergodic_f)});
            rep.add(k, 0.0, dev);
        }
        r.add(std::move(rep));
    }
    if (tight) {
        const auto& cert = s.cert;
        BoundReport thm6("ergodic-ratio-floor", BoundSense::Lower, 0.0, 0.0);
        BoundReport thm6_form("ergodic-ratio-closed-form", BoundSense::Upper, 0.0, 0.0);
        BoundReport cor2("lipschitz-factor", BoundSense::Upper, 0.0, 0.0);
        BoundReport cor2_form("lipschitz-factor-closed-form", BoundSense::Upper, 0.0, 0.0);
        BoundReport feas("feasibility-factor", BoundSense::Upper, 0.0, 0.0);
        BoundReport feas_form("feasibility-factor-closed-form", BoundSense::Upper, 0.0, 0.0);
        double worst_ratio = kInfinity, worst_cor2 = 0.0, worst_feas = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            const double n = double(k + 1);
            const bool even = k % 2 == 0;
            const double f_err = std::abs(t.ergodic_f[k][0]);
            const double g_err = std::abs(t.ergodic_g[k][0]);
            const double ratio = f_err / ergodic_objective_bounds(cert, n).upper;
            thm6.add(k, 1.0 - eps, ratio, 0.0);
            thm6_form.add(k, 1e-6, std::abs(ratio - 4.0 * (1.0 - eps) / ((2.0 - eps) * (2.0 - eps))), 0.0);
            const double factor = lipschitz_objective_bound(cert, 1.0, RateMode::Ergodic, n) / g_err;
            const double factor_form = (5.0 - 3.0 * eps + eps * eps / 4.0) / (even ? 2.0 - eps : 2.0 - 2.0 * eps);
            cor2.add(k, 2.5 * (1.0 + eps), factor, 0.0);
            cor2_form.add(k, 1e-6, std::abs(factor - factor_form), 0.0);
            const double feasibility = ergodic_feasibility_bound(cert, n) / t.ergodic_gap[k];
            feas.add(k, 4.0 * (1.0 + eps), feasibility, 0.0);
            feas_form.add(k, 1e-6, std::abs(feasibility - (4.0 - 2.0 * eps) / (even ? 1.0 : 1.0 - eps)), 0.0);
            worst_ratio = std::min(worst_ratio, ratio);
            worst_cor2 = std::max(worst_cor2, factor);
            worst_feas = std::max(worst_feas, feasibility);
        }
        for (auto* rep : {&thm6, &thm6_form, &cor2, &cor2_form, &feas, &feas_form}) r.add(std::move(*rep));
        r.metrics["min_ergodic_ratio"] = worst_ratio;
        r.metrics["max_lipschitz_factor"] = worst_cor2;
        r.metrics["max_feasibility_factor"] = worst_feas;
    }
}

inline std::vector<std::string> abs_defaults(const ExperimentConfig& c) {
    auto base = generic_defaults(c, {"fundamental", "ergodic", "lipschitz"});
    if (c.schedule.is_constant(1.0) && c.algo() == Algorithm::Prs && c.gamma == 1.0 && default_start(c)) {
        base.push_back("oracle");
        base.push_back("tightness");
    }
    return base;
}

inline ConvexSetPair square_pair() {
    return {ConvexSet::subspace(Subspace::coordinate_axes(2, {1})), ConvexSet::subspace(Subspace::coordinate_axes(2, {0}))};
}

// Fills the table and the generic feasibility checks.
inline FeasibilityTrace run_feasibility_problem(const ExperimentConfig& c, const ConvexSetPair& pair, const Vector& z0,
                                                double dist0, ExperimentResult& r, bool keep_iterates = false) {
    const auto schedule = schedule_for(c);
    auto ft = run_feasibility(pair, schedule, z0, c.iterations(), keep_iterates);
    require(!ft.trace.aborted, ErrorKind::NonFinite, ft.trace.diagnostic);
    r.trace.resize(ft.size());
    r.trace.fill(Column::Fpr, ft.trace.fpr);
    r.trace.fill_with(Column::FeasGap, [&](std::size_t k) { return ft.ergodic_max_dist[k] * ft.ergodic_max_dist[k]; });
    double cumulative = 0.0;
    r.trace.fill_with(Column::BoundFeas, [&](std::size_t k) {
        const double bound = 2.0 * dist0 / (cumulative += schedule.lambda(k));
        return bound * bound;
    });
    if (c.has_check("feasibility")) {
        auto rep = check_feasibility(ft, schedule, dist0);
        r.add(std::move(rep.distance_vs_gap));
        r.add(std::move(rep.ergodic_membership));
        if (!rep.nonergodic.empty()) r.add(std::move(rep.nonergodic));
        r.add(std::move(rep.ergodic));
    }
    r.metrics["dist0"] = dist0;
    r.metrics["schedule"] = schedule.describe();
    return ft;
}

inline void run_square(const ExperimentConfig& c, ExperimentResult& r) {
    const auto ex = square_feasibility_example();
    const Vector z0 = resolve_start(c, ex.z0);
    const double dist0 = (z0 - ex.zstar).norm();
    const bool oracle = c.has_check("oracle"), factor = c.has_check("gap-factor");
    require(!(oracle || factor) || (c.schedule.is_constant(1.0) && c.algo() != Algorithm::Drs && default_start(c)),
            ErrorKind::InvalidConfig, "oracle and gap-factor checks need schedule 1 and the default z0");
    const auto ft = run_feasibility_problem(c, square_pair(), z0, dist0, r, oracle);
    const auto& t = ft.trace;
    if (oracle) {
        BoundReport rep("square-oracle", BoundSense::Upper, 1e-12, 0.0);
        for (std::size_t k = 0; k < t.size(); ++k) {
            const auto o = feasibility_square_oracle(k);
            const double dev = std::max({(t.z[k] - o.z).norm(), (t.triangles[k].x_g - o.x_g).norm(),
                                         (t.triangles[k].x_f - o.x_f).norm(), (t.ergodic_g[k] - o.ergodic_g).norm(),
                                         (t.ergodic_f[k] - o.ergodic_f).norm()});
            rep.add(k, 0.0, dev);
        }
        r.add(std::move(rep));
    }
    if (factor) {
        BoundReport unit("ergodic-gap-closed-form", BoundSense::Upper, 1e-12, 0.0);
        BoundReport upper("gap-factor-upper", BoundSense::Upper, 1e-12, 0.0);
        BoundReport lower("gap-factor-lower", BoundSense::Lower, 1e-12, 0.0);
        double worst = 0.0;
        for (std::size_t k = 0; k < t.size(); k += 2) {
            const double scaled = t.ergodic_gap[k] * double(k + 1) / dist0;
            unit.add(k, 0.0, std::abs(scaled - 1.0));
            const double f = 2.0 * dist0 / double(k + 1) / t.ergodic_gap[k];
            upper.add(k, 2.0, f);
            lower.add(k, 1.0, f);
            worst = std::max(worst, f);
        }
        r.add(std::move(unit));
        r.add(std::move(upper));
        r.add(std::move(lower));
        r.metrics["gap_factor"] = worst;
    }
}

inline void run_scalar_pair(const ExperimentConfig& c, ExperimentResult& r) {
    SplittingSetup s{ProxFunction::l1(1.0), ProxFunction::l1(1.0, Vector::Constant(1, 1.0)),
                     resolve_start(c, Vector::Constant(1, c.param("start"))), {}, 1.0};
    s.cert = fixed_point_reference(s.f, s.g, c.gamma, s.z0);
    const auto run = run_splitting(c, s, r);
    if (c.has_check("drs-1d")) {
        require(c.algo() == Algorithm::Drs || c.schedule.is_constant(0.5), ErrorKind::InvalidConfig,
                "drs-1d check needs lambda = 1/2");
        // measured on the averaged operator: ||x_f - x_g||^2 = fpr / 4
        BoundReport rep("drs-1d-fpr", BoundSense::Upper);
        for (std::size_t k = 0; k + 1 < run.trace.size(); ++k)
            rep.add(k, drs_scalar_fpr_bound(s.cert.dist0, k), run.trace.fpr[k + 1] / 4.0);
        r.add(std::move(rep));
    }
    r.metrics["zstar"] = s.cert.zstar[0];
}

inline ProxFunction random_pd_quadratic(std::mt19937_64& rng, Eigen::Index n) {
    const Matrix m = gaussian_matrix(rng, n, n);
    return ProxFunction::quadratic(m.transpose() * m / double(n) + 0.1 * Matrix::Identity(n, n), gaussian_vector(rng, n));
}

inline void run_random_pair(const ExperimentConfig& c, ExperimentResult& r) {
    const auto n = Eigen::Index(c.count_param("dim"));
    require(n >= 1, ErrorKind::InvalidConfig, "dim must be positive");
    std::mt19937_64 rng(c.seed);
    SplittingSetup s{random_pd_quadratic(rng, n), ProxFunction::l1(c.param("reg")), Vector(), {}, std::nullopt};
    s.z0 = resolve_start(c, gaussian_vector(rng, n, 2.0));
    s.cert = fixed_point_reference(s.f, s.g, c.gamma, s.z0);
    run_splitting(c, s, r);
}

struct LassoData {
    Matrix M;
    Vector b;
    double beta = 1.0; // 1 / lambda_max(M'M)
};

inline LassoData lasso_data(std::uint64_t seed, Eigen::Index rows, Eigen::Index cols) {
    require(rows >= 1 && cols >= 1, ErrorKind::InvalidConfig, "lasso needs positive dimensions");
    std::mt19937_64 rng(seed);
    LassoData d{gaussian_matrix(rng, rows, cols), Vector(), 1.0};
    d.b = gaussian_vector(rng, rows);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(d.M.transpose() * d.M, Eigen::EigenvaluesOnly);
    d.beta = 1.0 / eig.eigenvalues().maxCoeff();
    return d;
}

// 1/2 ||M x - b||^2 as a quadratic on x.
inline ProxFunction least_squares(const LassoData& d) {
    return ProxFunction::quadratic(d.M.transpose() * d.M, -d.M.transpose() * d.b, 0.5 * d.b.squaredNorm());
}

// Forward-backward (or proximal point) rate checks against a known minimizer.
inline void fbs_checks(const ExperimentConfig& c, const IterationTrace& t, const Vector& z0, const Vector& xstar,
                       double obj_star, double gamma, double beta, ExperimentResult& r) {
    const double d0sq = (z0 - xstar).squaredNorm();
    r.trace.resize(t.size());
    r.trace.fill(Column::Fpr, t.fpr);
    r.trace.fill(Column::DistSq, t.dist_sq);
    r.trace.fill_with(Column::ObjErr, [&](std::size_t k) { return t.objective[k] - obj_star; });
    // bound columns are indexed by the iterate they bound: h(z^{k+1}) and fpr_{k+1}
    r.trace.fill_with(Column::BoundObjHi, [&](std::size_t k) { return fbs_bounds(d0sq, gamma, beta, k - 1).objective; }, 1);
    r.trace.fill_with(Column::BoundFpr, [&](std::size_t k) { return fbs_bounds(d0sq, gamma, beta, k - 1).fpr; }, 1);
    if (c.has_check("fbs")) {
        BoundReport obj("fbs-objective", BoundSense::Upper), fpr("fbs-fpr", BoundSense::Upper);
        for (std::size_t k = 0; k + 1 < t.size(); ++k) {
            const auto b = fbs_bounds(d0sq, gamma, beta, k);
            obj.add(k, b.objective, t.objective[k + 1] - obj_star);
            fpr.add(k, b.fpr, t.fpr[k + 1]);
        }
        r.add(std::move(obj));
        r.add(std::move(fpr));
    }
    if (c.has_check("monotone")) {
        BoundReport mono("objective-monotone", BoundSense::Upper, 1e-12, 1e-12);
        for (std::size_t k = 1; k < t.size(); ++k) mono.add(k, t.objective[k - 1], t.objective[k]);
        r.add(std::move(mono));
    }
    r.metrics["dist0_sq"] = d0sq;
    r.metrics["obj_star"] = obj_star;
    r.metrics["gamma"] = gamma;
    r.metrics["beta"] = std::isinf(beta) ? Json(nullptr) : Json(beta);
}

inline void run_lasso(const ExperimentConfig& c, ExperimentResult& r) {
    const auto d = lasso_data(c.seed, Eigen::Index(c.count_param("rows")), Eigen::Index(c.count_param("cols")));
    const auto f = ProxFunction::l1(c.param("reg"));
    const auto g = least_squares(d);
    const Vector z0 = resolve_start(c, Vector::Zero(d.M.cols()));
    if (c.algo() == Algorithm::Fbs) {
        // the step is set relative to the cocoercivity constant
        const double gamma = c.param("step_ratio") * d.beta;
        r.metrics["gamma_over_beta"] = c.param("step_ratio");
        const auto ref = fixed_point_reference(f, g, 1.0, z0);
        TraceOptions options;
        options.reference = ref.xstar;
        const auto t = run_fbs(f, g, FBSConfig(gamma, d.beta), z0, c.iterations(), options);
        require(!t.aborted, ErrorKind::NonFinite, t.diagnostic);
        fbs_checks(c, t, z0, ref.xstar, f.value(ref.xstar) + g.value(ref.xstar), gamma, d.beta, r);
        return;
    }
    SplittingSetup s{f, g, z0, fixed_point_reference(f, g, c.gamma, z0), std::nullopt};
    run_splitting(c, s, r);
}

inline void run_least_squares(const ExperimentConfig& c, ExperimentResult& r) {
    const auto d = lasso_data(c.seed, Eigen::Index(c.count_param("rows")), Eigen::Index(c.count_param("cols")));
    require(d.M.rows() >= d.M.cols(), ErrorKind::InvalidConfig, "least_squares needs rows >= cols");
    const auto f = least_squares(d);
    const Vector xstar = (d.M.transpose() * d.M).ldlt().solve(d.M.transpose() * d.b);
    const Vector z0 = resolve_start(c, Vector::Zero(d.M.cols()));
    TraceOptions options;
    options.reference = xstar;
    const auto t = run_ppa(f, c.gamma, z0, c.iterations(), options);
    require(!t.aborted, ErrorKind::NonFinite, t.diagnostic);
    fbs_checks(c, t, z0, xstar, f.value(xstar), c.gamma, kInfinity, r);
}

inline void run_optimal_fpr(const ExperimentConfig& c, ExperimentResult& r) {
    const std::size_t K = c.iterations();
    const auto s = optimal_fpr_setup(c.param("alpha"), c.count_param("blocks"), K);
    const Vector z0 = resolve_start(c, s.z0);
    SplittingOptions options;
    options.keep_iterates = false;
    options.evaluate_objective = false;
    options.reference = Vector::Zero(z0.size());
    const auto t = run_drs(ProxFunction::indicator(s.spec.v_space()), ProxFunction::indicator(s.spec.u_space()), 1.0, z0,
                           K, options);
    r.trace.resize(t.size());
    r.trace.fill(Column::Fpr, t.fpr);
    r.trace.fill(Column::DistSq, t.dist_sq);
    // the engine reports ||T_PRS z - z||^2 = 4 ||T z - z||^2 for the averaged operator T
    r.trace.fill_with(Column::BoundFpr, [&](std::size_t k) { return 4.0 * s.fpr_lower_bound(k); }, 1);
    if (c.has_check("fpr-lower")) {
        BoundReport rep("optimal-fpr-lower", BoundSense::Lower, 0.0, 0.0);
        double worst = kInfinity;
        for (std::size_t k = 1; k < t.size(); ++k) {
            const double scaled = t.fpr[k] / 4.0 * std::pow(double(k + 1), 2.0 * s.alpha);
            rep.add(k, 0.99, scaled, 0.0);
            worst = std::min(worst, scaled);
        }
        r.add(std::move(rep));
        r.metrics["min_scaled_fpr"] = worst;
    }
    r.metrics["dimension"] = z0.size();
}

inline void run_arbitrarily_slow(const ExperimentConfig& c, ExperimentResult& r) {
    const double p = c.param("exponent");
    require(p > 0.0 && p < 1.0, ErrorKind::InvalidConfig, "exponent must lie in (0, 1)");
    const auto h = [p](double t) { return std::pow(t + 2.0, -p); };
    const auto inverse = [p](double x) { return std::pow(1.0 + x, 1.0 / p) - 2.0; };
    const std::size_t K = c.iterations();
    const auto s = arbitrarily_slow_setup(h, K, 0, inverse);
    const Vector z0 = resolve_start(c, s.z0);
    SplittingOptions options;
    options.keep_iterates = false;
    options.evaluate_objective = false;
    options.reference = Vector::Zero(z0.size());
    const auto t = run_drs(ProxFunction::indicator(s.spec.v_space()), ProxFunction::indicator(s.spec.u_space()), 1.0, z0,
                           K, options);
    r.trace.resize(t.size());
    r.trace.fill(Column::Fpr, t.fpr);
    r.trace.fill(Column::DistSq, t.dist_sq);
    if (c.has_check("distance-lower")) {
        BoundReport rep("distance-lower", BoundSense::Lower, 0.0, 0.0);
        for (std::size_t k = 0; k < t.size(); ++k) rep.add(k, s.distance_lower_bound(k), std::sqrt(t.dist_sq[k]), 0.0);
        r.add(std::move(rep));
    }
    r.metrics["blocks"] = s.spec.blocks();
}

inline void run_dv_lower(const ExperimentConfig& c, ExperimentResult& r) {
    const double alpha = c.param("alpha");
    const std::size_t blocks = c.count_param("blocks");
    auto s = distance_lower_bound_problem(alpha, blocks, 1.0);
    s.z0 = resolve_start(c, s.z0);
    const double gamma = c.param("gamma_scale") * s.z0.norm();
    s.gamma = gamma;
    r.metrics["gamma"] = gamma;
    r.metrics["z0_norm"] = s.z0.norm();

    SplittingSetup setup{s.f_distance(), s.g(), s.z0, {}, 1.0};
    setup.cert = make_certificate(setup.f, setup.g, gamma, Vector::Zero(s.z0.size()), s.z0);
    ExperimentConfig adjusted = c;
    adjusted.gamma = gamma;
    adjusted.checks.clear();
    for (const auto& name : c.checks)
        if (name == "band") adjusted.checks.push_back("nonergodic");
        else if (name == "lipschitz") adjusted.checks.push_back("lipschitz");
    const auto run = run_splitting(adjusted, setup, r);
    // d_V(x_g^k): the objective at the feasible point x_g in U
    const std::vector<double>& dv = run.xg_error;
    r.trace.fill(Column::ObjErr, dv);
    if (c.has_check("lipschitz")) {
        double tau_lo = kInfinity;
        for (double l : run.trace.lambda) tau_lo = std::min(tau_lo, l * (1.0 - l));
        r.trace.fill_with(Column::BoundObjLo, [](std::size_t) { return 0.0; });
        r.trace.fill_with(Column::BoundObjHi, [&](std::size_t k) {
            return lipschitz_objective_bound(setup.cert, 1.0, RateMode::Nonergodic, tau_lo * double(k + 1));
        });
    }
    if (c.has_check("exponent")) {
        require(c.has_check("lipschitz"), ErrorKind::InvalidConfig, "exponent check needs the lipschitz check series");
        const std::size_t lo = c.count_param("fit_lo"), hi = c.count_param("fit_hi");
        require(hi < dv.size(), ErrorKind::InvalidConfig, "fit window exceeds the iteration count");
        const auto fit = fit_decay_exponent(dv, lo, hi);
        r.add(single("distance-decay-exponent", BoundSense::Lower, hi, c.param("min_exponent"), fit.exponent));
        r.metrics["fitted_exponent"] = fit.exponent;
        r.metrics["fit_residual"] = fit.residual;
    }
    if (c.has_check("lockstep")) {
        const std::size_t n = c.count_param("lockstep_iters");
        const double dev = lockstep_deviation(s.f_distance(), s.g(), s.f_indicator(), s.g(), gamma, s.z0, n);
        r.add(single("distance-indicator-lockstep", BoundSense::Upper, n, 1e-10, dev));
        r.metrics["lockstep_deviation"] = dev;
    }
}

inline void run_ppa_diagonal(const ExperimentConfig& c, ExperimentResult& r) {
    const std::size_t K = c.iterations();
    require(K >= 2, ErrorKind::InvalidConfig, "ppa_diagonal needs at least two iterations");
    const auto s = ppa_diagonal_setup(c.param("alpha"), c.gamma, c.count_param("dim"), K - 1);
    const Vector z0 = resolve_start(c, s.z0);
    TraceOptions options;
    options.keep_iterates = false;
    options.reference = Vector::Zero(z0.size());
    const auto t = run_ppa(s.f, s.gamma, z0, K, options);
    r.trace.resize(t.size());
    r.trace.fill(Column::Fpr, t.fpr);
    r.trace.fill(Column::DistSq, t.dist_sq);
    r.trace.fill(Column::ObjErr, t.objective);
    r.trace.fill_with(Column::BoundFpr, [&](std::size_t k) { return s.fpr_lower_bound(k); });
    r.trace.fill_with(Column::BoundObjLo, [&](std::size_t k) { return s.objective_lower_bound(k - 1); }, 1);
    if (c.has_check("ppa-lower")) {
        BoundReport fpr("ppa-fpr-lower", BoundSense::Lower, 0.0, 0.0);
        BoundReport obj("ppa-objective-lower", BoundSense::Lower, 0.0, 0.0);
        for (std::size_t k = 0; k + 1 < t.size(); ++k) {
            fpr.add(k, s.fpr_lower_bound(k), t.fpr[k], 0.0);
            obj.add(k, s.objective_lower_bound(k), t.objective[k + 1], 0.0);
        }
        r.add(std::move(fpr));
        r.add(std::move(obj));
    }
}

inline void run_admm_lasso(const ExperimentConfig& c, ExperimentResult& r) {
    const auto d = lasso_data(c.seed, Eigen::Index(c.count_param("rows")), Eigen::Index(c.count_param("cols")));
    const auto m = d.M.rows();
    const auto p = split_auxiliary(ProxFunction::squared_distance_to_point(Vector::Zero(m)), ProxFunction::l1(c.param("reg")),
                                   d.M, d.b);
    std::mt19937_64 rng(c.seed + 1);
    const Vector z0 = resolve_start(c, gaussian_vector(rng, m));
    const auto schedule = schedule_for(c);
    const double gamma = c.gamma;
    const auto cert = admm_reference(p, gamma, z0);
    AdmmOptions options;
    options.keep_iterates = true;
    const auto t = run_relaxed_admm(p, gamma, schedule, z0, c.iterations(), options);
    const std::size_t n = t.size();

    const auto lam_cum = cumulative(t.lambda);
    double tau_lo = kInfinity;
    for (double l : t.lambda) tau_lo = std::min(tau_lo, l * (1.0 - l));
    auto next_z = [&](std::size_t k) -> const Vector& { return k + 1 < n ? t.iterates[k + 1].z : t.final_z; };
    r.trace.resize(n);
    r.trace.fill_with(Column::Fpr, [&](std::size_t k) { return (next_z(k) - t.iterates[k].z).squaredNorm(); });
    r.trace.fill_with(Column::DistSq, [&](std::size_t k) { return (t.iterates[k].z - cert.zstar).squaredNorm(); });
    r.trace.fill_with(Column::ObjErr, [&](std::size_t k) { return t.objective[k] - cert.obj_star; });
    r.trace.fill_with(Column::ObjErrErgodic, [&](std::size_t k) { return t.ergodic_objective[k] - cert.obj_star; });
    r.trace.fill(Column::FeasGap, t.ergodic_residual_sq);
    r.trace.fill_with(Column::BoundFeas, [&](std::size_t k) { return admm_ergodic_feasibility_bound(cert, lam_cum[k]); });
    if (tau_lo > 0.0) {
        r.trace.fill_with(Column::BoundObjLo, [&](std::size_t k) { return admm_nonergodic_primal_bounds(cert, tau_lo, k).lower; });
        r.trace.fill_with(Column::BoundObjHi, [&](std::size_t k) { return admm_nonergodic_primal_bounds(cert, tau_lo, k).upper; });
    }

    if (c.has_check("bands")) {
        auto b = check_admm_bands(t, cert);
        for (auto* rep : {&b.nonergodic_upper, &b.nonergodic_lower, &b.nonergodic_feasibility, &b.ergodic_upper,
                          &b.ergodic_lower, &b.ergodic_feasibility})
            if (!rep->empty()) r.add(std::move(*rep));
    }
    if (c.has_check("fundamental")) {
        auto f = check_admm_fundamental(t, cert, c.param("identity_tol"));
        r.add(std::move(f.upper));
        r.add(std::move(f.lower));
        r.add(std::move(f.ergodic_lower));
        r.add(std::move(f.identity));
    }
    if (c.has_check("step")) {
        BoundReport rep("admm-step-identity", BoundSense::Upper, 0.0, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const auto& it = t.iterates[k];
            const double dev = (next_z(k) - it.z + 2.0 * gamma * t.lambda[k] * it.residual).norm();
            rep.add(k, 0.0, dev, 1e-12 * std::max(1.0, it.z.norm()));
        }
        r.add(std::move(rep));
    }
    if (c.has_check("dual-prs")) {
        const auto [df, dg] = dual_functions(p);
        SplittingOptions po;
        po.evaluate_objective = false;
        const auto prs = run_relaxed_prs(df, dg, gamma, schedule, z0, c.iterations(), po);
        BoundReport rep("admm-dual-prs-equivalence", BoundSense::Upper, 0.0, 0.0);
        const double tol = c.param("equivalence_tol");
        for (std::size_t k = 0; k < n; ++k)
            rep.add(k, 0.0, (prs.z[k] - t.iterates[k].z).norm(), tol * std::max(1.0, prs.z[k].norm()));
        r.add(std::move(rep));
        r.metrics["y_strategy"] = to_string(make_solvers(p).y_solver.strategy());
    }
    r.metrics["dist0"] = cert.dist0;
    r.metrics["obj_star"] = cert.obj_star;
    r.metrics["wstar_norm"] = cert.wstar_norm();
}

inline std::vector<std::size_t> hop_distances(const Graph& g, std::size_t source) {
    std::vector<std::size_t> dist(g.nodes(), std::size_t(-1));
    std::queue<std::size_t> q;
    dist[source] = 0;
    q.push(source);
    while (!q.empty()) {
        const auto u = q.front();
        q.pop();
        for (auto v : g.neighbors(u))
            if (dist[v] == std::size_t(-1)) dist[v] = dist[u] + 1, q.push(v);
    }
    return dist;
}

inline void run_consensus(const ExperimentConfig& c, ExperimentResult& r) {
    const std::size_t nodes = c.count_param("nodes");
    require(nodes >= 2, ErrorKind::InvalidConfig, "need at least two nodes");
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> weight(0.5, 2.0);
    std::normal_distribution<double> target;
    std::vector<ProxFunction> local;
    std::vector<double> a(nodes), t(nodes);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) {
        a[i] = weight(rng);
        t[i] = target(rng);
        local.push_back(ProxFunction::squared_distance_to_point(Vector::Constant(1, t[i]), a[i]));
        num += a[i] * t[i];
        den += a[i];
    }
    const double xbar = num / den;
    DistributedProblem problem{Graph::path(nodes), local, 1};
    const double gamma = c.gamma;
    const std::size_t K = c.iterations();
    const auto dist = run_distributed_admm(problem, gamma, K);
    const double obj_star = problem.consensus_objective(Vector::Constant(1, xbar));

    const auto arc = arc_formulation(problem);
    const Vector z0 = Vector::Zero(arc.constraint_dim());
    const auto cert = admm_reference(arc, 2.0 * gamma, z0);
    r.trace.resize(dist.size());
    r.trace.fill_with(Column::ObjErr, [&](std::size_t k) { return dist.objective[k] - obj_star; });
    r.trace.fill(Column::FeasGap, dist.disagreement);
    // round k+1 is iterate k of the arc-form ADMM at penalty 2 gamma with lambda = 1/2
    r.trace.fill_with(Column::BoundObjLo, [&](std::size_t k) { return admm_nonergodic_primal_bounds(cert, 0.25, k - 1).lower; }, 1);
    r.trace.fill_with(Column::BoundObjHi, [&](std::size_t k) { return admm_nonergodic_primal_bounds(cert, 0.25, k - 1).upper; }, 1);

    if (c.has_check("consensus")) {
        double worst = 0.0;
        for (const auto& x : dist.final_x) worst = std::max(worst, std::abs(x[0] - xbar));
        r.add(single("consensus-closed-form", BoundSense::Upper, K, c.param("consensus_tol"), worst));
        r.metrics["consensus_error"] = worst;
        r.metrics["closed_form_minimizer"] = xbar;
    }
    if (c.has_check("band")) {
        BoundReport upper("distributed-objective-upper", BoundSense::Upper);
        BoundReport lower("distributed-objective-lower", BoundSense::Lower);
        for (std::size_t k = 0; k + 1 < dist.size(); ++k) {
            const Band band = admm_nonergodic_primal_bounds(cert, 0.25, k);
            upper.add(k, band.upper, dist.objective[k + 1] - obj_star);
            lower.add(k, band.lower, dist.objective[k + 1] - obj_star);
        }
        r.add(std::move(upper));
        r.add(std::move(lower));
        const auto admm = run_relaxed_admm(arc, 2.0 * gamma, RelaxationSchedule::constant(0.5), z0, K - 1);
        BoundReport same("distributed-matches-arc-admm", BoundSense::Upper, 1e-9, 0.0);
        for (std::size_t k = 0; k + 1 < dist.size(); ++k)
            for (std::size_t i = 0; i < nodes; ++i)
                same.add(k, 0.0, std::abs(dist.x[k + 1][i][0] - admm.iterates[k].x[Eigen::Index(i)]));
        r.add(std::move(same));
        auto b = check_admm_bands(admm, cert);
        r.add(std::move(b.nonergodic_feasibility));
        r.add(std::move(b.ergodic_feasibility));
    }
    if (c.has_check("locality")) {
        // Changing f_0 may reach node i only after hop(0, i) + 1 rounds.
        auto changed = problem;
        changed.local[0] = ProxFunction::squared_distance_to_point(Vector::Constant(1, t[0] + 1.0), a[0]);
        const auto hops = hop_distances(problem.graph, 0);
        const std::size_t rounds = std::min<std::size_t>(K, *std::max_element(hops.begin(), hops.end()) + 1);
        const auto base = run_distributed_admm(problem, gamma, rounds);
        const auto moved = run_distributed_admm(changed, gamma, rounds);
        BoundReport rep("communication-locality", BoundSense::Upper, 0.0, 0.0);
        std::size_t reached = 0;
        for (std::size_t i = 0; i < nodes; ++i)
            for (std::size_t k = 0; k <= rounds; ++k) {
                const double diff = std::abs(base.x[k][i][0] - moved.x[k][i][0]);
                if (k <= hops[i]) rep.add(k, 0.0, diff, 0.0);
                else if (diff > 0.0 && k == hops[i] + 1) ++reached;
            }
        r.add(std::move(rep));
        r.metrics["nodes_reached_on_schedule"] = reached;
    }
    r.metrics["edges"] = problem.graph.edges().size();
}

inline void run_rotation_pair(const ExperimentConfig& c, ExperimentResult& r) {
    const auto s = optimal_fpr_setup(c.param("alpha"), c.count_param("blocks"), c.iterations());
    const ConvexSetPair pair{ConvexSet::subspace(s.spec.v_space()), ConvexSet::subspace(s.spec.u_space())};
    const Vector z0 = resolve_start(c, s.z0);
    run_feasibility_problem(c, pair, z0, z0.norm(), r);
}

inline void run_box_ball(const ExperimentConfig& c, ExperimentResult& r) {
    const auto n = Eigen::Index(c.count_param("dim"));
    require(n >= 1, ErrorKind::InvalidConfig, "dim must be positive");
    std::mt19937_64 rng(c.seed);
    const Vector p = gaussian_vector(rng, n);
    std::uniform_real_distribution<double> width(0.1, 1.0);
    Vector lo(n), hi(n);
    for (Eigen::Index i = 0; i < n; ++i) lo[i] = p[i] - width(rng), hi[i] = p[i] + width(rng);
    const Vector center = p + gaussian_vector(rng, n, 0.3);
    const ConvexSetPair pair{ConvexSet::box(lo, hi), ConvexSet::ball(center, (center - p).norm() + 0.2)};
    const Vector z0 = resolve_start(c, p + gaussian_vector(rng, n, 2.0));
    const auto cert = fixed_point_reference(pair.f_set.indicator(), pair.g_set.indicator(), 1.0, z0);
    run_feasibility_problem(c, pair, z0, cert.dist0, r);
}

} // namespace detail

inline const std::vector<ProblemKind>& problem_catalog() {
    using A = Algorithm;
    auto fixed = [](std::vector<std::string> names) {
        return [names](const ExperimentConfig&) { return names; };
    };
    static const std::vector<ProblemKind> catalog = {
        {"abs_example", "f = |x|, g = 0 from z0 = 2 - eps (PRS oscillates around 0)", {A::Prs, A::Drs},
         {{"eps", 0.1}}, {"oracle", "tightness", "fundamental", "ergodic", "nonergodic", "fpr", "fejer", "sqrt-fpr", "lipschitz"},
         std::nullopt, detail::abs_defaults, detail::run_abs_example},
        {"square_feasibility", "two coordinate axes in R^2 from (1, 1)", {A::Feasibility, A::Prs, A::Drs}, Json::object(),
         {"oracle", "gap-factor", "feasibility"}, std::nullopt,
         [](const ExperimentConfig& c) {
             std::vector<std::string> v{"feasibility"};
             if (c.schedule.is_constant(1.0) && c.algo() != Algorithm::Drs && detail::default_start(c))
                 v.insert(v.end(), {"oracle", "gap-factor"});
             return v;
         },
         detail::run_square},
        {"scalar_pair", "f = |x|, g = |x - 1| on the real line", {A::Drs, A::Prs}, {{"start", 5.0}},
         {"drs-1d", "fundamental", "ergodic", "nonergodic", "fpr", "fejer", "lipschitz"}, std::nullopt,
         [](const ExperimentConfig& c) {
             auto v = detail::generic_defaults(c, {"fundamental", "ergodic"});
             if (c.algo() == Algorithm::Drs || c.schedule.is_constant(0.5)) v.push_back("drs-1d");
             return v;
         },
         detail::run_scalar_pair},
        {"random_pair", "seeded strongly convex quadratic plus l1 term", {A::Prs, A::Drs}, {{"dim", 10}, {"reg", 0.5}},
         {"fundamental", "ergodic", "nonergodic", "fpr", "fejer", "sqrt-fpr"}, std::size_t(200),
         [](const ExperimentConfig& c) { return detail::generic_defaults(c, {"fundamental", "ergodic", "sqrt-fpr", "fejer"}); },
         detail::run_random_pair},
        {"lasso", "reg ||x||_1 + 1/2 ||M x - b||^2 with seeded Gaussian data", {A::Fbs, A::Prs, A::Drs},
         {{"rows", 20}, {"cols", 10}, {"reg", 0.1}, {"step_ratio", 1.0}},
         {"fbs", "monotone", "fundamental", "ergodic", "nonergodic", "fpr", "fejer", "sqrt-fpr"}, std::nullopt,
         [](const ExperimentConfig& c) {
             if (c.algo() == Algorithm::Fbs) return std::vector<std::string>{"fbs", "monotone"};
             return detail::generic_defaults(c, {"fundamental", "ergodic"});
         },
         detail::run_lasso},
        {"least_squares", "1/2 ||M x - b||^2 with seeded Gaussian data", {A::Ppa}, {{"rows", 20}, {"cols", 10}},
         {"fbs", "monotone"}, std::nullopt, fixed({"fbs", "monotone"}), detail::run_least_squares},
        {"thm_optimal_fpr", "rotation-pair subspaces with FPR of order (k+1)^(-2 alpha)", {A::Drs},
         {{"alpha", 0.75}, {"blocks", 100000}}, {"fpr-lower"}, std::size_t(300), fixed({"fpr-lower"}),
         detail::run_optimal_fpr},
        {"arbitrarily_slow", "subspace pair whose distance to the solution decays like (k+2)^(-exponent)", {A::Drs},
         {{"exponent", 0.05}}, {"distance-lower"}, std::size_t(200), fixed({"distance-lower"}),
         detail::run_arbitrarily_slow},
        {"dv_lower", "f = d_V, g = iota_U on the rotation-pair subspaces", {A::Drs},
         {{"alpha", 0.75}, {"blocks", 100000}, {"gamma_scale", 1.0}, {"fit_lo", 10}, {"fit_hi", 300},
          {"min_exponent", -0.85}, {"lockstep_iters", 500}},
         {"band", "lipschitz", "exponent", "lockstep"}, std::size_t(300), fixed({"band", "lipschitz", "exponent"}),
         detail::run_dv_lower},
        {"ppa_diagonal", "diagonal quadratic with slowly decaying start", {A::Ppa}, {{"alpha", 1.0}, {"dim", 100000}},
         {"ppa-lower"}, std::size_t(301), fixed({"ppa-lower"}), detail::run_ppa_diagonal},
        {"admm_lasso", "1/2 ||x||^2 + reg ||y||_1 subject to M y - x = b", {A::Admm},
         {{"rows", 12}, {"cols", 6}, {"reg", 0.5}, {"identity_tol", 1e-8}, {"equivalence_tol", 1e-12}},
         {"bands", "fundamental", "step", "dual-prs"}, std::nullopt, fixed({"bands", "fundamental", "step"}),
         detail::run_admm_lasso},
        {"consensus_path", "path graph with weighted scalar quadratics at the nodes", {A::Dadmm},
         {{"nodes", 5}, {"consensus_tol", 1e-6}}, {"consensus", "band", "locality"}, std::size_t(2000),
         fixed({"consensus", "band", "locality"}), detail::run_consensus},
        {"rotation_pair", "feasibility between the rotation-pair subspaces", {A::Feasibility, A::Prs, A::Drs},
         {{"alpha", 0.75}, {"blocks", 10000}}, {"feasibility"}, std::size_t(300), fixed({"feasibility"}),
         detail::run_rotation_pair},
        {"box_ball", "seeded box and ball sharing a point", {A::Feasibility, A::Prs, A::Drs}, {{"dim", 6}},
         {"feasibility"}, std::size_t(300), fixed({"feasibility"}), detail::run_box_ball},
    };
    return catalog;
}

inline const ProblemKind& find_problem(const std::string& name) {
    std::string known;
    for (const auto& p : problem_catalog()) {
        if (p.name == name) return p;
        known += (known.empty() ? "" : ", ") + p.name;
    }
    fail(ErrorKind::InvalidConfig, "unknown problem '" + name + "'; known problems: " + known);
}

// Applies defaults and checks the config against the problem kind.
inline ExperimentConfig finalize_config(ExperimentConfig c) {
    const auto& kind = find_problem(c.problem);
    if (c.name.empty()) c.name = c.problem;
    if (!c.algorithm) c.algorithm = kind.algorithms.front();
    if (std::find(kind.algorithms.begin(), kind.algorithms.end(), *c.algorithm) == kind.algorithms.end()) {
        std::string allowed;
        for (auto a : kind.algorithms) allowed += (allowed.empty() ? "" : ", ") + to_string(a);
        fail(ErrorKind::InvalidConfig, "problem '" + c.problem + "' does not support algorithm '" +
                                           to_string(*c.algorithm) + "'; use one of: " + allowed);
    }
    if (!c.iters) c.iters = kind.iters.value_or(10000);
    require(*c.iters >= 1, ErrorKind::InvalidConfig, "iters must be >= 1");
    const bool relaxed = *c.algorithm == Algorithm::Prs || *c.algorithm == Algorithm::Admm ||
                         *c.algorithm == Algorithm::Feasibility;
    if (*c.algorithm == Algorithm::Drs) {
        require(c.schedule.is_constant(0.5), ErrorKind::InvalidConfig, "algorithm drs fixes lambda = 1/2; use prs for other schedules");
    } else if (!relaxed) {
        require(c.schedule == ScheduleSpec{}, ErrorKind::InvalidConfig,
                "algorithm " + to_string(*c.algorithm) + " takes no relaxation schedule");
    }
    if (c.schedule.kind == RelaxationSchedule::Kind::Explicit)
        require(c.schedule.values.size() > *c.iters, ErrorKind::InvalidConfig,
                "explicit schedule needs iters + 1 = " + std::to_string(*c.iters + 1) + " values");

    Json params = kind.defaults;
    for (const auto& [key, value] : c.params.items()) {
        if (!params.contains(key)) {
            std::string allowed;
            for (const auto& [k, v] : kind.defaults.items()) allowed += (allowed.empty() ? "" : ", ") + k;
            fail(ErrorKind::InvalidConfig, "problem '" + c.problem + "' has no parameter '" + key + "'" +
                                               (allowed.empty() ? std::string(" (it takes none)") : "; parameters: " + allowed));
        }
        const Json& d = kind.defaults[key];
        require(value.is_number(), ErrorKind::InvalidConfig,
                "parameter '" + key + "' must be a number");
        if (d.is_number_integer())
            require(value.is_number_integer() && value.get<long long>() >= 0, ErrorKind::InvalidConfig,
                    "parameter '" + key + "' must be a nonnegative integer");
        params[key] = value;
    }
    c.params = std::move(params);

    if (c.checks.empty()) c.checks = kind.default_checks(c);
    for (const auto& check : c.checks) {
        if (std::find(kind.checks.begin(), kind.checks.end(), check) == kind.checks.end()) {
            std::string allowed;
            for (const auto& k : kind.checks) allowed += (allowed.empty() ? "" : ", ") + k;
            fail(ErrorKind::InvalidConfig, "problem '" + c.problem + "' has no check '" + check + "'; checks: " + allowed);
        }
    }
    return c;
}

inline ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>") {
    return finalize_config(parse_config_json(parse_json_text(text, origin)));
}

inline ExperimentConfig load_config(const fs::path& path) {
    return parse_config(read_text_file(path), path.string());
}

// Runs a finalized config. Failures inside the run are recorded in the result.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
    ExperimentResult r;
    r.name = config.name;
    r.seed = config.seed;
    r.config = config_to_json(config);
    try {
        const ExperimentConfig c = finalize_config(config);
        r.config = config_to_json(c);
        find_problem(c.problem).run(c, r);
    } catch (const Error& e) {
        r.error = e.what();
    }
    return r;
}

} // namespace opsplit
