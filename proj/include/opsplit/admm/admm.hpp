#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "opsplit/admm/subproblem.hpp"
#include "opsplit/km/schedule.hpp"

namespace opsplit {

struct AdmmIterate {
    Vector x;
    Vector y;
    Vector w_dg;
    Vector w_df;
    Vector z;
    Vector residual; // A x + B y - b
};

struct AdmmSolvers {
    SubproblemSolver x_solver;
    SubproblemSolver y_solver;
};

inline AdmmSolvers make_solvers(const LinearlyConstrainedProblem& p, InnerSolverLimits limits = {}) {
    p.validate();
    return {SubproblemSolver(p.f, p.A, p.f_blocks, limits), SubproblemSolver(p.g, p.B, p.g_blocks, limits)};
}

// One evaluation of the dual PRS operator at z, expressed in primal variables.
inline AdmmIterate apply_dual_prs(const LinearlyConstrainedProblem& p, const AdmmSolvers& s, double gamma,
                                  const Vector& z) {
    require(z.size() == p.constraint_dim(), ErrorKind::InvalidArgument, "driving vector dimension mismatch");
    AdmmIterate it;
    it.z = z;
    auto gy = dual_prox_g(s.y_solver, p.b, gamma, z);
    it.y = std::move(gy.primal);
    it.w_dg = std::move(gy.dual);
    auto fx = dual_prox_f(s.x_solver, gamma, 2.0 * it.w_dg - z);
    it.x = std::move(fx.primal);
    it.w_df = std::move(fx.dual);
    it.residual = p.residual(it.x, it.y);
    return it;
}

inline AdmmIterate apply_dual_prs(const LinearlyConstrainedProblem& p, double gamma, const Vector& z) {
    return apply_dual_prs(p, make_solvers(p), gamma, z);
}

// Fenchel-Young values d_f(w_df) and d_g(w_dg) at an iterate whose inclusions hold.
inline double dual_value_f(const LinearlyConstrainedProblem& p, const AdmmIterate& it) {
    return (p.A.transpose() * it.w_df).dot(it.x) - p.f.value(it.x);
}

inline double dual_value_g(const LinearlyConstrainedProblem& p, const AdmmIterate& it) {
    return (p.B.transpose() * it.w_dg).dot(it.y) - p.g.value(it.y) - it.w_dg.dot(p.b);
}

struct AdmmTrace {
    std::size_t iterations = 0;
    double gamma = 1.0;
    std::vector<double> lambda;
    std::vector<double> residual_sq;      // ||A x^k + B y^k - b||^2
    std::vector<double> objective;        // f(x^k) + g(y^k)
    std::vector<double> dual_objective;   // d_f(w_df^k) + d_g(w_dg^k)
    std::vector<double> ergodic_residual_sq;
    std::vector<double> ergodic_objective;
    std::vector<double> consistency;      // ||w_dg^k - z^k + gamma (B y^k - b)||
    std::vector<AdmmIterate> iterates;    // only with keep_iterates
    AdmmIterate final_iterate;
    Vector final_z;                       // z^{K+1}
    Vector final_ergodic_x, final_ergodic_y;

    std::size_t size() const { return lambda.size(); }
    bool has_iterates() const { return !iterates.empty(); }
};

struct AdmmOptions {
    bool keep_iterates = true;
    bool evaluate_dual = true;
    InnerSolverLimits limits;
    std::function<void(std::size_t, const AdmmIterate&)> observer;
};

// Relaxed ADMM in the four-line form started at k = -1 with w_dg^{-1} = z0,
// x^{-1} = 0, y^{-1} = 0, lambda_{-1} = 1/2. The driving sequence is rebuilt from
// z^{k+1} = z^k - 2 gamma lambda_k (A x^k + B y^k - b).
inline AdmmTrace run_relaxed_admm(const LinearlyConstrainedProblem& p, double gamma,
                                  const RelaxationSchedule& schedule, const Vector& z0, std::size_t iters,
                                  const AdmmOptions& options = {}) {
    require_positive(gamma, "gamma");
    require(z0.size() == p.constraint_dim(), ErrorKind::InvalidArgument, "z0 dimension mismatch");
    require_finite(z0, "z0");
    const AdmmSolvers s = make_solvers(p, options.limits);

    AdmmTrace trace;
    trace.gamma = gamma;
    Vector x = Vector::Zero(p.x_dim()), y = Vector::Zero(p.y_dim());
    Vector w_dg = z0;
    Vector r = p.residual(x, y);
    double lambda = 0.5;
    Vector z = z0;
    Vector sum_x = Vector::Zero(p.x_dim()), sum_y = Vector::Zero(p.y_dim());
    double weight = 0.0;

    for (std::size_t step = 0; step <= iters; ++step) {
        const Vector correction = (2.0 * lambda - 1.0) * r;
        const Vector y_next = s.y_solver.solve(gamma, w_dg - gamma * (p.A * x - p.b + correction), &y);
        const Vector w_dg_next = w_dg - gamma * (p.A * x + p.B * y_next - p.b) - gamma * correction;
        const Vector x_next = s.x_solver.solve(gamma, w_dg_next - gamma * (p.B * y_next - p.b), &x);
        const Vector r_next = p.residual(x_next, y_next);
        require(r_next.allFinite(), ErrorKind::NonFinite, "ADMM iterate became non-finite at k=" + std::to_string(step));

        const std::size_t k = step; // index of the iterate just produced
        if (k > 0) z -= 2.0 * gamma * lambda * r;
        x = x_next;
        y = y_next;
        w_dg = w_dg_next;
        r = r_next;
        lambda = schedule.lambda(k);

        AdmmIterate it{x, y, w_dg, w_dg - gamma * r, z, r};
        trace.lambda.push_back(lambda);
        trace.residual_sq.push_back(r.squaredNorm());
        trace.objective.push_back(p.objective(x, y));
        if (options.evaluate_dual) trace.dual_objective.push_back(dual_value_f(p, it) + dual_value_g(p, it));
        trace.consistency.push_back((w_dg - z + gamma * (p.B * y - p.b)).norm());
        sum_x += lambda * x;
        sum_y += lambda * y;
        weight += lambda;
        const Vector ex = sum_x / weight, ey = sum_y / weight;
        trace.ergodic_residual_sq.push_back(p.residual(ex, ey).squaredNorm());
        trace.ergodic_objective.push_back(p.objective(ex, ey));
        if (options.observer) options.observer(k, it);
        if (k == iters) {
            trace.final_ergodic_x = ex;
            trace.final_ergodic_y = ey;
            trace.final_iterate = it;
        }
        if (options.keep_iterates) trace.iterates.push_back(std::move(it));
    }
    trace.iterations = iters;
    trace.final_z = z - 2.0 * gamma * lambda * r;
    return trace;
}

// d_f and d_g as functions whose prox is available through the subproblem solvers;
// their values are not materialized.
inline std::pair<ProxFunction, ProxFunction> dual_functions(const LinearlyConstrainedProblem& p) {
    const auto s = std::make_shared<AdmmSolvers>(make_solvers(p));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    kind::Custom df, dg;
    df.value = [nan](const Vector&) { return nan; };
    dg.value = df.value;
    df.prox = [s](double gamma, const Vector& w) { return dual_prox_f(s->x_solver, gamma, w).dual; };
    const Vector b = p.b;
    dg.prox = [s, b](double gamma, const Vector& v) { return dual_prox_g(s->y_solver, b, gamma, v).dual; };
    return {ProxFunction::custom(std::move(df)), ProxFunction::custom(std::move(dg))};
}

} // namespace opsplit
