#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>

#include "opsplit/core/prs.hpp"
#include "opsplit/km/schedule.hpp"
#include "opsplit/km/trace.hpp"

namespace opsplit {

struct SplittingOptions : TraceOptions {
    // Called once per evaluated iterate, including the final one.
    std::function<void(std::size_t, const TriangleIterate&)> observer;
    bool evaluate_objective = true;
    bool evaluate_ergodic_objective = false;
};

// Relaxed Peaceman-Rachford: z+ = z + 2 lambda (x_f - x_g).
inline IterationTrace run_relaxed_prs(const ProxFunction& f, const ProxFunction& g, double gamma,
                                      const RelaxationSchedule& schedule, const Vector& z0, std::size_t iters,
                                      const SplittingOptions& options = {}) {
    require_positive(gamma, "gamma");
    require(iters >= 1, ErrorKind::InvalidArgument, "iteration count must be at least 1");
    require_finite(z0, "initial point");
    if (options.reference) require_same_dim(*options.reference, z0, "reference point");

    IterationTrace trace;
    trace.iterations = iters;
    Vector z = z0;
    Vector sum_g = Vector::Zero(z0.size());
    Vector sum_f = Vector::Zero(z0.size());
    double weight = 0.0;

    for (std::size_t k = 0;; ++k) {
        const double lambda = schedule.lambda(k);
        TriangleIterate tri = apply_prs_operator(f, g, gamma, z);
        const Vector diff = tri.x_f - tri.x_g;

        trace.lambda.push_back(lambda);
        trace.fpr.push_back(4.0 * diff.squaredNorm());
        if (options.reference) trace.dist_sq.push_back((z - *options.reference).squaredNorm());
        if (options.evaluate_objective) {
            const double fv = f.value(tri.x_f);
            const double gv = g.value(tri.x_g);
            trace.f_value.push_back(fv);
            trace.g_value.push_back(gv);
            trace.objective.push_back(fv + gv);
        }

        sum_g += lambda * tri.x_g;
        sum_f += lambda * tri.x_f;
        weight += lambda;
        trace.final_ergodic_g = sum_g / weight;
        trace.final_ergodic_f = sum_f / weight;
        trace.ergodic_gap.push_back((trace.final_ergodic_g - trace.final_ergodic_f).norm());
        if (options.evaluate_ergodic_objective) {
            trace.ergodic_objective.push_back(f.value(trace.final_ergodic_f) + g.value(trace.final_ergodic_g));
        }
        if (options.keep_iterates) {
            trace.z.push_back(z);
            trace.ergodic_g.push_back(trace.final_ergodic_g);
            trace.ergodic_f.push_back(trace.final_ergodic_f);
        }
        if (options.observer) options.observer(k, tri);
        if (options.keep_iterates) trace.triangles.push_back(std::move(tri));
        if (k == iters) break;

        Vector next = z + 2.0 * lambda * diff;
        if (!all_finite(next)) {
            trace.aborted = true;
            trace.diagnostic = "non-finite iterate at k=" + std::to_string(k + 1);
            trace.iterations = k;
            break;
        }
        trace.step_sq.push_back((next - z).squaredNorm());
        z = std::move(next);
    }
    trace.final_z = z;
    return trace;
}

inline IterationTrace run_drs(const ProxFunction& f, const ProxFunction& g, double gamma, const Vector& z0,
                              std::size_t iters, const SplittingOptions& options = {}) {
    return run_relaxed_prs(f, g, gamma, RelaxationSchedule::constant(0.5), z0, iters, options);
}

inline IterationTrace run_prs(const ProxFunction& f, const ProxFunction& g, double gamma, const Vector& z0,
                              std::size_t iters, const SplittingOptions& options = {}) {
    return run_relaxed_prs(f, g, gamma, RelaxationSchedule::constant(1.0), z0, iters, options);
}

struct FBSConfig {
    double gamma = 1.0;
    double beta = 1.0; // the gradient of the smooth term is (1/beta)-Lipschitz

    FBSConfig() = default;
    FBSConfig(double gamma_, double beta_) : gamma(gamma_), beta(beta_) {
        require_positive(gamma, "gamma");
        require(beta > 0.0, ErrorKind::InvalidConfig, "beta must be positive");
        require(gamma < 2.0 * beta, ErrorKind::InvalidConfig,
                "forward-backward step needs gamma < 2 beta (gamma=" + std::to_string(gamma) +
                    ", beta=" + std::to_string(beta) + ")");
    }

    // 2 beta / (4 beta - gamma); tends to 1/2 as beta grows.
    double alpha() const { return std::isinf(beta) ? 0.5 : 2.0 * beta / (4.0 * beta - gamma); }
};

// z+ = prox_{gamma f}(z - gamma grad g(z)); fpr_k = ||z^{k+1} - z^k||^2, objective_k = f(z^k) + g(z^k).
inline IterationTrace run_fbs(const ProxFunction& f, const ProxFunction& g, const FBSConfig& config, const Vector& z0,
                              std::size_t iters, const TraceOptions& options = {}) {
    require(g.is_smooth(), ErrorKind::InvalidConfig, "forward-backward needs a smooth second function");
    const FBSConfig checked(config.gamma, config.beta);
    require(iters >= 1, ErrorKind::InvalidArgument, "iteration count must be at least 1");
    require_finite(z0, "initial point");
    const double gamma = checked.gamma;

    IterationTrace trace;
    trace.iterations = iters;
    Vector z = z0;
    for (std::size_t k = 0;; ++k) {
        Vector next = f.prox(gamma, z - gamma * g.gradient(z));
        trace.lambda.push_back(1.0);
        trace.fpr.push_back((next - z).squaredNorm());
        trace.objective.push_back(f.value(z) + g.value(z));
        if (options.reference) trace.dist_sq.push_back((z - *options.reference).squaredNorm());
        if (options.keep_iterates) trace.z.push_back(z);
        if (k == iters) break;
        if (!all_finite(next)) {
            trace.aborted = true;
            trace.diagnostic = "non-finite iterate at k=" + std::to_string(k + 1);
            trace.iterations = k;
            break;
        }
        trace.step_sq.push_back(trace.fpr.back());
        z = std::move(next);
    }
    trace.final_z = z;
    return trace;
}

inline IterationTrace run_ppa(const ProxFunction& f, double gamma, const Vector& z0, std::size_t iters,
                              const TraceOptions& options = {}) {
    return run_fbs(f, ProxFunction::zero(), FBSConfig(gamma, kInfinity), z0, iters, options);
}

// Subgradient of f at z^{k+1} recovered from one forward-backward step.
inline Vector fbs_subgradient(const ProxFunction& g, double gamma, const Vector& z, const Vector& z_next) {
    return (z - z_next - gamma * g.gradient(z)) / gamma;
}

} // namespace opsplit
