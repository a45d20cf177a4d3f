#pragma once

#include <algorithm>
#include <cstddef>

#include "opsplit/core/report.hpp"
#include "opsplit/km/schedule.hpp"
#include "opsplit/km/trace.hpp"

namespace opsplit {

// dist0_sq / sum_{i<=k} tau_i
inline double fpr_bound(const RelaxationSchedule& schedule, double dist0_sq, std::size_t k) {
    double sum = 0.0;
    for (std::size_t i = 0; i <= k; ++i) {
        const double t = schedule.tau(i);
        require(t > 0.0, ErrorKind::UnsupportedSchedule,
                "fpr bound needs lambda_k < 1; tau vanishes at k=" + std::to_string(i));
        sum += t;
    }
    return dist0_sq / sum;
}

// fpr_bound for k = 0..count-1 in one pass.
inline std::vector<double> fpr_bound_series(const RelaxationSchedule& schedule, double dist0_sq, std::size_t count) {
    std::vector<double> out(count);
    double sum = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        const double t = schedule.tau(k);
        require(t > 0.0, ErrorKind::UnsupportedSchedule,
                "fpr bound needs lambda_k < 1; tau vanishes at k=" + std::to_string(k));
        out[k] = dist0_sq / (sum += t);
    }
    return out;
}

inline BoundReport check_fpr_bound(const IterationTrace& trace, const RelaxationSchedule& schedule, double dist0_sq) {
    BoundReport report("fpr-bound", BoundSense::Upper);
    double tau_sum = 0.0;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const double t = schedule.tau(k);
        require(t > 0.0, ErrorKind::UnsupportedSchedule, "fpr bound needs lambda_k < 1");
        tau_sum += t;
        report.add(k, dist0_sq / tau_sum, trace.fpr[k]);
    }
    return report;
}

inline BoundReport check_fpr_monotone(const IterationTrace& trace) {
    BoundReport report("fpr-monotone", BoundSense::Upper, 1e-10, 0.0);
    for (std::size_t k = 1; k < trace.size(); ++k) report.add(k, trace.fpr[k - 1], trace.fpr[k]);
    return report;
}

inline BoundReport check_fejer(const IterationTrace& trace, const Vector& zstar) {
    require(trace.size() > 0, ErrorKind::InvalidArgument, "empty trace");
    BoundReport report("fejer", BoundSense::Upper, 1e-10, 0.0);
    std::vector<double> dist;
    if (trace.has_iterates()) {
        for (const auto& z : trace.z) dist.push_back((z - zstar).squaredNorm());
    } else {
        require(!trace.dist_sq.empty(), ErrorKind::InvalidArgument,
                "fejer check needs stored iterates or reference distances");
        dist = trace.dist_sq;
    }
    for (std::size_t k = 1; k < dist.size(); ++k) report.add(k, dist[k - 1], dist[k]);
    return report;
}

// sum_{i<=k} tau_i fpr_i <= dist0_sq for every k.
inline BoundReport check_fpr_summability(const IterationTrace& trace, const RelaxationSchedule& schedule,
                                         double dist0_sq) {
    BoundReport report("fpr-summability", BoundSense::Upper);
    double sum = 0.0;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        sum += schedule.tau(k) * trace.fpr[k];
        report.add(k, dist0_sq, sum);
    }
    return report;
}

// Inexact runs: a_{k+1} <= a_k + (lambda^2/tau)||e^k||^2 and
// sum tau_i a_i <= dist0_sq + sum xi_i combine into
// fpr_k <= (dist0_sq + sum_{i<k} xi_i + sum_{i<k} T_i eps_i) / T_k with T_k = sum_{i<=k} tau_i.
inline BoundReport check_inexact_fpr(const IterationTrace& trace, const RelaxationSchedule& schedule,
                                     double dist0_sq) {
    require(trace.xi.size() + 1 >= trace.size() && trace.error_norm.size() + 1 >= trace.size(),
            ErrorKind::InvalidArgument, "inexact check needs error accounting recorded against a reference point");
    BoundReport report("inexact-fpr", BoundSense::Upper);
    double tau_cum = 0.0, xi_sum = 0.0, err_sum = 0.0;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const double t = schedule.tau(k);
        require(t > 0.0, ErrorKind::UnsupportedSchedule, "inexact bound needs lambda_k < 1");
        tau_cum += t;
        report.add(k, (dist0_sq + xi_sum + err_sum) / tau_cum, trace.fpr[k]);
        if (k < trace.xi.size()) {
            const double l = schedule.lambda(k);
            xi_sum += trace.xi[k];
            err_sum += tau_cum * (l * l / t) * trace.error_norm[k] * trace.error_norm[k];
        }
    }
    return report;
}

// max_{k in [K/2, K]} (k+1) fpr_k <= max_{k in [K/4, K/2]} (k+1) fpr_k.
inline BoundReport check_little_o_tail(const IterationTrace& trace) {
    require(trace.size() >= 8, ErrorKind::InvalidArgument, "tail check needs a longer trace");
    const std::size_t K = trace.size() - 1;
    auto window_max = [&](std::size_t lo, std::size_t hi) {
        double m = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) m = std::max(m, double(k + 1) * trace.fpr[k]);
        return m;
    };
    BoundReport report("little-o-tail", BoundSense::Upper);
    report.add(K, window_max(K / 4, K / 2), window_max(K / 2, K));
    return report;
}

} // namespace opsplit
