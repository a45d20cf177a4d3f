#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "opsplit/core/report.hpp"
#include "opsplit/km/checks.hpp"
#include "opsplit/rates/bounds.hpp"
#include "opsplit/splitting/drivers.hpp"

namespace opsplit {

enum class SetKind { Subspace, Affine, Box, Ball };

inline const char* to_string(SetKind k) {
    switch (k) {
    case SetKind::Subspace: return "subspace";
    case SetKind::Affine: return "affine";
    case SetKind::Box: return "box";
    case SetKind::Ball: return "ball";
    }
    return "unknown";
}

// Closed convex set with an exact projection, carried as its indicator.
class ConvexSet {
public:
    static ConvexSet subspace(Subspace s) {
        const auto n = s.ambient_dim();
        return {SetKind::Subspace, ProxFunction::indicator(std::move(s)), n};
    }
    static ConvexSet affine(Subspace s, const Vector& offset) {
        const auto n = s.ambient_dim();
        return {SetKind::Affine, ProxFunction::indicator_affine(std::move(s), offset), n};
    }
    static ConvexSet box(Vector lower, Vector upper) {
        const auto n = lower.size();
        return {SetKind::Box, ProxFunction::indicator_box(std::move(lower), std::move(upper)), n};
    }
    static ConvexSet ball(Vector center, double radius) {
        const auto n = center.size();
        return {SetKind::Ball, ProxFunction::indicator_ball(std::move(center), radius), n};
    }

    SetKind kind() const { return kind_; }
    Eigen::Index dim() const { return dim_; }
    const ProxFunction& indicator() const { return indicator_; }

    Vector project(const Vector& x) const {
        require(x.size() == dim_, ErrorKind::InvalidArgument, "set dimension mismatch");
        return indicator_.prox(1.0, x);
    }
    double distance(const Vector& x) const { return (x - project(x)).norm(); }
    bool contains(const Vector& x, double tolerance = 1e-10) const { return distance(x) <= tolerance; }

private:
    ConvexSet(SetKind k, ProxFunction f, Eigen::Index n) : kind_(k), indicator_(std::move(f)), dim_(n) {}

    SetKind kind_;
    ProxFunction indicator_;
    Eigen::Index dim_;
};

// Find x in C_f ∩ C_g (assumed nonempty).
struct ConvexSetPair {
    ConvexSet f_set;
    ConvexSet g_set;

    void validate() const {
        require(f_set.dim() == g_set.dim() && f_set.dim() > 0, ErrorKind::InvalidArgument,
                "feasibility sets must live in the same space");
    }
};

struct FeasibilityTrace {
    IterationTrace trace;
    std::vector<double> dist_g_of_xf;     // d_{C_g}(x_f^k)
    std::vector<double> dist_f_of_xg;     // d_{C_f}(x_g^k)
    std::vector<double> gap_sq;           // ||x_f^k - x_g^k||^2
    std::vector<double> ergodic_dist_f;   // d_{C_f}(xbar_f^k): membership of the f-average
    std::vector<double> ergodic_dist_g;   // d_{C_g}(xbar_g^k)
    std::vector<double> ergodic_max_dist; // max{d_{C_g}(xbar_f^k), d_{C_f}(xbar_g^k)}

    std::size_t size() const { return gap_sq.size(); }

    double max_dist_sq(std::size_t k) const {
        return std::max(dist_g_of_xf[k] * dist_g_of_xf[k], dist_f_of_xg[k] * dist_f_of_xg[k]);
    }
};

// x_g = P_{C_g}(z), x_f = P_{C_f}(2 x_g - z), z+ = z + 2 lambda (x_f - x_g).
inline FeasibilityTrace run_feasibility(const ConvexSetPair& pair, const RelaxationSchedule& schedule, const Vector& z0,
                                        std::size_t iters, bool keep_iterates = true) {
    pair.validate();
    require(z0.size() == pair.f_set.dim(), ErrorKind::InvalidArgument, "initial point dimension mismatch");
    FeasibilityTrace out;
    Vector sum_f = Vector::Zero(z0.size()), sum_g = Vector::Zero(z0.size());
    double weight = 0.0;
    SplittingOptions options;
    options.keep_iterates = keep_iterates;
    options.evaluate_objective = false;
    options.observer = [&](std::size_t k, const TriangleIterate& t) {
        out.dist_g_of_xf.push_back(pair.g_set.distance(t.x_f));
        out.dist_f_of_xg.push_back(pair.f_set.distance(t.x_g));
        out.gap_sq.push_back((t.x_f - t.x_g).squaredNorm());
        const double l = schedule.lambda(k);
        sum_f += l * t.x_f;
        sum_g += l * t.x_g;
        weight += l;
        const Vector bar_f = sum_f / weight, bar_g = sum_g / weight;
        out.ergodic_dist_f.push_back(pair.f_set.distance(bar_f));
        out.ergodic_dist_g.push_back(pair.g_set.distance(bar_g));
        out.ergodic_max_dist.push_back(std::max(pair.g_set.distance(bar_f), pair.f_set.distance(bar_g)));
    };
    out.trace = run_relaxed_prs(pair.f_set.indicator(), pair.g_set.indicator(), 1.0, schedule, z0, iters, options);
    return out;
}

// Bound on max{d^2_{C_g}(x_f^k), d^2_{C_f}(x_g^k)} (nonergodic) or on the same distances at
// the averages (ergodic). The nonergodic form needs lambda_i < 1.
inline double feasibility_gap_bound(double dist0, const RelaxationSchedule& schedule, std::size_t k, RateMode mode) {
    require(dist0 >= 0.0 && std::isfinite(dist0), ErrorKind::InvalidArgument, "dist0 must be finite and nonnegative");
    if (dist0 == 0.0) return 0.0;
    if (mode == RateMode::Nonergodic) return fpr_bound(schedule, dist0 * dist0, k) / 4.0;
    double cumulative = 0.0;
    for (std::size_t i = 0; i <= k; ++i) cumulative += schedule.lambda(i);
    const double r = 2.0 * dist0 / cumulative;
    return r * r;
}

struct FeasibilityReport {
    BoundReport distance_vs_gap{"feasibility-distance-below-gap", BoundSense::Upper};
    BoundReport ergodic_membership{"feasibility-ergodic-membership", BoundSense::Upper, 1e-10, 0.0};
    BoundReport nonergodic{"feasibility-nonergodic-bound", BoundSense::Upper};
    BoundReport ergodic{"feasibility-ergodic-bound", BoundSense::Upper};

    bool pass() const { return distance_vs_gap.pass() && ergodic_membership.pass() && nonergodic.pass() && ergodic.pass(); }
};

// Nonergodic bound is skipped when some lambda_k = 1.
inline FeasibilityReport check_feasibility(const FeasibilityTrace& ft, const RelaxationSchedule& schedule,
                                           double dist0) {
    FeasibilityReport r;
    bool nonergodic = true;
    for (std::size_t k = 0; k < ft.size(); ++k) nonergodic = nonergodic && schedule.tau(k) > 0.0;
    double tau_sum = 0.0, cumulative = 0.0;
    for (std::size_t k = 0; k < ft.size(); ++k) {
        const double gap = std::sqrt(ft.gap_sq[k]);
        r.distance_vs_gap.add(k, gap, ft.dist_g_of_xf[k]);
        r.distance_vs_gap.add(k, gap, ft.dist_f_of_xg[k]);
        r.ergodic_membership.add(k, 0.0, std::max(ft.ergodic_dist_f[k], ft.ergodic_dist_g[k]));
        cumulative += schedule.lambda(k);
        const double erg = 2.0 * dist0 / cumulative;
        const double em = ft.ergodic_max_dist[k];
        r.ergodic.add(k, erg * erg, em * em);
        if (nonergodic) {
            tau_sum += schedule.tau(k);
            r.nonergodic.add(k, dist0 * dist0 / (4.0 * tau_sum), ft.max_dist_sq(k));
        }
    }
    return r;
}

} // namespace opsplit
