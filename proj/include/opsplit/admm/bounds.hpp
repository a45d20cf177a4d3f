#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "opsplit/admm/certificate.hpp"
#include "opsplit/core/report.hpp"
#include "opsplit/rates/bounds.hpp"

namespace opsplit {

// ||A xbar + B ybar - b||^2: Thm-5-style bound on ||wbar_dg - wbar_df|| divided by gamma.
inline double admm_ergodic_feasibility_bound(const DualCertificate& c, double cumulative_lambda) {
    require_positive(cumulative_lambda, "cumulative relaxation");
    const double r = 2.0 * c.dist0 / (c.gamma * cumulative_lambda);
    return r * r;
}

// The same quantity with a single factor of gamma, as commonly displayed.
inline double admm_ergodic_feasibility_bound_single_gamma(const DualCertificate& c, double cumulative_lambda) {
    require_positive(cumulative_lambda, "cumulative relaxation");
    return 4.0 * c.dist0 * c.dist0 / (c.gamma * cumulative_lambda * cumulative_lambda);
}

inline double admm_nonergodic_feasibility_bound(const DualCertificate& c, double tau_lower, std::size_t k) {
    require_positive(tau_lower, "tau lower bound");
    return c.dist0 * c.dist0 / (4.0 * c.gamma * c.gamma * tau_lower * double(k + 1));
}

inline Band admm_ergodic_primal_bounds(const DualCertificate& c, double cumulative_lambda) {
    require_positive(cumulative_lambda, "cumulative relaxation");
    const double to_anchor = c.dist0_to_anchor();
    return {-2.0 * c.wstar_norm() * c.dist0 / (c.gamma * cumulative_lambda),
            to_anchor * to_anchor / (4.0 * c.gamma * cumulative_lambda)};
}

inline Band admm_nonergodic_primal_bounds(const DualCertificate& c, double tau_lower, std::size_t k) {
    require_positive(tau_lower, "tau lower bound");
    const double denom = 2.0 * c.gamma * std::sqrt(tau_lower * double(k + 1));
    return {-c.dist0 * c.wstar_norm() / denom, c.dist0 * (c.dist0 + c.wstar_norm()) / denom};
}

struct AdmmFundamentalReport {
    BoundReport upper{"admm-upper-fundamental", BoundSense::Upper};
    BoundReport lower{"admm-lower-fundamental", BoundSense::Lower};
    BoundReport ergodic_lower{"admm-ergodic-lower-fundamental", BoundSense::Lower};
    BoundReport identity{"admm-dual-primal-identity", BoundSense::Upper};

    bool pass() const { return upper.pass() && lower.pass() && ergodic_lower.pass() && identity.pass(); }
};

inline AdmmFundamentalReport check_admm_fundamental(const AdmmTrace& trace, const DualCertificate& c,
                                                    double identity_tolerance = 1e-8) {
    require(trace.has_iterates() && trace.dual_objective.size() == trace.size(), ErrorKind::InvalidArgument,
            "ADMM fundamental checks need stored iterates and dual values");
    AdmmFundamentalReport report;
    const double g = c.gamma;
    const Vector anchor = c.anchor();
    double weight = 0.0;
    Vector sum_r = Vector::Zero(c.zstar.size());
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const auto& it = trace.iterates[k];
        const Vector& z = it.z;
        const Vector& zn = k + 1 < trace.size() ? trace.iterates[k + 1].z : trace.final_z;
        const double l = trace.lambda[k];
        const double gap = trace.objective[k] - c.obj_star;
        const Vector step = z - zn;

        const double rhs = (z - anchor).squaredNorm() - (zn - anchor).squaredNorm() + (1.0 - 1.0 / l) * step.squaredNorm();
        report.upper.add(k, rhs, 4.0 * g * l * gap);
        report.lower.add(k, it.residual.dot(c.wstar), gap);

        weight += l;
        sum_r += l * it.residual;
        report.ergodic_lower.add(k, (sum_r / weight).dot(c.wstar), trace.ergodic_objective[k] - c.obj_star);

        const double lhs = 4.0 * g * l * gap;
        const double dual_gap = trace.dual_objective[k] + c.obj_star; // D_k - D*, with D* = -F*
        const double right = -4.0 * g * l * dual_gap + 2.0 * (1.0 - 1.0 / (2.0 * l)) * step.squaredNorm() +
                             2.0 * step.dot(zn);
        const double scale = std::max({1.0, std::abs(lhs), std::abs(4.0 * g * l * dual_gap), 2.0 * std::abs(step.dot(zn))});
        report.identity.add(k, 0.0, std::abs(lhs - right), identity_tolerance * scale);
    }
    return report;
}

struct AdmmBandReport {
    BoundReport nonergodic_upper{"admm-nonergodic-upper", BoundSense::Upper};
    BoundReport nonergodic_lower{"admm-nonergodic-lower", BoundSense::Lower};
    BoundReport nonergodic_feasibility{"admm-nonergodic-feasibility", BoundSense::Upper};
    BoundReport ergodic_upper{"admm-ergodic-upper", BoundSense::Upper};
    BoundReport ergodic_lower{"admm-ergodic-lower", BoundSense::Lower};
    BoundReport ergodic_feasibility{"admm-ergodic-feasibility", BoundSense::Upper};

    bool pass() const {
        return nonergodic_upper.pass() && nonergodic_lower.pass() && nonergodic_feasibility.pass() &&
               ergodic_upper.pass() && ergodic_lower.pass() && ergodic_feasibility.pass();
    }
};

// Nonergodic checks need tau_lower > 0, i.e. lambda_k < 1 throughout; otherwise only
// the ergodic side is checked.
inline AdmmBandReport check_admm_bands(const AdmmTrace& trace, const DualCertificate& c) {
    AdmmBandReport report;
    double tau_lo = kInfinity;
    for (double l : trace.lambda) tau_lo = std::min(tau_lo, l * (1.0 - l));
    double cumulative = 0.0;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        cumulative += trace.lambda[k];
        const double gap = trace.objective[k] - c.obj_star;
        if (tau_lo > 0.0) {
            const Band band = admm_nonergodic_primal_bounds(c, tau_lo, k);
            report.nonergodic_upper.add(k, band.upper, gap);
            report.nonergodic_lower.add(k, band.lower, gap);
            report.nonergodic_feasibility.add(k, admm_nonergodic_feasibility_bound(c, tau_lo, k), trace.residual_sq[k]);
        }
        const Band erg = admm_ergodic_primal_bounds(c, cumulative);
        const double egap = trace.ergodic_objective[k] - c.obj_star;
        report.ergodic_upper.add(k, erg.upper, egap);
        report.ergodic_lower.add(k, erg.lower, egap);
        report.ergodic_feasibility.add(k, admm_ergodic_feasibility_bound(c, cumulative), trace.ergodic_residual_sq[k]);
    }
    return report;
}

} // namespace opsplit
