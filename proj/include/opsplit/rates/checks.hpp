#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "opsplit/core/report.hpp"
#include "opsplit/km/trace.hpp"
#include "opsplit/rates/bounds.hpp"

namespace opsplit {

struct FundamentalReport {
    BoundReport upper{"upper-fundamental", BoundSense::Upper};
    BoundReport lower{"lower-fundamental", BoundSense::Lower};

    bool pass() const { return upper.pass() && lower.pass(); }
};

// Per iteration:
//   4 gamma lambda (F_k - F*) <= ||z^k - x*||^2 - ||z^{k+1} - x*||^2 + (1 - 1/lambda)||z^{k+1} - z^k||^2
//   F_k - F* >= <x_g - x_f, z* - x*> / gamma
// where F_k = f(x_f^k) + g(x_g^k).
inline FundamentalReport check_fundamental_inequalities(const IterationTrace& trace, const SolutionCertificate& cert) {
    require(trace.has_triangles() && trace.objective.size() == trace.size(), ErrorKind::InvalidArgument,
            "fundamental inequalities need stored triangles and objective values");
    FundamentalReport report;
    const double gamma = cert.gamma;
    const Vector anchor = cert.zstar - cert.xstar;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const auto& t = trace.triangles[k];
        const double gap = trace.objective[k] - cert.obj_star;
        report.lower.add(k, (t.x_g - t.x_f).dot(anchor) / gamma, gap);
        if (k + 1 < trace.size()) {
            const double lambda = trace.lambda[k];
            const Vector& z = trace.z[k];
            const Vector& zn = trace.z[k + 1];
            const double rhs = (z - cert.xstar).squaredNorm() - (zn - cert.xstar).squaredNorm() +
                               (1.0 - 1.0 / lambda) * (zn - z).squaredNorm();
            report.upper.add(k, rhs, 4.0 * gamma * lambda * gap);
        }
    }
    return report;
}

// Last-iterate objective error against the band with tau_lower taken over the trace horizon.
inline std::pair<BoundReport, BoundReport> check_nonergodic_band(const IterationTrace& trace,
                                                                 const SolutionCertificate& cert) {
    require(trace.objective.size() == trace.size(), ErrorKind::InvalidArgument, "trace lacks objective values");
    double tau_lo = kInfinity;
    for (double l : trace.lambda) tau_lo = std::min(tau_lo, l * (1.0 - l));
    BoundReport upper("nonergodic-upper", BoundSense::Upper), lower("nonergodic-lower", BoundSense::Lower);
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const Band band = nonergodic_objective_bounds(cert, tau_lo, k);
        const double gap = trace.objective[k] - cert.obj_star;
        upper.add(k, band.upper, gap);
        lower.add(k, band.lower, gap);
    }
    return {std::move(upper), std::move(lower)};
}

// Ergodic objective error (f at xbar_f, g at xbar_g) and the ergodic feasibility gap.
struct ErgodicReport {
    BoundReport upper{"ergodic-upper", BoundSense::Upper};
    BoundReport lower{"ergodic-lower", BoundSense::Lower};
    BoundReport feasibility{"ergodic-feasibility", BoundSense::Upper};

    bool pass() const { return upper.pass() && lower.pass() && feasibility.pass(); }
};

inline ErgodicReport check_ergodic_bands(const IterationTrace& trace, const SolutionCertificate& cert) {
    require(trace.ergodic_objective.size() == trace.size(), ErrorKind::InvalidArgument,
            "trace lacks ergodic objective values");
    ErgodicReport report;
    double cumulative = 0.0;
    for (std::size_t k = 0; k < trace.size(); ++k) {
        cumulative += trace.lambda[k];
        const Band band = ergodic_objective_bounds(cert, cumulative);
        const double gap = trace.ergodic_objective[k] - cert.obj_star;
        report.upper.add(k, band.upper, gap);
        report.lower.add(k, band.lower, gap);
        report.feasibility.add(k, ergodic_feasibility_bound(cert, cumulative), trace.ergodic_gap[k]);
    }
    return report;
}

// The nonergodic band factors as (bounded quantity) * sqrt(fpr_k); this checks the
// factored form directly against the measured residual.
inline std::pair<BoundReport, BoundReport> check_sqrt_fpr_product(const IterationTrace& trace,
                                                                  const SolutionCertificate& cert) {
    BoundReport upper("sqrt-fpr-upper", BoundSense::Upper), lower("sqrt-fpr-lower", BoundSense::Lower);
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const double root = std::sqrt(trace.fpr[k]);
        const double gap = trace.objective[k] - cert.obj_star;
        upper.add(k, (cert.dist0 + cert.anchor_gap()) * root / (2.0 * cert.gamma), gap);
        lower.add(k, -cert.anchor_gap() * root / (2.0 * cert.gamma), gap);
    }
    return {std::move(upper), std::move(lower)};
}

} // namespace opsplit
