#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "opsplit/admm/admm.hpp"

namespace opsplit {

struct DualCertificate {
    Vector zstar;
    Vector wstar; // prox_{gamma d_g}(z*)
    Vector xstar;
    Vector ystar;
    Vector z0;
    double dist0 = 0.0; // ||z0 - z*||
    double gamma = 1.0;
    double obj_star = 0.0;
    double residual = 0.0; // ||T z* - z*|| = 2 gamma ||A x* + B y* - b||

    Vector anchor() const { return zstar - wstar; }
    double wstar_norm() const { return wstar.norm(); }
    double dist0_to_anchor() const { return (z0 - anchor()).norm(); }

    DualCertificate with_start(const Vector& start) const {
        require_same_dim(start, zstar, "certificate start");
        DualCertificate c = *this;
        c.z0 = start;
        c.dist0 = (start - zstar).norm();
        return c;
    }
};

inline DualCertificate make_dual_certificate(const LinearlyConstrainedProblem& p, double gamma, const Vector& zstar,
                                             const Vector& z0, double tolerance = 1e-8) {
    require_same_dim(zstar, z0, "dual certificate");
    const AdmmIterate it = apply_dual_prs(p, gamma, zstar);
    DualCertificate c;
    c.zstar = zstar;
    c.wstar = it.w_dg;
    c.xstar = it.x;
    c.ystar = it.y;
    c.z0 = z0;
    c.dist0 = (z0 - zstar).norm();
    c.gamma = gamma;
    c.obj_star = p.objective(it.x, it.y);
    c.residual = 2.0 * gamma * it.residual.norm();
    require(c.residual <= tolerance, ErrorKind::NonConvergence,
            "candidate dual fixed point has residual " + std::to_string(c.residual));
    return c;
}

// z* = w* + gamma (B y* - b) for a KKT triple (x*, y*, w*).
inline DualCertificate dual_certificate_from_kkt(const LinearlyConstrainedProblem& p, double gamma,
                                                 const Vector& ystar, const Vector& wstar, const Vector& z0,
                                                 double tolerance = 1e-8) {
    return make_dual_certificate(p, gamma, wstar + gamma * (p.B * ystar - p.b), z0, tolerance);
}

// Unrelaxed dual DRS from z0 until the residual stalls below `target`.
inline DualCertificate admm_reference(const LinearlyConstrainedProblem& p, double gamma, const Vector& z0,
                                      std::size_t budget = 1000000, double target = 1e-13) {
    require(budget >= 100000, ErrorKind::InvalidArgument, "reference run budget must be at least 1e5");
    const AdmmSolvers s = make_solvers(p);
    Vector z = z0;
    double residual = 0.0;
    for (std::size_t k = 0; k < budget; ++k) {
        const AdmmIterate it = apply_dual_prs(p, s, gamma, z);
        residual = 2.0 * gamma * it.residual.norm();
        if (residual <= target * std::max(1.0, z.norm())) break;
        z -= gamma * it.residual;
    }
    try {
        return make_dual_certificate(p, gamma, z, z0);
    } catch (const Error&) {
        fail(ErrorKind::NonConvergence, "dual reference run did not converge: budget " + std::to_string(budget) +
                                            ", final residual " + std::to_string(residual));
    }
}

} // namespace opsplit
