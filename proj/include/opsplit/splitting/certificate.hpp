#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "opsplit/core/prs.hpp"
#include "opsplit/km/trace.hpp"

namespace opsplit {

// A fixed point z* of the PRS operator together with the quantities the rate
// bounds are stated in.
struct SolutionCertificate {
    Vector zstar;
    Vector xstar;       // prox_{gamma g}(z*)
    Vector z0;
    double dist0 = 0.0; // ||z0 - z*||
    double dual_norm = 0.0; // ||z* - x*|| / gamma
    double obj_star = 0.0;
    double gamma = 1.0;
    double residual = 0.0; // ||T_PRS z* - z*||

    double anchor_gap() const { return (zstar - xstar).norm(); } // ||z* - x*||
    double dist0_to_solution() const { return (z0 - xstar).norm(); } // ||z0 - x*||

    SolutionCertificate with_start(const Vector& start) const {
        require_same_dim(start, zstar, "certificate start");
        SolutionCertificate c = *this;
        c.z0 = start;
        c.dist0 = (start - zstar).norm();
        return c;
    }
};

inline SolutionCertificate make_certificate(const ProxFunction& f, const ProxFunction& g, double gamma,
                                            const Vector& zstar, const Vector& z0, double tolerance = 1e-8) {
    require_same_dim(zstar, z0, "certificate");
    const TriangleIterate t = apply_prs_operator(f, g, gamma, zstar);
    SolutionCertificate c;
    c.zstar = zstar;
    c.xstar = t.x_g;
    c.z0 = z0;
    c.gamma = gamma;
    c.dist0 = (z0 - zstar).norm();
    c.dual_norm = (zstar - t.x_g).norm() / gamma;
    c.obj_star = f.value(t.x_f) + g.value(t.x_g);
    c.residual = (t.prs_image() - zstar).norm();
    require(c.residual <= tolerance, ErrorKind::NonConvergence,
            "candidate fixed point has residual " + std::to_string(c.residual));
    return c;
}

// Runs DRS from z0 until the PRS residual stalls below `target` or the budget is spent.
inline SolutionCertificate fixed_point_reference(const ProxFunction& f, const ProxFunction& g, double gamma,
                                                 const Vector& z0, std::size_t budget = 1000000,
                                                 double target = 1e-13) {
    require(budget >= 100000, ErrorKind::InvalidArgument, "reference run budget must be at least 1e5");
    Vector z = z0;
    double residual = 0.0;
    for (std::size_t k = 0; k < budget; ++k) {
        const TriangleIterate t = apply_prs_operator(f, g, gamma, z);
        const Vector step = t.x_f - t.x_g;
        residual = 2.0 * step.norm();
        if (residual <= target * std::max(1.0, z.norm())) break;
        z += step; // lambda = 1/2
    }
    try {
        return make_certificate(f, g, gamma, z, z0);
    } catch (const Error&) {
        fail(ErrorKind::NonConvergence, "reference run did not converge: budget " + std::to_string(budget) +
                                            ", final residual " + std::to_string(residual));
    }
}

// Weighted running averages (1/Lambda_k) sum lambda_i x^i, recomputed from the trace triangles.
inline std::pair<std::vector<Vector>, std::vector<Vector>> ergodic_average(const IterationTrace& trace) {
    require(trace.has_triangles(), ErrorKind::InvalidArgument, "ergodic average needs stored triangle iterates");
    std::vector<Vector> avg_g, avg_f;
    Vector sg = Vector::Zero(trace.triangles.front().x_g.size());
    Vector sf = sg;
    double weight = 0.0;
    for (std::size_t k = 0; k < trace.triangles.size(); ++k) {
        const double l = trace.lambda[k];
        sg += l * trace.triangles[k].x_g;
        sf += l * trace.triangles[k].x_f;
        weight += l;
        avg_g.push_back(sg / weight);
        avg_f.push_back(sf / weight);
    }
    return {std::move(avg_g), std::move(avg_f)};
}

} // namespace opsplit
