#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "opsplit/core/prox_function.hpp"
#include "opsplit/core/report.hpp"

namespace opsplit {

// One evaluation of the Peaceman-Rachford operator refl_f o refl_g at z.
struct TriangleIterate {
    Vector z;
    Vector x_g;
    Vector x_f;
    Vector subgrad_g; // (z - x_g) / gamma
    Vector subgrad_f; // (2 x_g - z - x_f) / gamma
    double gamma = 1.0;

    Vector prs_image() const { return z + 2.0 * (x_f - x_g); }
};

inline TriangleIterate apply_prs_operator(const ProxFunction& f, const ProxFunction& g, double gamma, const Vector& z) {
    TriangleIterate t;
    t.gamma = gamma;
    t.z = z;
    t.x_g = g.prox(gamma, z);
    const Vector reflected = 2.0 * t.x_g - z;
    t.x_f = f.prox(gamma, reflected);
    t.subgrad_g = (z - t.x_g) / gamma;
    t.subgrad_f = (reflected - t.x_f) / gamma;
    return t;
}

// Samples ||p_x - p_y||^2 <= <p_x - p_y, x - y> over the given pairs.
inline BoundReport check_firm_nonexpansive(const ProxFunction& f, double gamma,
                                           const std::vector<std::pair<Vector, Vector>>& pairs) {
    require(!pairs.empty(), ErrorKind::InvalidArgument, "firm nonexpansiveness check needs at least one pair");
    BoundReport report("firm-nonexpansive", BoundSense::Upper, 1e-10, 0.0);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& [x, y] = pairs[i];
        const Vector d = f.prox(gamma, x) - f.prox(gamma, y);
        report.add(i, d.dot(x - y), d.squaredNorm());
    }
    return report;
}

} // namespace opsplit
