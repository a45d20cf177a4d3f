#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "opsplit/core/prox_function.hpp"
#include "opsplit/core/subspace.hpp"

namespace opsplit {

// PRS (lambda = 1) on f = iota{x1 = 0}, g = iota{x2 = 0} from z0 = (1, 1); z* = 0.
struct SquareExample {
    ProxFunction f;
    ProxFunction g;
    Vector z0;
    Vector zstar;
    double gamma = 1.0;
};

inline SquareExample square_feasibility_example() {
    Vector z0(2), zstar = Vector::Zero(2);
    z0 << 1.0, 1.0;
    return {ProxFunction::indicator(Subspace::coordinate_axes(2, {1})),
            ProxFunction::indicator(Subspace::coordinate_axes(2, {0})), z0, zstar, 1.0};
}

struct SquareOracle {
    Vector z, x_g, x_f;
    Vector ergodic_g, ergodic_f;
    double ergodic_gap = 0.0;
};

inline SquareOracle feasibility_square_oracle(std::size_t k) {
    const double s = k % 2 == 0 ? 1.0 : -1.0;
    SquareOracle o;
    o.z = Vector::Constant(2, s);
    o.x_g = Vector::Zero(2);
    o.x_g[0] = s;
    o.x_f = Vector::Zero(2);
    o.x_f[1] = -s;
    o.ergodic_g = Vector::Zero(2);
    o.ergodic_f = Vector::Zero(2);
    if (k % 2 == 0) {
        o.ergodic_g[0] = 1.0 / double(k + 1);
        o.ergodic_f[1] = -1.0 / double(k + 1);
    }
    o.ergodic_gap = (o.ergodic_g - o.ergodic_f).norm();
    return o;
}

// PRS (lambda = 1, gamma = 1) on f = |x|, g = 0 from z0 = 2 - eps; z* = x* = 0.
struct AbsExample {
    ProxFunction f;
    ProxFunction g;
    Vector z0;
    double epsilon = 0.1;
    double gamma = 1.0;
};

inline AbsExample abs_example(double epsilon) {
    require(epsilon > 0.0 && epsilon < 1.0, ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
    return {ProxFunction::l1(1.0), ProxFunction::zero(), Vector::Constant(1, 2.0 - epsilon), epsilon, 1.0};
}

struct AbsOracle {
    double z = 0.0, x_g = 0.0, x_f = 0.0;
    double ergodic_g = 0.0, ergodic_f = 0.0;
    double f_side_error = 0.0; // (f + g)(xbar_f) - (f + g)(0)
    double g_side_error = 0.0; // (f + g)(xbar_g) - (f + g)(0)
    double ergodic_gap = 0.0;  // |xbar_g - xbar_f|
};

inline AbsOracle abs_example_oracle(double epsilon, std::size_t k) {
    require(epsilon > 0.0 && epsilon < 1.0, ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
    AbsOracle o;
    const double n = double(k + 1);
    if (k == 0) {
        o.z = o.x_g = 2.0 - epsilon;
        o.x_f = 1.0 - epsilon;
    } else {
        o.z = o.x_g = (k % 2 == 0 ? 1.0 : -1.0) * epsilon;
        o.x_f = 0.0;
    }
    o.ergodic_g = (k % 2 == 0 ? 2.0 - epsilon : 2.0 - 2.0 * epsilon) / n;
    o.ergodic_f = (1.0 - epsilon) / n;
    o.f_side_error = std::abs(o.ergodic_f);
    o.g_side_error = std::abs(o.ergodic_g);
    o.ergodic_gap = std::abs(o.ergodic_g - o.ergodic_f);
    return o;
}

} // namespace opsplit
