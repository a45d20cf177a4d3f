#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "opsplit/km/schedule.hpp"
#include "opsplit/km/trace.hpp"

namespace opsplit {

// (1 - lambda) z + lambda T(z) + lambda e
template <class Op>
Vector km_step(const Op& T, double lambda, const Vector& z, const Vector* error = nullptr) {
    require(lambda > 0.0 && lambda <= 1.0, ErrorKind::InvalidArgument, "relaxation parameter must lie in (0, 1]");
    Vector next = (1.0 - lambda) * z + lambda * T(z);
    if (error) {
        require_same_dim(*error, z, "km error");
        next += lambda * *error;
    }
    return next;
}

struct KmOptions : TraceOptions {
    std::optional<ErrorSchedule> errors;
};

template <class Op>
IterationTrace run_km(const Op& T, const RelaxationSchedule& schedule, const Vector& z0, std::size_t iters,
                      const KmOptions& options = {}) {
    require(iters >= 1, ErrorKind::InvalidArgument, "iteration count must be at least 1");
    require_finite(z0, "initial point");
    if (options.reference) require_same_dim(*options.reference, z0, "reference point");

    IterationTrace trace;
    trace.iterations = iters;
    trace.lambda.reserve(iters + 1);
    trace.fpr.reserve(iters + 1);
    trace.step_sq.reserve(iters);

    Vector z = z0;
    for (std::size_t k = 0;; ++k) {
        const double lambda = schedule.lambda(k);
        const Vector Tz = T(z);
        const Vector residual = Tz - z;
        trace.lambda.push_back(lambda);
        trace.fpr.push_back(residual.squaredNorm());
        if (options.reference) trace.dist_sq.push_back((z - *options.reference).squaredNorm());
        if (options.keep_iterates) trace.z.push_back(z);
        if (k == iters) break;

        Vector next = z + lambda * residual;
        if (options.errors) {
            const Vector e = options.errors->generator(k, z.size());
            require_same_dim(e, z, "km error");
            next += lambda * e;
            const double en = e.norm();
            trace.error_norm.push_back(en);
            if (options.reference) {
                const double tau = lambda * (1.0 - lambda);
                trace.xi.push_back(lambda * lambda * en * en + 2.0 * lambda * (Tz - *options.reference).norm() * en +
                                   2.0 * tau * residual.norm() * en);
            }
        }
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

} // namespace opsplit
