#pragma once

#include <cmath>
#include <cstddef>
#include <utility>

#include "opsplit/splitting/certificate.hpp"
#include "opsplit/splitting/drivers.hpp"

namespace opsplit {

struct Band {
    double lower = 0.0;
    double upper = 0.0;
};

// Objective error of the weighted averages (f at xbar_f, g at xbar_g).
inline Band ergodic_objective_bounds(const SolutionCertificate& cert, double cumulative_lambda) {
    require_positive(cumulative_lambda, "cumulative relaxation");
    const double g = cert.gamma;
    const double to_solution = cert.dist0_to_solution();
    return {-2.0 * cert.dist0 * cert.anchor_gap() / (g * cumulative_lambda),
            to_solution * to_solution / (4.0 * g * cumulative_lambda)};
}

// ||xbar_g - xbar_f|| <= 2 ||z0 - z*|| / Lambda_k
inline double ergodic_feasibility_bound(const SolutionCertificate& cert, double cumulative_lambda) {
    require_positive(cumulative_lambda, "cumulative relaxation");
    return 2.0 * cert.dist0 / cumulative_lambda;
}

// Last-iterate objective error f(x_f^k) + g(x_g^k) - f* - g*.
inline Band nonergodic_objective_bounds(const SolutionCertificate& cert, double tau_lower, std::size_t k) {
    require_positive(tau_lower, "tau lower bound");
    const double denom = 2.0 * cert.gamma * std::sqrt(tau_lower * double(k + 1));
    return {-cert.dist0 * cert.anchor_gap() / denom, (cert.dist0 + cert.anchor_gap()) * cert.dist0 / denom};
}

enum class RateMode { Ergodic, Nonergodic };

// Upper bounds when one of the two functions is L-Lipschitz, evaluated at x_g-type points.
// `progress` is Lambda_k in ergodic mode and tau_lower * (k + 1) in nonergodic mode.
inline double lipschitz_objective_bound(const SolutionCertificate& cert, double lipschitz, RateMode mode,
                                        double progress) {
    require(lipschitz >= 0.0, ErrorKind::InvalidArgument, "Lipschitz modulus must be nonnegative");
    require_positive(progress, "progress measure");
    const double g = cert.gamma;
    if (mode == RateMode::Ergodic) {
        const double to_solution = cert.dist0_to_solution();
        return to_solution * to_solution / (4.0 * g * progress) + 2.0 * lipschitz * cert.dist0 / progress;
    }
    return (cert.dist0 + cert.anchor_gap() + g * lipschitz) * cert.dist0 / (2.0 * g * std::sqrt(progress));
}

struct FbsBounds {
    double objective = 0.0; // bound on h(z^{k+1}) - h(x*)
    double fpr = 0.0;       // bound on ||z^{k+2} - z^{k+1}||^2
};

inline double fbs_constant(double gamma, double beta) {
    const FBSConfig config(gamma, beta);
    if (gamma <= beta) return 1.0 / (2.0 * gamma);
    const double a = config.alpha();
    return 1.0 / (2.0 * gamma) + (1.0 / (2.0 * beta) - 1.0 / (2.0 * gamma)) * a / (1.0 - a);
}

// dist_sq is ||z0 - x*||^2.
inline FbsBounds fbs_bounds(double dist_sq, double gamma, double beta, std::size_t k) {
    const double c = fbs_constant(gamma, beta);
    const double kk = double(k + 1);
    const double curvature = 1.0 / gamma - (std::isinf(beta) ? 0.0 : 1.0 / (2.0 * beta));
    return {dist_sq * c / kk, dist_sq * c / (curvature * kk * kk)};
}

// Scalar DRS: ||(T_PRS)_{1/2} z^{k+1} - z^{k+1}||^2 <= |z0 - z*|^2 / (2 (k+1)^2).
inline double drs_scalar_fpr_bound(double dist0, std::size_t k) {
    const double kk = double(k + 1);
    return dist0 * dist0 / (2.0 * kk * kk);
}

} // namespace opsplit
