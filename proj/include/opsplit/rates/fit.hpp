#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "opsplit/core/vector.hpp"

namespace opsplit {

struct RateFit {
    double exponent = 0.0;
    double intercept = 0.0;
    std::size_t k_lo = 0;
    std::size_t k_hi = 0;
    double residual = 0.0; // root-mean-square residual in log space
};

// Least-squares slope of log(series[k]) against log(k + 1) for k in [k_lo, k_hi].
inline RateFit fit_decay_exponent(const std::vector<double>& series, std::size_t k_lo, std::size_t k_hi) {
    require(k_lo >= 1 && k_lo < k_hi && k_hi < series.size(), ErrorKind::InvalidArgument,
            "fit window must satisfy 1 <= k_lo < k_hi < series length");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = double(k_hi - k_lo + 1);
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        require(series[k] > 0.0 && std::isfinite(series[k]), ErrorKind::InvalidArgument,
                "fit needs positive entries; k=" + std::to_string(k));
        const double x = std::log(double(k + 1));
        const double y = std::log(series[k]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    RateFit fit;
    fit.k_lo = k_lo;
    fit.k_hi = k_hi;
    fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.exponent * sx) / n;
    double ss = 0.0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const double r = std::log(series[k]) - fit.intercept - fit.exponent * std::log(double(k + 1));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

} // namespace opsplit
