#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "opsplit/counterexamples/rotation.hpp"
#include "opsplit/km/schedule.hpp"

namespace opsplit {

namespace detail {

// 1 - sqrt(i/(i+1)) without cancellation.
inline double harmonic_gap(std::size_t i) {
    const double r = std::sqrt(double(i) / double(i + 1));
    return 1.0 / (double(i + 1) * (1.0 + r));
}

} // namespace detail

// c_i = sqrt(i/(i+1)), i = 0..blocks-1
inline RotationSpaceSpec harmonic_rotation_spec(std::size_t blocks) {
    std::vector<double> gaps(blocks);
    for (std::size_t i = 0; i < blocks; ++i) gaps[i] = detail::harmonic_gap(i);
    return RotationSpaceSpec::from_gaps(std::move(gaps));
}

// c_i = sqrt(i/(i+1)) and z0_j = sqrt(2 alpha e) ((j+1)^-alpha, 0).
struct OptimalFprSetup {
    RotationSpaceSpec spec;
    Vector z0;
    double alpha = 0.75;
    std::size_t horizon = 300;

    // ||T z^k - z^k||^2 lower bound, 1 <= k <= horizon
    double fpr_lower_bound(std::size_t k) const { return 0.99 / std::pow(double(k + 1), 2.0 * alpha); }

    // ||T^k (I - T) z0||^2 from the block formula
    double predicted_fpr(std::size_t k) const {
        const RotationOperator T(spec);
        return T.power_norm_sq(z0 - T(z0), k);
    }
};

inline OptimalFprSetup optimal_fpr_setup(double alpha, std::size_t blocks, std::size_t horizon = 300) {
    require(alpha > 0.5, ErrorKind::InvalidArgument, "alpha must exceed 1/2");
    require(blocks >= 1 && horizon >= 1, ErrorKind::InvalidArgument, "need at least one block and one iteration");
    const double tail = std::pow(double(horizon + 1) / double(blocks + 2), 2.0 * alpha);
    require(tail <= 0.01, ErrorKind::InvalidConfig,
            "truncation at " + std::to_string(blocks) + " blocks drops " + std::to_string(100.0 * tail) +
                "% of the bound at k=" + std::to_string(horizon) + "; need at most 1%");
    OptimalFprSetup s{harmonic_rotation_spec(blocks), Vector::Zero(2 * Eigen::Index(blocks)), alpha, horizon};
    const double scale = std::sqrt(2.0 * alpha * std::numbers::e);
    for (std::size_t j = 0; j < blocks; ++j) s.z0[2 * Eigen::Index(j)] = scale / std::pow(double(j + 1), alpha);
    return s;
}

// Solves phi(t) = target for t >= 0 with phi increasing, by bracketing then bisection.
inline double invert_increasing(const std::function<double(double)>& phi, double target, double tolerance = 1e-12) {
    double lo = 0.0;
    require(phi(lo) <= target, ErrorKind::InvalidArgument,
            "value " + std::to_string(target) + " lies below the range of the inverted function");
    double hi = 1.0;
    while (phi(hi) < target) {
        lo = hi;
        hi *= 2.0;
        require(std::isfinite(hi) && hi < 1e300, ErrorKind::InvalidArgument,
                "value " + std::to_string(target) + " is never reached; the function must decay to zero");
    }
    while (hi - lo > tolerance * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        (phi(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// c_j = h2(j+1) / (1 + h2(j+1)) with h2 the inverse of 1/h - 1; witness n_k + 1 = floor(1/h(k+1)).
class SlowSequenceSpec {
public:
    using Target = std::function<double(double)>;

    // `inverse`, when given, is h2 in closed form; otherwise h2 comes from bisection.
    SlowSequenceSpec(Target h, std::size_t count, Target inverse = {}) : h_(std::move(h)) {
        require(bool(h_), ErrorKind::InvalidArgument, "slow sequence needs a target function");
        require(count >= 1, ErrorKind::InvalidArgument, "slow sequence needs at least one term");
        const double h0 = h_(0.0);
        require(h0 < 1.0 && h0 >= 0.5, ErrorKind::InvalidArgument,
                "target must satisfy 1/2 <= h(0) < 1 so that every 1/(j+1) is a value of h");
        auto phi = [this](double t) { return 1.0 / h_(t) - 1.0; };
        gap_.reserve(count);
        for (std::size_t j = 0; j < count; ++j) {
            const double x = double(j + 1);
            const double h2 = inverse ? inverse(x) : invert_increasing(phi, x);
            require(h2 >= 0.0 && std::isfinite(h2), ErrorKind::InvalidArgument,
                    "inverse of 1/h - 1 is undefined at " + std::to_string(x));
            gap_.push_back(1.0 / (1.0 + h2));
        }
    }

    double target(double t) const { return h_(t); }
    std::size_t size() const { return gap_.size(); }
    const std::vector<double>& gaps() const { return gap_; } // 1 - c_j

    std::size_t witness(std::size_t k) const {
        const double inv = std::floor(1.0 / h_(double(k + 1)));
        require(inv >= 1.0, ErrorKind::InvalidArgument, "target exceeds 1 at k=" + std::to_string(k + 1));
        return std::size_t(inv) - 1;
    }

    // c_{n_k}^{k+1} / (n_k + 1)
    double witness_value(std::size_t k) const {
        const std::size_t n = witness(k);
        require(n < size(), ErrorKind::InvalidConfig, "witness index " + std::to_string(n) + " beyond the sequence");
        return std::exp(double(k + 1) * std::log1p(-gap_[n])) / double(n + 1);
    }

private:
    Target h_;
    std::vector<double> gap_;
};

struct ArbitrarilySlowSetup {
    SlowSequenceSpec sequence;
    RotationSpaceSpec spec;
    Vector z0; // ||z0_j|| = 1/(j+1) along e0
    std::size_t horizon = 200;

    double distance_lower_bound(std::size_t k) const { return sequence.target(double(k)) / std::numbers::e; }
};

// `blocks` = 0 sizes the truncation to the largest witness index on the horizon.
inline ArbitrarilySlowSetup arbitrarily_slow_setup(SlowSequenceSpec::Target h, std::size_t horizon,
                                                   std::size_t blocks = 0, SlowSequenceSpec::Target inverse = {}) {
    require(bool(h), ErrorKind::InvalidArgument, "arbitrarily slow setup needs a target function");
    double previous = h(0.0);
    for (std::size_t k = 1; k <= horizon + 1; ++k) {
        const double v = h(double(k));
        require(v > 0.0 && v < previous, ErrorKind::InvalidArgument,
                "target must be positive and strictly decreasing; fails at t=" + std::to_string(k));
        previous = v;
    }
    std::size_t needed = 1;
    for (std::size_t k = 0; k <= horizon; ++k)
        needed = std::max(needed, std::size_t(std::floor(1.0 / h(double(k + 1)))));
    if (blocks == 0) blocks = needed;
    require(blocks >= needed, ErrorKind::InvalidConfig,
            "truncation at " + std::to_string(blocks) + " blocks misses witness index " + std::to_string(needed - 1));
    SlowSequenceSpec sequence(std::move(h), blocks, std::move(inverse));
    RotationSpaceSpec spec = RotationSpaceSpec::from_gaps(sequence.gaps());
    Vector z0 = Vector::Zero(spec.ambient_dim());
    for (std::size_t j = 0; j < blocks; ++j) z0[2 * Eigen::Index(j)] = 1.0 / double(j + 1);
    return {std::move(sequence), std::move(spec), std::move(z0), horizon};
}

// f = d_V or iota_V, g = iota_U on the harmonic rotation space with z0 = ((j+1)^-alpha, 0).
struct DistanceLowerBoundSetup {
    RotationSpaceSpec spec;
    Subspace u, v;
    Vector z0;
    double alpha = 0.75;
    double gamma = 1.0;

    ProxFunction f_distance() const { return ProxFunction::distance(v); }
    ProxFunction f_indicator() const { return ProxFunction::indicator(v); }
    ProxFunction g() const { return ProxFunction::indicator(u); }

    // d_V(x_g^k)^2 = sum_i c_i^{2k} cos^2(k theta_i) / (i+1)^{2 alpha + 1}
    double distance_closed_form(std::size_t k) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < spec.blocks(); ++i) {
            const double c = spec.cosine_power(i, double(k)) * std::cos(double(k) * spec.angle(i));
            sum += c * c / std::pow(double(i + 1), 2.0 * alpha + 1.0);
        }
        return std::sqrt(sum);
    }
};

// No restriction on gamma; use distance_lower_bound_setup for the checked form.
inline DistanceLowerBoundSetup distance_lower_bound_problem(double alpha, std::size_t blocks, double gamma) {
    require(alpha > 0.5, ErrorKind::InvalidArgument, "alpha must exceed 1/2");
    require(blocks >= 1, ErrorKind::InvalidArgument, "need at least one block");
    require_positive(gamma, "gamma");
    RotationSpaceSpec spec = harmonic_rotation_spec(blocks);
    Vector z0 = Vector::Zero(spec.ambient_dim());
    for (std::size_t j = 0; j < blocks; ++j) z0[2 * Eigen::Index(j)] = 1.0 / std::pow(double(j + 1), alpha);
    Subspace u = spec.u_space(), v = spec.v_space();
    return {std::move(spec), std::move(u), std::move(v), std::move(z0), alpha, gamma};
}

// Requires gamma >= ||z0||, under which DRS cannot tell d_V from iota_V.
inline DistanceLowerBoundSetup distance_lower_bound_setup(double alpha, std::size_t blocks, double gamma) {
    auto s = distance_lower_bound_problem(alpha, blocks, gamma);
    require(gamma >= s.z0.norm(), ErrorKind::InvalidConfig,
            "gamma=" + std::to_string(gamma) + " is below ||z0||=" + std::to_string(s.z0.norm()));
    return s;
}

// Runs DRS on two function pairs in lockstep and returns max_k ||z_a^k - z_b^k||.
inline double lockstep_deviation(const ProxFunction& f_a, const ProxFunction& g_a, const ProxFunction& f_b,
                                 const ProxFunction& g_b, double gamma, const Vector& z0, std::size_t iters) {
    Vector a = z0, b = z0;
    double worst = 0.0;
    for (std::size_t k = 0; k < iters; ++k) {
        const auto ta = apply_prs_operator(f_a, g_a, gamma, a);
        const auto tb = apply_prs_operator(f_b, g_b, gamma, b);
        a += ta.x_f - ta.x_g;
        b += tb.x_f - tb.x_g;
        worst = std::max(worst, (a - b).norm());
    }
    return worst;
}

// f(z) = 1/2 sum_j z_j^2 / j on R^N, z0_j = (j + gamma)^-alpha, j = 1..N.
struct PpaDiagonalSetup {
    ProxFunction f;
    Vector z0;
    double alpha = 1.0;
    double gamma = 1.0;
    std::size_t horizon = 300;

    // ||prox(z^k) - z^k||^2
    double fpr_lower_bound(std::size_t k) const {
        return 0.99 * gamma * gamma /
               ((1.0 + 2.0 * alpha) * std::exp(2.0 * gamma) * std::pow(double(k) + gamma, 1.0 + 2.0 * alpha));
    }

    // f(z^{k+1}) - f(x*)
    double objective_lower_bound(std::size_t k) const {
        return 0.99 / (4.0 * alpha * std::exp(2.0 * gamma) * std::pow(double(k + 1) + gamma, 2.0 * alpha));
    }
};

inline PpaDiagonalSetup ppa_diagonal_setup(double alpha, double gamma, std::size_t dim, std::size_t horizon = 300) {
    require(alpha > 0.5, ErrorKind::InvalidArgument, "alpha must exceed 1/2");
    require_positive(gamma, "gamma");
    require(dim >= 1 && horizon >= 1, ErrorKind::InvalidArgument, "need at least one coordinate and one iteration");
    const double tail = std::pow((double(horizon + 1) + gamma) / (double(dim) + gamma), 2.0 * alpha);
    require(tail <= 0.01, ErrorKind::InvalidConfig,
            "truncation at dimension " + std::to_string(dim) + " drops " + std::to_string(100.0 * tail) +
                "% of the bound at k=" + std::to_string(horizon) + "; need at most 1%");
    const auto n = static_cast<Eigen::Index>(dim);
    Vector weights(n), z0(n);
    for (std::size_t j = 1; j <= dim; ++j) {
        weights[Eigen::Index(j - 1)] = 1.0 / double(j);
        z0[Eigen::Index(j - 1)] = 1.0 / std::pow(double(j) + gamma, alpha);
    }
    return {ProxFunction::diagonal_quadratic(std::move(weights)), std::move(z0), alpha, gamma, horizon};
}

} // namespace opsplit
