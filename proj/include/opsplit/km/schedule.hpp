#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "opsplit/core/vector.hpp"

namespace opsplit {

// Relaxation parameters lambda_k in (0, 1].
class RelaxationSchedule {
public:
    enum class Kind { Constant, Explicit, Polynomial };

    RelaxationSchedule() : RelaxationSchedule(constant(0.5)) {}

    static RelaxationSchedule constant(double lambda) {
        check_value(lambda);
        RelaxationSchedule s(Kind::Constant);
        s.value_ = lambda;
        return s;
    }

    static RelaxationSchedule explicit_list(std::vector<double> values) {
        require(!values.empty(), ErrorKind::InvalidArgument, "explicit schedule must be nonempty");
        for (double v : values) check_value(v);
        RelaxationSchedule s(Kind::Explicit);
        s.values_ = std::move(values);
        return s;
    }

    // lambda_k = (k + 1)^power with power <= 0.
    static RelaxationSchedule polynomial(double power) {
        require(std::isfinite(power) && power <= 0.0, ErrorKind::InvalidArgument,
                "polynomial schedule needs a nonpositive power to stay in (0, 1]");
        RelaxationSchedule s(Kind::Polynomial);
        s.value_ = power;
        return s;
    }

    Kind kind() const { return kind_; }
    bool is_constant() const { return kind_ == Kind::Constant; }
    double parameter() const { return value_; }
    const std::vector<double>& values() const { return values_; }

    // Largest index the schedule is defined for.
    std::size_t horizon() const {
        return kind_ == Kind::Explicit ? values_.size() - 1 : std::numeric_limits<std::size_t>::max();
    }

    double lambda(std::size_t k) const {
        switch (kind_) {
        case Kind::Constant: return value_;
        case Kind::Explicit:
            require(k < values_.size(), ErrorKind::InvalidArgument,
                    "explicit schedule exhausted at k=" + std::to_string(k));
            return values_[k];
        case Kind::Polynomial: return std::pow(double(k + 1), value_);
        }
        return value_;
    }

    double tau(std::size_t k) const {
        const double l = lambda(k);
        return l * (1.0 - l);
    }

    // Lambda_k = sum_{i<=k} lambda_i, accumulated left to right.
    double cumulative(std::size_t k) const {
        if (kind_ == Kind::Constant) return double(k + 1) * value_;
        double sum = 0.0;
        for (std::size_t i = 0; i <= k; ++i) sum += lambda(i);
        return sum;
    }

    std::vector<double> cumulative_series(std::size_t k) const {
        std::vector<double> out(k + 1);
        double sum = 0.0;
        for (std::size_t i = 0; i <= k; ++i) {
            sum += lambda(i);
            out[i] = kind_ == Kind::Constant ? double(i + 1) * value_ : sum;
        }
        return out;
    }

    double tau_sum(std::size_t k) const {
        double sum = 0.0;
        for (std::size_t i = 0; i <= k; ++i) sum += tau(i);
        return sum;
    }

    // Infimum of tau over 0..k.
    double tau_lower(std::size_t k) const {
        if (kind_ == Kind::Constant) return tau(0);
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i <= k; ++i) lo = std::min(lo, tau(i));
        return lo;
    }

    std::string describe() const {
        switch (kind_) {
        case Kind::Constant: return "constant(" + std::to_string(value_) + ")";
        case Kind::Explicit: return "explicit[" + std::to_string(values_.size()) + "]";
        case Kind::Polynomial: return "polynomial(" + std::to_string(value_) + ")";
        }
        return "";
    }

private:
    explicit RelaxationSchedule(Kind kind) : kind_(kind) {}

    static void check_value(double lambda) {
        require(std::isfinite(lambda) && lambda > 0.0 && lambda <= 1.0, ErrorKind::InvalidArgument,
                "relaxation parameter must lie in (0, 1], got " + std::to_string(lambda));
    }

    Kind kind_ = Kind::Constant;
    double value_ = 0.5;
    std::vector<double> values_;
};

// Additive error sequence e^k for the inexact iteration, with an envelope
// omega_k >= lambda_k ||e^k||.
struct ErrorSchedule {
    std::function<Vector(std::size_t k, Eigen::Index dim)> generator;
    std::function<double(std::size_t k)> envelope;

    // Random unit direction scaled to magnitude * (k + 1)^(-power); deterministic per (seed, k).
    static ErrorSchedule decaying(double power, double magnitude, std::uint64_t seed) {
        require(power > 0.0 && magnitude >= 0.0, ErrorKind::InvalidArgument, "invalid error decay parameters");
        ErrorSchedule s;
        s.generator = [=](std::size_t k, Eigen::Index dim) {
            std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (std::uint64_t(k) + 1)));
            std::normal_distribution<double> normal;
            Vector direction(dim);
            for (Eigen::Index i = 0; i < dim; ++i) direction[i] = normal(rng);
            const double n = direction.norm();
            if (n == 0.0) direction.setZero(), direction[0] = 1.0;
            else direction /= n;
            return Vector(magnitude * std::pow(double(k + 1), -power) * direction);
        };
        s.envelope = [=](std::size_t k) { return magnitude * std::pow(double(k + 1), -power); };
        return s;
    }

    // Envelope must be nonnegative and nonincreasing with a finite partial sum over the horizon.
    bool envelope_admissible(std::size_t horizon) const {
        double previous = std::numeric_limits<double>::infinity();
        double sum = 0.0;
        for (std::size_t k = 0; k <= horizon; ++k) {
            const double w = envelope(k);
            if (!(w >= 0.0) || w > previous) return false;
            previous = w;
            sum += w;
        }
        return std::isfinite(sum);
    }
};

} // namespace opsplit
