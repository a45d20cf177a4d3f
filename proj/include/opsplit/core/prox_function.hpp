#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include <Eigen/Eigenvalues>

#include "opsplit/core/subspace.hpp"
#include "opsplit/core/vector.hpp"

namespace opsplit {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Indicator evaluations return +inf only when the violation exceeds this.
inline constexpr double kIndicatorTolerance = 1e-9;

namespace kind {

struct Zero {};

// scale * ||x - center||_1; an empty center means the origin.
struct L1Norm {
    double scale = 1.0;
    Vector center;
};

struct IndicatorSubspace {
    Subspace space;
};

// Indicator of offset + space; the offset is stored orthogonal to the space.
struct IndicatorAffine {
    Subspace space;
    Vector offset;
};

struct IndicatorBox {
    Vector lower;
    Vector upper;
};

struct IndicatorBall {
    Vector center;
    double radius = 1.0;
};

// 0.5 x'Qx + q'x + c
struct Quadratic {
    Matrix Q;
    Vector q;
    double c = 0.0;
};

struct DistanceToSubspace {
    Subspace space;
};

// 0.5 * sum_j w_j x_j^2
struct DiagonalQuadratic {
    Vector weights;
};

struct Custom {
    std::function<double(const Vector&)> value;
    std::function<Vector(double, const Vector&)> prox;
    std::function<Vector(const Vector&)> gradient;
    double accuracy = 0.0;
    std::optional<double> beta;
    std::optional<double> lipschitz;
};

} // namespace kind

using FunctionKind = std::variant<kind::Zero, kind::L1Norm, kind::IndicatorSubspace, kind::IndicatorAffine,
                                  kind::IndicatorBox, kind::IndicatorBall, kind::Quadratic,
                                  kind::DistanceToSubspace, kind::DiagonalQuadratic, kind::Custom>;

namespace detail {

inline Vector soft_threshold(const Vector& x, double threshold) {
    return x.unaryExpr([threshold](double v) {
        const double m = std::abs(v) - threshold;
        return m > 0.0 ? std::copysign(m, v) : 0.0;
    });
}

// Factorizations of (I + gamma Q), keyed by gamma; shared between copies.
class QuadraticSolverCache {
public:
    explicit QuadraticSolverCache(const Matrix& Q) : Q_(Q) {}

    Vector solve(double gamma, const Vector& rhs) const {
        std::shared_ptr<const Eigen::LLT<Matrix>> factor;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = factors_.find(gamma);
            if (it == factors_.end()) {
                Matrix system = Matrix::Identity(Q_.rows(), Q_.cols()) + gamma * Q_;
                auto llt = std::make_shared<Eigen::LLT<Matrix>>(system);
                require(llt->info() == Eigen::Success, ErrorKind::SolverFailure,
                        "factorization of I + gamma Q failed");
                it = factors_.emplace(gamma, std::move(llt)).first;
            }
            factor = it->second;
        }
        return factor->solve(rhs);
    }

private:
    Matrix Q_;
    mutable std::mutex mutex_;
    mutable std::map<double, std::shared_ptr<const Eigen::LLT<Matrix>>> factors_;
};

} // namespace detail

// Closed proper convex function with a computable proximal map.
class ProxFunction {
public:
    ProxFunction() : ProxFunction(kind::Zero{}) {}

    static ProxFunction zero() { return ProxFunction(kind::Zero{}); }

    static ProxFunction l1(double scale = 1.0, Vector center = Vector()) {
        require(std::isfinite(scale) && scale >= 0.0, ErrorKind::InvalidArgument, "l1 scale must be nonnegative");
        if (center.size() > 0) require_finite(center, "l1 center");
        return ProxFunction(kind::L1Norm{scale, std::move(center)});
    }

    static ProxFunction indicator(Subspace space) {
        require(space.valid(), ErrorKind::InvalidArgument, "empty subspace descriptor");
        return ProxFunction(kind::IndicatorSubspace{std::move(space)});
    }

    static ProxFunction indicator_affine(Subspace space, const Vector& offset) {
        require(space.valid(), ErrorKind::InvalidArgument, "empty subspace descriptor");
        require(offset.size() == space.ambient_dim(), ErrorKind::InvalidArgument, "affine offset dimension mismatch");
        require_finite(offset, "affine offset");
        Vector normal_offset = offset - space.project(offset);
        return ProxFunction(kind::IndicatorAffine{std::move(space), std::move(normal_offset)});
    }

    static ProxFunction indicator_box(Vector lower, Vector upper) {
        require_same_dim(lower, upper, "box bounds");
        require((lower.array() <= upper.array()).all(), ErrorKind::InvalidArgument, "box lower bound exceeds upper");
        require(!lower.hasNaN() && !upper.hasNaN(), ErrorKind::InvalidArgument, "box bounds contain NaN");
        return ProxFunction(kind::IndicatorBox{std::move(lower), std::move(upper)});
    }

    static ProxFunction indicator_ball(Vector center, double radius) {
        require_finite(center, "ball center");
        require(std::isfinite(radius) && radius >= 0.0, ErrorKind::InvalidArgument, "ball radius must be nonnegative");
        return ProxFunction(kind::IndicatorBall{std::move(center), radius});
    }

    static ProxFunction quadratic(Matrix Q, Vector q = Vector(), double c = 0.0) {
        require(Q.rows() == Q.cols() && Q.rows() > 0, ErrorKind::InvalidArgument, "quadratic matrix must be square");
        require(Q.allFinite(), ErrorKind::InvalidArgument, "quadratic matrix has non-finite entries");
        if (q.size() == 0) q = Vector::Zero(Q.rows());
        require(q.size() == Q.rows(), ErrorKind::InvalidArgument, "quadratic linear term dimension mismatch");
        require_finite(q, "quadratic linear term");
        const double scale = std::max(1.0, Q.norm());
        require((Q - Q.transpose()).norm() <= 1e-12 * scale, ErrorKind::InvalidArgument,
                "quadratic matrix must be symmetric");
        Eigen::SelfAdjointEigenSolver<Matrix> eig(Q, Eigen::EigenvaluesOnly);
        require(eig.eigenvalues().minCoeff() >= -1e-10 * scale, ErrorKind::InvalidArgument,
                "quadratic matrix must be positive semidefinite");
        ProxFunction f(kind::Quadratic{Q, std::move(q), c});
        const double top = std::max(0.0, eig.eigenvalues().maxCoeff());
        f.beta_ = top > 0.0 ? 1.0 / top : kInfinity;
        f.cache_ = std::make_shared<detail::QuadraticSolverCache>(Q);
        return f;
    }

    // 0.5 ||x - target||^2 scaled by `weight`.
    static ProxFunction squared_distance_to_point(const Vector& target, double weight = 1.0) {
        const Eigen::Index n = target.size();
        return quadratic(weight * Matrix::Identity(n, n), -weight * target, 0.5 * weight * target.squaredNorm());
    }

    static ProxFunction diagonal_quadratic(Vector weights) {
        require_finite(weights, "diagonal weights");
        require((weights.array() >= 0.0).all(), ErrorKind::InvalidArgument, "diagonal weights must be nonnegative");
        ProxFunction f(kind::DiagonalQuadratic{weights});
        const double top = weights.size() ? weights.maxCoeff() : 0.0;
        f.beta_ = top > 0.0 ? 1.0 / top : kInfinity;
        return f;
    }

    static ProxFunction distance(Subspace space) {
        require(space.valid(), ErrorKind::InvalidArgument, "empty subspace descriptor");
        return ProxFunction(kind::DistanceToSubspace{std::move(space)});
    }

    static ProxFunction custom(kind::Custom spec) {
        require(spec.accuracy >= 0.0, ErrorKind::InvalidArgument, "custom prox accuracy must be nonnegative");
        ProxFunction f(std::move(spec));
        f.beta_ = std::get<kind::Custom>(*f.kind_).beta;
        return f;
    }

    const FunctionKind& kind() const { return *kind_; }

    template <class K>
    const K* as() const { return std::get_if<K>(kind_.get()); }

    std::string name() const {
        static constexpr const char* names[] = {"zero", "l1", "indicator-subspace", "indicator-affine",
                                                "indicator-box", "indicator-ball", "quadratic", "distance",
                                                "diagonal-quadratic", "custom"};
        return names[kind_->index()];
    }

    bool is_indicator() const {
        return as<kind::IndicatorSubspace>() || as<kind::IndicatorAffine>() || as<kind::IndicatorBox>() ||
               as<kind::IndicatorBall>();
    }

    bool is_smooth() const {
        if (auto c = as<kind::Custom>()) return bool(c->gradient);
        return as<kind::Zero>() || as<kind::Quadratic>() || as<kind::DiagonalQuadratic>();
    }

    // beta such that the gradient is (1/beta)-Lipschitz; +inf for affine functions.
    std::optional<double> lipschitz_grad() const {
        if (as<kind::Zero>()) return kInfinity;
        return beta_;
    }

    // Lipschitz modulus of the function itself, when it is globally Lipschitz.
    std::optional<double> lipschitz_modulus(Eigen::Index dim) const {
        if (as<kind::Zero>()) return 0.0;
        if (auto l1f = as<kind::L1Norm>()) return l1f->scale * std::sqrt(double(dim));
        if (as<kind::DistanceToSubspace>()) return 1.0;
        if (auto c = as<kind::Custom>()) return c->lipschitz;
        return std::nullopt;
    }

    double value(const Vector& x) const {
        return std::visit([&](const auto& k) { return evaluate(k, x); }, *kind_);
    }

    Vector prox(double gamma, const Vector& x) const {
        require_positive(gamma, "gamma");
        require_finite(x, "prox input");
        return std::visit([&](const auto& k) { return proximal(k, gamma, x); }, *kind_);
    }

    Vector refl(double gamma, const Vector& x) const { return 2.0 * prox(gamma, x) - x; }

    Vector gradient(const Vector& x) const {
        require_finite(x, "gradient input");
        if (as<kind::Zero>()) return Vector::Zero(x.size());
        if (auto qf = as<kind::Quadratic>()) {
            check_dim(qf->Q.rows(), x);
            return qf->Q * x + qf->q;
        }
        if (auto d = as<kind::DiagonalQuadratic>()) {
            check_dim(d->weights.size(), x);
            return d->weights.cwiseProduct(x);
        }
        if (auto c = as<kind::Custom>(); c && c->gradient) return c->gradient(x);
        fail(ErrorKind::Unsupported, name() + " has no gradient");
    }

private:
    explicit ProxFunction(FunctionKind k) : kind_(std::make_shared<const FunctionKind>(std::move(k))) {}

    static void check_dim(Eigen::Index expected, const Vector& x) {
        require(x.size() == expected, ErrorKind::InvalidArgument, "function dimension mismatch");
    }

    static double indicator_value(double violation, const Vector& x) {
        return violation <= kIndicatorTolerance * std::max(1.0, x.norm()) ? 0.0 : kInfinity;
    }

    static double evaluate(const kind::Zero&, const Vector&) { return 0.0; }

    static double evaluate(const kind::L1Norm& k, const Vector& x) {
        if (k.center.size() == 0) return k.scale * x.lpNorm<1>();
        check_dim(k.center.size(), x);
        return k.scale * (x - k.center).lpNorm<1>();
    }

    static double evaluate(const kind::IndicatorSubspace& k, const Vector& x) {
        return indicator_value(k.space.distance(x), x);
    }

    static double evaluate(const kind::IndicatorAffine& k, const Vector& x) {
        return indicator_value(k.space.distance(x - k.offset), x);
    }

    static double evaluate(const kind::IndicatorBox& k, const Vector& x) {
        check_dim(k.lower.size(), x);
        const Vector clamped = x.cwiseMax(k.lower).cwiseMin(k.upper);
        return indicator_value((x - clamped).norm(), x);
    }

    static double evaluate(const kind::IndicatorBall& k, const Vector& x) {
        check_dim(k.center.size(), x);
        return indicator_value(std::max(0.0, (x - k.center).norm() - k.radius), x);
    }

    static double evaluate(const kind::Quadratic& k, const Vector& x) {
        check_dim(k.Q.rows(), x);
        return 0.5 * x.dot(k.Q * x) + k.q.dot(x) + k.c;
    }

    static double evaluate(const kind::DistanceToSubspace& k, const Vector& x) { return k.space.distance(x); }

    static double evaluate(const kind::DiagonalQuadratic& k, const Vector& x) {
        check_dim(k.weights.size(), x);
        return 0.5 * (k.weights.array() * x.array().square()).sum();
    }

    static double evaluate(const kind::Custom& k, const Vector& x) {
        require(bool(k.value), ErrorKind::Unsupported, "custom function has no evaluation callback");
        return k.value(x);
    }

    static Vector proximal(const kind::Zero&, double, const Vector& x) { return x; }

    static Vector proximal(const kind::L1Norm& k, double gamma, const Vector& x) {
        if (k.center.size() == 0) return detail::soft_threshold(x, gamma * k.scale);
        check_dim(k.center.size(), x);
        return k.center + detail::soft_threshold(x - k.center, gamma * k.scale);
    }

    static Vector proximal(const kind::IndicatorSubspace& k, double, const Vector& x) { return k.space.project(x); }

    static Vector proximal(const kind::IndicatorAffine& k, double, const Vector& x) {
        return k.offset + k.space.project(x - k.offset);
    }

    static Vector proximal(const kind::IndicatorBox& k, double, const Vector& x) {
        check_dim(k.lower.size(), x);
        return x.cwiseMax(k.lower).cwiseMin(k.upper);
    }

    static Vector proximal(const kind::IndicatorBall& k, double, const Vector& x) {
        check_dim(k.center.size(), x);
        const Vector offset = x - k.center;
        const double r = offset.norm();
        if (r <= k.radius) return x;
        return k.center + (k.radius / r) * offset;
    }

    Vector proximal(const kind::Quadratic& k, double gamma, const Vector& x) const {
        check_dim(k.Q.rows(), x);
        return cache_->solve(gamma, x - gamma * k.q);
    }

    static Vector proximal(const kind::DistanceToSubspace& k, double gamma, const Vector& x) {
        const Vector p = k.space.project(x);
        const double d = (x - p).norm();
        if (gamma >= d) return p;
        const double theta = gamma / d;
        return theta * p + (1.0 - theta) * x;
    }

    static Vector proximal(const kind::DiagonalQuadratic& k, double gamma, const Vector& x) {
        check_dim(k.weights.size(), x);
        return x.array() / (1.0 + gamma * k.weights.array());
    }

    static Vector proximal(const kind::Custom& k, double gamma, const Vector& x) {
        require(bool(k.prox), ErrorKind::Unsupported, "custom function has no prox callback");
        return k.prox(gamma, x);
    }

    std::shared_ptr<const FunctionKind> kind_;
    std::optional<double> beta_;
    std::shared_ptr<detail::QuadraticSolverCache> cache_;
};

// Proximal map of gamma * d_C for a subspace C.
inline Vector prox_distance(const Subspace& space, double gamma, const Vector& x) {
    return ProxFunction::distance(space).prox(gamma, x);
}

inline Vector prox(const ProxFunction& f, double gamma, const Vector& x) { return f.prox(gamma, x); }
inline Vector refl(const ProxFunction& f, double gamma, const Vector& x) { return f.refl(gamma, x); }

} // namespace opsplit
