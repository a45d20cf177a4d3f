#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "opsplit/admm/problem.hpp"

namespace opsplit {

enum class SubproblemStrategy { MinimizeAlone, QuadraticSystem, ScaledProx, BlockProx, InnerFbs };

inline const char* to_string(SubproblemStrategy s) {
    switch (s) {
    case SubproblemStrategy::MinimizeAlone: return "minimize-alone";
    case SubproblemStrategy::QuadraticSystem: return "quadratic-system";
    case SubproblemStrategy::ScaledProx: return "scaled-prox";
    case SubproblemStrategy::BlockProx: return "block-prox";
    case SubproblemStrategy::InnerFbs: return "inner-fbs";
    }
    return "unknown";
}

struct InnerSolverLimits {
    double tolerance = 1e-10;
    std::size_t max_iterations = 100000;
};

// argmin_x f(x) - <w, A x> + (gamma/2) ||A x||^2
class SubproblemSolver {
public:
    SubproblemSolver(ProxFunction f, Matrix A, BlockSeparable blocks = {}, InnerSolverLimits limits = {})
        : f_(std::move(f)), A_(std::move(A)), blocks_(std::move(blocks)), limits_(limits),
          cache_(std::make_shared<std::map<double, Eigen::CompleteOrthogonalDecomposition<Matrix>>>()) {
        require(A_.allFinite(), ErrorKind::InvalidArgument, "subproblem map has non-finite entries");
        gram_ = A_.transpose() * A_;
        strategy_ = classify();
    }

    SubproblemStrategy strategy() const { return strategy_; }
    const Matrix& map() const { return A_; }
    const ProxFunction& function() const { return f_; }

    Vector solve(double gamma, const Vector& w, const Vector* warm = nullptr) const {
        require_positive(gamma, "gamma");
        require(w.size() == A_.rows(), ErrorKind::InvalidArgument, "dual vector dimension mismatch");
        require_finite(w, "dual vector");
        const Vector rhs = A_.transpose() * w;
        switch (strategy_) {
        case SubproblemStrategy::MinimizeAlone: return minimize_alone();
        case SubproblemStrategy::QuadraticSystem: return quadratic_system(gamma, rhs);
        case SubproblemStrategy::ScaledProx: {
            // (gamma c / 2)||x - A'w/(gamma c)||^2 up to constants
            const double t = gamma * scale_;
            return f_.prox(1.0 / t, rhs / t);
        }
        case SubproblemStrategy::BlockProx: {
            Vector x(A_.cols());
            Eigen::Index at = 0;
            for (std::size_t i = 0; i < blocks_.parts.size(); ++i) {
                const Eigen::Index n = blocks_.sizes[i];
                const double t = gamma * block_scales_[i];
                x.segment(at, n) = t > 0.0 ? blocks_.parts[i].prox(1.0 / t, rhs.segment(at, n) / t)
                                           : minimize(blocks_.parts[i], n);
                at += n;
            }
            return x;
        }
        case SubproblemStrategy::InnerFbs: return inner_fbs(gamma, w, warm);
        }
        fail(ErrorKind::Unsupported, "unknown subproblem strategy");
    }

private:
    SubproblemStrategy classify() {
        const double scale = std::max(1.0, gram_.norm());
        if (A_.norm() == 0.0) return SubproblemStrategy::MinimizeAlone;
        if (quadratic_part()) return SubproblemStrategy::QuadraticSystem;
        const double c = gram_.diagonal().mean();
        if (c > 0.0 && (gram_ - c * Matrix::Identity(gram_.rows(), gram_.cols())).norm() <= 1e-12 * scale) {
            scale_ = c;
            return SubproblemStrategy::ScaledProx;
        }
        if (!blocks_.empty() && block_scaled_identity(scale)) return SubproblemStrategy::BlockProx;
        Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_, Eigen::EigenvaluesOnly);
        scale_ = eig.eigenvalues().maxCoeff();
        return SubproblemStrategy::InnerFbs;
    }

    // Q and q of f when f is quadratic (zero and diagonal forms included).
    std::optional<std::pair<Matrix, Vector>> quadratic_part() const {
        const Eigen::Index n = A_.cols();
        if (f_.as<kind::Zero>()) return std::make_pair(Matrix(Matrix::Zero(n, n)), Vector(Vector::Zero(n)));
        if (const auto* q = f_.as<kind::Quadratic>()) return std::make_pair(q->Q, q->q);
        if (const auto* d = f_.as<kind::DiagonalQuadratic>())
            return std::make_pair(Matrix(d->weights.asDiagonal()), Vector(Vector::Zero(n)));
        return std::nullopt;
    }

    bool block_scaled_identity(double scale) {
        Matrix expected = Matrix::Zero(gram_.rows(), gram_.cols());
        Eigen::Index at = 0;
        block_scales_.clear();
        for (auto n : blocks_.sizes) {
            const double c = gram_.block(at, at, n, n).diagonal().mean();
            expected.block(at, at, n, n) = c * Matrix::Identity(n, n);
            block_scales_.push_back(c);
            at += n;
        }
        return (gram_ - expected).norm() <= 1e-12 * scale;
    }

    static Vector minimize(const ProxFunction& f, Eigen::Index n) {
        if (f.as<kind::Zero>() || f.as<kind::DiagonalQuadratic>() || f.as<kind::DistanceToSubspace>())
            return Vector::Zero(n);
        if (const auto* l = f.as<kind::L1Norm>()) return l->center.size() ? l->center : Vector(Vector::Zero(n));
        if (const auto* q = f.as<kind::Quadratic>()) {
            Eigen::CompleteOrthogonalDecomposition<Matrix> cod(q->Q);
            const Vector x = cod.solve(-q->q);
            require((q->Q * x + q->q).norm() <= 1e-9 * std::max(1.0, q->q.norm()), ErrorKind::SolverFailure,
                    "quadratic is unbounded below");
            return x;
        }
        if (f.is_indicator()) return f.prox(1.0, Vector::Zero(n));
        // Proximal point iteration for everything else.
        Vector x = Vector::Zero(n);
        for (int k = 0; k < 100000; ++k) {
            const Vector next = f.prox(1.0, x);
            if ((next - x).norm() <= 1e-12 * std::max(1.0, x.norm())) return next;
            x = next;
        }
        fail(ErrorKind::SolverFailure, "proximal point minimization did not settle");
    }

    Vector minimize_alone() const { return minimize(f_, A_.cols()); }

    Vector quadratic_system(double gamma, const Vector& rhs_dual) const {
        const auto [Q, q] = *quadratic_part();
        auto it = cache_->find(gamma);
        if (it == cache_->end()) {
            it = cache_->emplace(gamma, Eigen::CompleteOrthogonalDecomposition<Matrix>(Q + gamma * gram_)).first;
        }
        const Vector rhs = rhs_dual - q;
        const Vector x = it->second.solve(rhs);
        const double res = ((Q + gamma * gram_) * x - rhs).norm();
        require(res <= 1e-9 * std::max(1.0, rhs.norm()), ErrorKind::SolverFailure,
                "x-subproblem has no minimizer; normal-equation residual " + std::to_string(res));
        return x;
    }

    // Stops when the inclusion A'(w - gamma A x) in df(x) holds to the tolerance: the
    // prox step certifies (x_prev - x)/step - grad(x_prev) in df(x).
    Vector inner_fbs(double gamma, const Vector& w, const Vector* warm) const {
        const double step = 1.0 / (gamma * scale_);
        Vector x = warm && warm->size() == A_.cols() ? *warm : Vector(Vector::Zero(A_.cols()));
        auto gradient = [&](const Vector& v) { return Vector(A_.transpose() * (gamma * (A_ * v) - w)); };
        Vector grad = gradient(x);
        double defect = 0.0;
        for (std::size_t k = 0; k < limits_.max_iterations; ++k) {
            const Vector next = f_.prox(step, x - step * grad);
            const Vector next_grad = gradient(next);
            defect = ((x - next) / step - grad + next_grad).norm();
            x = next;
            grad = next_grad;
            if (defect <= limits_.tolerance * std::max(1.0, grad.norm())) return x;
        }
        fail(ErrorKind::SolverFailure, "inner forward-backward solver hit its iteration cap; inclusion defect " +
                                           std::to_string(defect));
    }

    ProxFunction f_;
    Matrix A_;
    Matrix gram_;
    BlockSeparable blocks_;
    InnerSolverLimits limits_;
    SubproblemStrategy strategy_ = SubproblemStrategy::InnerFbs;
    double scale_ = 1.0;
    std::vector<double> block_scales_;
    std::shared_ptr<std::map<double, Eigen::CompleteOrthogonalDecomposition<Matrix>>> cache_;
};

struct DualProxResult {
    Vector primal; // x+ (or y+)
    Vector dual;   // w+ (or v+)
};

// prox_{gamma d_f}(w) with d_f(w) = f*(A' w).
inline DualProxResult dual_prox_f(const SubproblemSolver& solver, double gamma, const Vector& w,
                                  const Vector* warm = nullptr) {
    Vector x = solver.solve(gamma, w, warm);
    Vector wp = w - gamma * (solver.map() * x);
    return {std::move(x), std::move(wp)};
}

inline DualProxResult dual_prox_f(const ProxFunction& f, const Matrix& A, double gamma, const Vector& w) {
    return dual_prox_f(SubproblemSolver(f, A), gamma, w);
}

// prox_{gamma d_g}(v) with d_g(v) = g*(B' v) - <v, b>.
inline DualProxResult dual_prox_g(const SubproblemSolver& solver, const Vector& b, double gamma, const Vector& v,
                                  const Vector* warm = nullptr) {
    require_same_dim(v, b, "dual prox of g");
    Vector y = solver.solve(gamma, v + gamma * b, warm);
    Vector vp = v - gamma * (solver.map() * y - b);
    return {std::move(y), std::move(vp)};
}

inline DualProxResult dual_prox_g(const ProxFunction& g, const Matrix& B, const Vector& b, double gamma,
                                  const Vector& v) {
    return dual_prox_g(SubproblemSolver(g, B), b, gamma, v);
}

} // namespace opsplit
