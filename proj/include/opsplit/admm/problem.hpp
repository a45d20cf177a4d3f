#pragma once

#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "opsplit/core/prox_function.hpp"

namespace opsplit {

// Block-separable decomposition sum_i parts[i](x_i) of a function on a stacked variable.
struct BlockSeparable {
    std::vector<ProxFunction> parts;
    std::vector<Eigen::Index> sizes;

    Eigen::Index dim() const { return std::accumulate(sizes.begin(), sizes.end(), Eigen::Index(0)); }
    bool empty() const { return parts.empty(); }
};

// minimize f(x) + g(y) subject to A x + B y = b
struct LinearlyConstrainedProblem {
    ProxFunction f;
    ProxFunction g;
    Matrix A;
    Matrix B;
    Vector b;
    BlockSeparable f_blocks; // optional; lets the x-solver work per block
    BlockSeparable g_blocks;

    Eigen::Index x_dim() const { return A.cols(); }
    Eigen::Index y_dim() const { return B.cols(); }
    Eigen::Index constraint_dim() const { return A.rows(); }

    Vector residual(const Vector& x, const Vector& y) const { return A * x + B * y - b; }
    double objective(const Vector& x, const Vector& y) const { return f.value(x) + g.value(y); }

    void validate() const {
        require(A.rows() > 0 && A.cols() > 0 && B.cols() > 0, ErrorKind::InvalidArgument, "empty constraint maps");
        require(A.rows() == B.rows() && A.rows() == b.size(), ErrorKind::InvalidArgument,
                "constraint dimensions disagree: A is " + std::to_string(A.rows()) + " rows, B " +
                    std::to_string(B.rows()) + ", b " + std::to_string(b.size()));
        require(A.allFinite() && B.allFinite(), ErrorKind::InvalidArgument, "constraint maps have non-finite entries");
        require_finite(b, "constraint offset");
        if (!f_blocks.empty())
            require(f_blocks.dim() == x_dim(), ErrorKind::InvalidArgument, "f block sizes do not cover x");
        if (!g_blocks.empty())
            require(g_blocks.dim() == y_dim(), ErrorKind::InvalidArgument, "g block sizes do not cover y");
    }
};

inline LinearlyConstrainedProblem make_problem(ProxFunction f, ProxFunction g, Matrix A, Matrix B, Vector b) {
    LinearlyConstrainedProblem p{std::move(f), std::move(g), std::move(A), std::move(B), std::move(b), {}, {}};
    p.validate();
    return p;
}

// x -> l(M x - shift) for quadratic (or zero) l; the result is again quadratic.
inline ProxFunction compose_quadratic(const ProxFunction& l, const Matrix& M, const Vector& shift) {
    require(M.rows() == shift.size(), ErrorKind::InvalidArgument, "composition shift dimension mismatch");
    if (l.as<kind::Zero>()) return ProxFunction::quadratic(Matrix::Zero(M.cols(), M.cols()));
    const auto* q = l.as<kind::Quadratic>();
    require(q != nullptr, ErrorKind::Unsupported,
            "composition with a linear map is only available for quadratic losses, got " + l.name());
    require(q->Q.rows() == M.rows(), ErrorKind::InvalidArgument, "loss dimension does not match map rows");
    Matrix Q = M.transpose() * q->Q * M;
    Q = 0.5 * (Q + Q.transpose());
    const Vector lin = M.transpose() * (q->q - q->Q * shift);
    const double c = 0.5 * shift.dot(q->Q * shift) - q->q.dot(shift) + q->c;
    return ProxFunction::quadratic(std::move(Q), lin, c);
}

namespace detail {

inline std::vector<Vector> split_blocks(const BlockSeparable& s, const Vector& x) {
    std::vector<Vector> out;
    Eigen::Index at = 0;
    for (auto n : s.sizes) {
        out.push_back(x.segment(at, n));
        at += n;
    }
    return out;
}

} // namespace detail

// sum_i parts[i](x_i). Quadratic and zero parts collapse to one block-diagonal
// quadratic; anything else becomes a custom function with a blockwise prox.
inline ProxFunction separable_sum(const BlockSeparable& s) {
    require(!s.parts.empty() && s.parts.size() == s.sizes.size(), ErrorKind::InvalidArgument,
            "separable sum needs one size per part");
    const Eigen::Index n = s.dim();
    bool all_zero = true, all_quadratic = true;
    for (const auto& p : s.parts) {
        all_zero = all_zero && p.as<kind::Zero>();
        all_quadratic = all_quadratic && (p.as<kind::Zero>() || p.as<kind::Quadratic>());
    }
    if (all_zero) return ProxFunction::zero();
    if (all_quadratic) {
        Matrix Q = Matrix::Zero(n, n);
        Vector q = Vector::Zero(n);
        double c = 0.0;
        Eigen::Index at = 0;
        for (std::size_t i = 0; i < s.parts.size(); ++i) {
            if (const auto* k = s.parts[i].as<kind::Quadratic>()) {
                require(k->Q.rows() == s.sizes[i], ErrorKind::InvalidArgument, "block quadratic size mismatch");
                Q.block(at, at, s.sizes[i], s.sizes[i]) = k->Q;
                q.segment(at, s.sizes[i]) = k->q;
                c += k->c;
            }
            at += s.sizes[i];
        }
        return ProxFunction::quadratic(std::move(Q), std::move(q), c);
    }
    kind::Custom spec;
    spec.value = [s](const Vector& x) {
        const auto blocks = detail::split_blocks(s, x);
        double v = 0.0;
        for (std::size_t i = 0; i < blocks.size(); ++i) v += s.parts[i].value(blocks[i]);
        return v;
    };
    spec.prox = [s](double gamma, const Vector& x) {
        const auto blocks = detail::split_blocks(s, x);
        Vector out(x.size());
        Eigen::Index at = 0;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            out.segment(at, s.sizes[i]) = s.parts[i].prox(gamma, blocks[i]);
            at += s.sizes[i];
        }
        return out;
    };
    return ProxFunction::custom(std::move(spec));
}

} // namespace opsplit
