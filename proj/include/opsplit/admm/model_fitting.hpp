#pragma once

#include <cstddef>
#include <vector>

#include "opsplit/admm/problem.hpp"

namespace opsplit {

// minimize l(M y - b) + r(y), the loss seen through an auxiliary x = M y - b.
inline double model_objective(const ProxFunction& l, const ProxFunction& r, const Matrix& M, const Vector& b,
                              const Vector& y) {
    return l.value(M * y - b) + r.value(y);
}

// f = l on x, g = r on y, constraint M y - x = b.
inline LinearlyConstrainedProblem split_auxiliary(ProxFunction l, ProxFunction r, const Matrix& M, const Vector& b) {
    require(M.rows() == b.size() && M.rows() > 0 && M.cols() > 0, ErrorKind::InvalidArgument,
            "split_auxiliary: M must be m x n with b in R^m");
    if (const auto* q = l.as<kind::Quadratic>())
        require(q->Q.rows() == M.rows(), ErrorKind::InvalidArgument, "split_auxiliary: loss dimension mismatch");
    const Eigen::Index m = M.rows();
    return make_problem(std::move(l), std::move(r), -Matrix::Identity(m, m), M, b);
}

// Per-block losses l_i(M_i x_i - b_i) on copies x_i of y, constraint x_i - y = 0.
inline LinearlyConstrainedProblem split_across_examples(const std::vector<ProxFunction>& l_blocks, ProxFunction r,
                                                        const std::vector<Matrix>& M_blocks,
                                                        const std::vector<Vector>& b_blocks) {
    const std::size_t R = l_blocks.size();
    require(R > 0 && M_blocks.size() == R && b_blocks.size() == R, ErrorKind::InvalidArgument,
            "split_across_examples: need one loss, matrix and offset per block");
    const Eigen::Index n = M_blocks.front().cols();
    BlockSeparable blocks;
    for (std::size_t i = 0; i < R; ++i) {
        require(M_blocks[i].cols() == n && M_blocks[i].rows() == b_blocks[i].size(), ErrorKind::InvalidArgument,
                "split_across_examples: block " + std::to_string(i) + " has inconsistent shape");
        blocks.parts.push_back(compose_quadratic(l_blocks[i], M_blocks[i], b_blocks[i]));
        blocks.sizes.push_back(n);
    }
    const Eigen::Index N = n * Eigen::Index(R);
    Matrix B(N, n);
    for (std::size_t i = 0; i < R; ++i) B.block(Eigen::Index(i) * n, 0, n, n) = -Matrix::Identity(n, n);
    auto p = make_problem(separable_sum(blocks), std::move(r), Matrix::Identity(N, N), std::move(B), Vector::Zero(N));
    p.f_blocks = std::move(blocks);
    return p;
}

// Column blocks M_i with block-separable r = sum r_i(y_i): l(sum x_i - b) with x_i - M_i y_i = 0.
inline LinearlyConstrainedProblem split_across_features(const ProxFunction& l,
                                                        const std::vector<ProxFunction>& r_blocks,
                                                        const std::vector<Matrix>& M_col_blocks, const Vector& b) {
    const std::size_t C = r_blocks.size();
    require(C > 0 && M_col_blocks.size() == C, ErrorKind::InvalidArgument,
            "split_across_features: need one regularizer per column block");
    const Eigen::Index m = b.size();
    BlockSeparable g_blocks;
    Eigen::Index n = 0;
    for (std::size_t i = 0; i < C; ++i) {
        require(M_col_blocks[i].rows() == m, ErrorKind::InvalidArgument,
                "split_across_features: block " + std::to_string(i) + " row count differs from b");
        g_blocks.parts.push_back(r_blocks[i]);
        g_blocks.sizes.push_back(M_col_blocks[i].cols());
        n += M_col_blocks[i].cols();
    }
    const Eigen::Index N = m * Eigen::Index(C);
    Matrix sum_map(m, N), B = Matrix::Zero(N, n);
    Eigen::Index col = 0;
    for (std::size_t i = 0; i < C; ++i) {
        sum_map.block(0, Eigen::Index(i) * m, m, m) = Matrix::Identity(m, m);
        B.block(Eigen::Index(i) * m, col, m, M_col_blocks[i].cols()) = -M_col_blocks[i];
        col += M_col_blocks[i].cols();
    }
    auto p = make_problem(compose_quadratic(l, sum_map, b), separable_sum(g_blocks), Matrix::Identity(N, N),
                          std::move(B), Vector::Zero(N));
    p.g_blocks = std::move(g_blocks);
    return p;
}

} // namespace opsplit
