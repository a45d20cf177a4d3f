#pragma once

#include <cstdint>
#include <random>

#include "opsplit/core/vector.hpp"

namespace opsplit::testing {

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
    std::normal_distribution<double> normal(0.0, scale);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
    return v;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> normal;
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
    return m;
}

inline Vector vec(std::initializer_list<double> values) {
    Vector v(Eigen::Index(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

// Brute-force minimizer of phi over a uniform grid on [lo, hi].
template <class Phi>
double grid_argmin(const Phi& phi, double lo, double hi, int points = 200001) {
    double best = lo, best_value = phi(lo);
    for (int i = 1; i < points; ++i) {
        const double x = lo + (hi - lo) * double(i) / double(points - 1);
        const double v = phi(x);
        if (v < best_value) best_value = v, best = x;
    }
    return best;
}

} // namespace opsplit::testing
