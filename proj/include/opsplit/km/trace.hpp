#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "opsplit/core/prs.hpp"

namespace opsplit {

// Per-iteration history of a fixed-point run. Scalar series are always filled;
// vector iterates only when requested, since large problems cannot afford them.
struct IterationTrace {
    std::size_t iterations = 0;

    std::vector<double> lambda;     // lambda_k, k = 0..K
    std::vector<double> fpr;        // ||T z^k - z^k||^2
    std::vector<double> step_sq;    // ||z^{k+1} - z^k||^2, k = 0..K-1
    std::vector<double> dist_sq;    // ||z^k - z*||^2 when a reference point was supplied
    std::vector<double> objective;  // f(x_f^k) + g(x_g^k) for splitting runs, h(z^k) for FBS/PPA
    std::vector<double> f_value;    // f(x_f^k)
    std::vector<double> g_value;    // g(x_g^k)
    std::vector<double> ergodic_gap; // ||xbar_g^k - xbar_f^k||
    std::vector<double> ergodic_objective; // f(xbar_f^k) + g(xbar_g^k)

    std::vector<double> error_norm; // ||e^k|| for inexact runs
    std::vector<double> xi;         // error accounting term of the inexact estimate

    std::vector<Vector> z;
    std::vector<TriangleIterate> triangles;
    std::vector<Vector> ergodic_g;
    std::vector<Vector> ergodic_f;

    Vector final_z;
    Vector final_ergodic_g;
    Vector final_ergodic_f;

    bool aborted = false;
    std::string diagnostic;

    std::size_t size() const { return fpr.size(); }
    bool has_iterates() const { return !z.empty(); }
    bool has_triangles() const { return !triangles.empty(); }
};

struct TraceOptions {
    bool keep_iterates = true;
    std::optional<Vector> reference; // z* for dist_sq
};

} // namespace opsplit
