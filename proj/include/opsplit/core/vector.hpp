#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <string>

#include "opsplit/core/error.hpp"

namespace opsplit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

inline bool all_finite(const Vector& x) { return x.allFinite(); }

inline void require_finite(const Vector& x, const std::string& what) {
    require(all_finite(x), ErrorKind::InvalidArgument, what + " has non-finite coordinates");
}

inline void require_same_dim(const Vector& a, const Vector& b, const std::string& what) {
    require(a.size() == b.size(), ErrorKind::InvalidArgument,
            what + ": dimension mismatch (" + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + ")");
}

inline void require_positive(double value, const std::string& what) {
    require(std::isfinite(value) && value > 0.0, ErrorKind::InvalidArgument,
            what + " must be positive and finite");
}

// Absolute plus relative slack used by every inequality check.
inline double check_slack(double reference, double absolute = 1e-9, double relative = 1e-12) {
    return absolute + relative * std::abs(reference);
}

} // namespace opsplit
