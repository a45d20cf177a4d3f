#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "opsplit/core/prs.hpp"
#include "opsplit/core/subspace.hpp"

namespace opsplit {

// Truncated direct sum of planes: U is spanned by e0 in every block, V by
// (cos theta_i, sin theta_i). Cosines near 1 are stored as 1 - c_i so that
// angles down to the smallest normal double stay distinct from zero.
class RotationSpaceSpec {
public:
    static RotationSpaceSpec from_cosines(const std::vector<double>& cosines) {
        std::vector<double> gaps;
        gaps.reserve(cosines.size());
        for (std::size_t i = 0; i < cosines.size(); ++i) {
            require(cosines[i] >= 0.0 && cosines[i] < 1.0, ErrorKind::InvalidArgument,
                    "block cosine c_" + std::to_string(i) + " must lie in [0, 1)");
            gaps.push_back(1.0 - cosines[i]);
        }
        return from_gaps(std::move(gaps));
    }

    static RotationSpaceSpec from_angles(const std::vector<double>& angles) {
        std::vector<double> gaps;
        gaps.reserve(angles.size());
        for (std::size_t i = 0; i < angles.size(); ++i) {
            require(angles[i] > 0.0 && angles[i] <= std::numbers::pi / 2.0, ErrorKind::InvalidArgument,
                    "block angle theta_" + std::to_string(i) + " must lie in (0, pi/2]");
            const double s = std::sin(0.5 * angles[i]);
            gaps.push_back(2.0 * s * s);
        }
        return from_gaps(std::move(gaps));
    }

    // gaps[i] = 1 - c_i in (0, 1]
    static RotationSpaceSpec from_gaps(std::vector<double> gaps) {
        require(!gaps.empty(), ErrorKind::InvalidArgument, "rotation space needs at least one block");
        RotationSpaceSpec s;
        s.theta_.reserve(gaps.size());
        for (std::size_t i = 0; i < gaps.size(); ++i) {
            require(gaps[i] > 0.0 && gaps[i] <= 1.0, ErrorKind::InvalidArgument,
                    "block cosine c_" + std::to_string(i) + " must lie in [0, 1)");
            s.theta_.push_back(2.0 * std::asin(std::sqrt(0.5 * gaps[i])));
        }
        s.gap_ = std::move(gaps);
        return s;
    }

    std::size_t blocks() const { return gap_.size(); }
    Eigen::Index ambient_dim() const { return 2 * Eigen::Index(blocks()); }
    double angle(std::size_t i) const { return theta_[i]; }
    double gap(std::size_t i) const { return gap_[i]; }
    double cosine(std::size_t i) const { return std::cos(theta_[i]); }
    double sine(std::size_t i) const { return std::sin(theta_[i]); }

    // c_i^k, with 0^0 = 1
    double cosine_power(std::size_t i, double k) const {
        if (k == 0.0) return 1.0;
        if (gap_[i] >= 1.0) return 0.0;
        return std::exp(k * std::log1p(-gap_[i]));
    }

    Subspace u_space() const {
        std::vector<Eigen::Index> axes(blocks());
        for (std::size_t i = 0; i < blocks(); ++i) axes[i] = 2 * Eigen::Index(i);
        return Subspace::coordinate_axes(ambient_dim(), axes);
    }

    Subspace v_space() const {
        std::vector<Eigen::Triplet<double>> entries;
        entries.reserve(2 * blocks());
        for (std::size_t i = 0; i < blocks(); ++i) {
            const auto col = Eigen::Index(i);
            entries.emplace_back(2 * col, col, cosine(i));
            if (sine(i) != 0.0) entries.emplace_back(2 * col + 1, col, sine(i));
        }
        SparseMatrix basis(ambient_dim(), Eigen::Index(blocks()));
        basis.setFromTriplets(entries.begin(), entries.end());
        return Subspace::from_orthonormal(std::move(basis));
    }

private:
    std::vector<double> theta_;
    std::vector<double> gap_;
};

// T = c_0 R_{theta_0} (+) c_1 R_{theta_1} (+) ..., the averaged PRS map of (iota_V, iota_U).
class RotationOperator {
public:
    explicit RotationOperator(RotationSpaceSpec spec) : spec_(std::move(spec)) {}

    const RotationSpaceSpec& spec() const { return spec_; }

    Vector operator()(const Vector& z) const { return power(z, 1); }

    // T^k z = (c_i^k R_{k theta_i} z_i)_i
    Vector power(const Vector& z, std::size_t k) const {
        check(z);
        Vector out(z.size());
        for (std::size_t i = 0; i < spec_.blocks(); ++i) {
            const double scale = spec_.cosine_power(i, double(k));
            const double a = double(k) * spec_.angle(i);
            const double c = std::cos(a), s = std::sin(a);
            const Eigen::Index at = 2 * Eigen::Index(i);
            out[at] = scale * (c * z[at] - s * z[at + 1]);
            out[at + 1] = scale * (s * z[at] + c * z[at + 1]);
        }
        return out;
    }

    // ||T^k z||^2 = sum_i c_i^{2k} ||z_i||^2
    double power_norm_sq(const Vector& z, std::size_t k) const {
        check(z);
        double sum = 0.0;
        for (std::size_t i = 0; i < spec_.blocks(); ++i) {
            const double c = spec_.cosine_power(i, double(k));
            sum += c * c * z.segment(2 * Eigen::Index(i), 2).squaredNorm();
        }
        return sum;
    }

private:
    void check(const Vector& z) const {
        require(z.size() == spec_.ambient_dim(), ErrorKind::InvalidArgument, "rotation operator dimension mismatch");
    }

    RotationSpaceSpec spec_;
};

// Largest gap between T z and (T_PRS)_{1/2} z for f = iota_V, g = iota_U over the given points.
inline double rotation_operator_defect(const RotationSpaceSpec& spec, const std::vector<Vector>& points,
                                       double gamma = 1.0) {
    const RotationOperator T(spec);
    const auto f = ProxFunction::indicator(spec.v_space());
    const auto g = ProxFunction::indicator(spec.u_space());
    double worst = 0.0;
    for (const auto& z : points) {
        const TriangleIterate t = apply_prs_operator(f, g, gamma, z);
        worst = std::max(worst, (z + (t.x_f - t.x_g) - T(z)).norm());
    }
    return worst;
}

} // namespace opsplit
