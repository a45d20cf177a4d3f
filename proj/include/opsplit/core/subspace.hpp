#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <vector>

#include "opsplit/core/vector.hpp"

namespace opsplit {

// Linear subspace held as an orthonormal basis (columns), stored sparse so that
// block-structured subspaces of large ambient dimension stay cheap to apply.
class Subspace {
public:
    Subspace() = default;

    // Orthonormalizes the columns of `spanning` (modified Gram-Schmidt, two passes).
    static Subspace from_spanning(const Matrix& spanning, double tolerance = 1e-12) {
        const Eigen::Index n = spanning.rows();
        require(n > 0, ErrorKind::InvalidArgument, "subspace ambient dimension must be positive");
        require(spanning.allFinite(), ErrorKind::InvalidArgument, "subspace basis has non-finite entries");
        Matrix q(n, spanning.cols());
        for (Eigen::Index j = 0; j < spanning.cols(); ++j) {
            Vector v = spanning.col(j);
            const double scale = std::max(1.0, v.norm());
            for (int pass = 0; pass < 2; ++pass) {
                for (Eigen::Index i = 0; i < j; ++i) v -= q.col(i).dot(v) * q.col(i);
            }
            const double r = v.norm();
            require(r > tolerance * scale, ErrorKind::InvalidArgument,
                    "degenerate subspace basis: column " + std::to_string(j) + " is linearly dependent");
            q.col(j) = v / r;
        }
        Subspace s;
        s.basis_ = std::make_shared<SparseMatrix>(q.sparseView(0.0, 0.0));
        s.basis_->makeCompressed();
        return s;
    }

    // Takes a basis that is already orthonormal; verified to `tolerance`.
    static Subspace from_orthonormal(SparseMatrix basis, double tolerance = 1e-10) {
        require(basis.rows() > 0, ErrorKind::InvalidArgument, "subspace ambient dimension must be positive");
        basis.makeCompressed();
        for (Eigen::Index k = 0; k < basis.nonZeros(); ++k) {
            require(std::isfinite(basis.valuePtr()[k]), ErrorKind::InvalidArgument,
                    "subspace basis has non-finite entries");
        }
        Subspace s;
        if (basis.cols() == 0) {
            s.basis_ = std::make_shared<SparseMatrix>(std::move(basis));
            return s;
        }
        SparseMatrix gram = SparseMatrix(basis.transpose()) * basis;
        SparseMatrix identity(basis.cols(), basis.cols());
        identity.setIdentity();
        const double defect = (gram - identity).norm();
        require(defect <= tolerance * std::max<double>(1.0, std::sqrt(double(basis.cols()))),
                ErrorKind::InvalidArgument, "degenerate subspace basis: columns are not orthonormal");
        s.basis_ = std::make_shared<SparseMatrix>(std::move(basis));
        return s;
    }

    // Span of selected coordinate axes.
    static Subspace coordinate_axes(Eigen::Index ambient, const std::vector<Eigen::Index>& axes) {
        SparseMatrix basis(ambient, Eigen::Index(axes.size()));
        std::vector<Eigen::Triplet<double>> entries;
        for (std::size_t j = 0; j < axes.size(); ++j) {
            require(axes[j] >= 0 && axes[j] < ambient, ErrorKind::InvalidArgument, "axis index out of range");
            entries.emplace_back(axes[j], Eigen::Index(j), 1.0);
        }
        basis.setFromTriplets(entries.begin(), entries.end());
        return from_orthonormal(std::move(basis));
    }

    static Subspace trivial(Eigen::Index ambient) {
        return from_orthonormal(SparseMatrix(ambient, 0));
    }

    Eigen::Index ambient_dim() const { return basis_ ? basis_->rows() : 0; }
    Eigen::Index dim() const { return basis_ ? basis_->cols() : 0; }
    const SparseMatrix& basis() const { return *basis_; }
    bool valid() const { return basis_ != nullptr; }

    Vector coordinates(const Vector& x) const {
        check(x);
        if (dim() == 0) return Vector();
        return basis_->transpose() * x;
    }

    Vector project(const Vector& x) const {
        check(x);
        if (dim() == 0) return Vector::Zero(x.size());
        const Vector c = basis_->transpose() * x;
        return *basis_ * c;
    }

    double distance(const Vector& x) const { return (x - project(x)).norm(); }

    bool contains(const Vector& x, double tolerance = 1e-10) const {
        return distance(x) <= tolerance * std::max(1.0, x.norm());
    }

private:
    void check(const Vector& x) const {
        require(basis_ != nullptr, ErrorKind::InvalidArgument, "empty subspace descriptor");
        require(x.size() == basis_->rows(), ErrorKind::InvalidArgument, "subspace dimension mismatch");
    }

    std::shared_ptr<SparseMatrix> basis_;
};

} // namespace opsplit
