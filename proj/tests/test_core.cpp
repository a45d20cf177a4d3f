#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "opsplit/core/prs.hpp"
#include "test_support.hpp"

using namespace opsplit;
using opsplit::testing::grid_argmin;
using opsplit::testing::random_matrix;
using opsplit::testing::random_vector;
using opsplit::testing::vec;

namespace {

Subspace x_axis() { return Subspace::coordinate_axes(2, {0}); }

std::vector<ProxFunction> sample_functions(std::mt19937_64& rng, Eigen::Index n) {
    Matrix m = random_matrix(rng, n, n);
    Matrix basis = random_matrix(rng, n, 2);
    return {ProxFunction::zero(),
            ProxFunction::l1(0.7),
            ProxFunction::l1(1.3, random_vector(rng, n)),
            ProxFunction::indicator(Subspace::from_spanning(basis)),
            ProxFunction::indicator_affine(Subspace::from_spanning(basis), random_vector(rng, n)),
            ProxFunction::indicator_box(-Vector::Ones(n), 0.5 * Vector::Ones(n)),
            ProxFunction::indicator_ball(random_vector(rng, n), 0.8),
            ProxFunction::quadratic(m.transpose() * m, random_vector(rng, n), 0.3),
            ProxFunction::distance(Subspace::from_spanning(basis)),
            ProxFunction::diagonal_quadratic(random_vector(rng, n).cwiseAbs())};
}

} // namespace

TEST(Prox, SoftThresholdAtAbsExampleStart) {
    EXPECT_NEAR(ProxFunction::l1(1.0).prox(1.0, vec({1.9}))[0], 0.9, 1e-15);
}

TEST(Prox, ZeroIsIdentity) {
    const Vector x = vec({3.0, -1.0, 2.5});
    EXPECT_EQ(ProxFunction::zero().prox(0.3, x), x);
}

TEST(Prox, DiagonalQuadraticMatchesGridMinimization) {
    const auto f = ProxFunction::diagonal_quadratic(vec({1.0, 0.5}));
    const Vector p = f.prox(1.0, vec({1.0, 1.0}));
    EXPECT_NEAR(p[0], 0.5, 1e-15);
    EXPECT_NEAR(p[1], 2.0 / 3.0, 1e-15);
    // The objective separates, so each coordinate is an independent 1-D minimization.
    const double g0 = grid_argmin([](double y) { return 0.5 * y * y + 0.5 * (y - 1) * (y - 1); }, -2, 2);
    const double g1 = grid_argmin([](double y) { return 0.25 * y * y + 0.5 * (y - 1) * (y - 1); }, -2, 2);
    EXPECT_NEAR(p[0], g0, 1e-4);
    EXPECT_NEAR(p[1], g1, 1e-4);
}

TEST(Prox, RejectsBadInput) {
    const auto f = ProxFunction::l1(1.0);
    EXPECT_THROW(f.prox(0.0, vec({1.0})), Error);
    EXPECT_THROW(f.prox(1.0, vec({std::nan("")})), Error);
    kind::Custom no_prox;
    no_prox.value = [](const Vector&) { return 0.0; };
    try {
        ProxFunction::custom(no_prox).prox(1.0, vec({1.0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Unsupported);
    }
}

TEST(Refl, Examples) {
    EXPECT_EQ(ProxFunction::zero().refl(1.0, vec({3, -1})), vec({3, -1}));
    EXPECT_EQ(ProxFunction::indicator(x_axis()).refl(1.0, vec({1, 1})), vec({1, -1}));
    EXPECT_NEAR(ProxFunction::l1(1.0).refl(1.0, vec({1.9}))[0], -0.1, 1e-15);
}

TEST(ProxDistance, ShrinksTowardSubspace) {
    const Vector p = prox_distance(x_axis(), 1.0, vec({0, 3}));
    EXPECT_NEAR(p[0], 0.0, 1e-15);
    EXPECT_NEAR(p[1], 2.0, 1e-15);
    const double grid = grid_argmin([](double y) { return std::abs(y) + 0.5 * (y - 3) * (y - 3); }, -1, 4);
    EXPECT_NEAR(p[1], grid, 1e-4);
    EXPECT_EQ(prox_distance(x_axis(), 1.0, vec({2, 0})), vec({2, 0}));
    EXPECT_EQ(prox_distance(x_axis(), 5.0, vec({0, 3})), vec({0, 0}));
}

TEST(Subspace, DegenerateBasisRejected) {
    Matrix dependent(3, 2);
    dependent << 1, 2, 0, 0, 1, 2;
    EXPECT_THROW(Subspace::from_spanning(dependent), Error);
    SparseMatrix not_orthonormal(2, 1);
    not_orthonormal.insert(0, 0) = 2.0;
    EXPECT_THROW(Subspace::from_orthonormal(not_orthonormal), Error);
}

TEST(Subspace, ProjectionIdempotent) {
    std::mt19937_64 rng(3);
    const auto s = Subspace::from_spanning(random_matrix(rng, 6, 3));
    for (int i = 0; i < 20; ++i) {
        const Vector p = s.project(random_vector(rng, 6));
        EXPECT_LE((s.project(p) - p).norm(), 1e-12);
    }
}

TEST(Evaluation, IndicatorReturnsInfinityOutsideTolerance) {
    const auto f = ProxFunction::indicator(x_axis());
    EXPECT_EQ(f.value(vec({5, 0})), 0.0);
    EXPECT_EQ(f.value(vec({5, 1e-11})), 0.0);
    EXPECT_TRUE(std::isinf(f.value(vec({5, 1e-6}))));
}

TEST(Quadratic, RejectsAsymmetricOrIndefinite) {
    Matrix asym(2, 2);
    asym << 1, 2, 0, 1;
    EXPECT_THROW(ProxFunction::quadratic(asym), Error);
    EXPECT_THROW(ProxFunction::quadratic(-Matrix::Identity(2, 2)), Error);
}

TEST(Quadratic, ProxSolvesShiftedSystem) {
    Matrix Q(2, 2);
    Q << 2, 1, 1, 3;
    const Vector q = vec({1, -1});
    const auto f = ProxFunction::quadratic(Q, q);
    const Vector x = vec({0.4, 2.0});
    const Vector p = f.prox(0.5, x);
    // Optimality: Q p + q + (p - x)/gamma = 0.
    EXPECT_LE((Q * p + q + (p - x) / 0.5).norm(), 1e-13);
    EXPECT_NEAR(*f.lipschitz_grad(), 1.0 / Eigen::SelfAdjointEigenSolver<Matrix>(Q).eigenvalues().maxCoeff(), 1e-14);
}

TEST(Properties, ResolventOptimalityForEveryKind) {
    std::mt19937_64 rng(11);
    for (const auto& f : sample_functions(rng, 5)) {
        for (int trial = 0; trial < 30; ++trial) {
            const double gamma = 0.2 + std::uniform_real_distribution<double>(0, 2)(rng);
            const Vector x = random_vector(rng, 5, 2.0);
            const Vector p = f.prox(gamma, x);
            // Probe points inside the domain: prox images of random points.
            const Vector u = f.prox(1.0, random_vector(rng, 5, 2.0));
            EXPECT_GE(f.value(u) - f.value(p) - (u - p).dot(x - p) / gamma, -1e-10) << f.name();
        }
    }
}

TEST(Properties, FirmNonexpansiveAndReflectionNonexpansive) {
    std::mt19937_64 rng(5);
    for (const auto& f : sample_functions(rng, 5)) {
        std::vector<std::pair<Vector, Vector>> pairs;
        for (int i = 0; i < 100; ++i) pairs.emplace_back(random_vector(rng, 5, 3.0), random_vector(rng, 5, 3.0));
        EXPECT_TRUE(check_firm_nonexpansive(f, 0.8, pairs).pass()) << f.name();
        for (const auto& [x, y] : pairs) {
            EXPECT_LE((f.refl(0.8, x) - f.refl(0.8, y)).norm(), (x - y).norm() + 1e-10) << f.name();
        }
    }
}

TEST(Properties, AveragedOperatorContraction) {
    std::mt19937_64 rng(9);
    auto fs = sample_functions(rng, 4);
    for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
        const auto& f = fs[i];
        const auto& g = fs[i + 1];
        for (int trial = 0; trial < 20; ++trial) {
            const double lambda = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
            auto T = [&](const Vector& v) { return apply_prs_operator(f, g, 1.0, v).prs_image(); };
            auto Tl = [&](const Vector& v) { return Vector((1 - lambda) * v + lambda * T(v)); };
            const Vector x = random_vector(rng, 4, 2.0), y = random_vector(rng, 4, 2.0);
            const Vector rx = x - Tl(x), ry = y - Tl(y);
            EXPECT_LE((Tl(x) - Tl(y)).squaredNorm(),
                      (x - y).squaredNorm() - ((1 - lambda) / lambda) * (rx - ry).squaredNorm() + 1e-9);
        }
    }
}

TEST(Triangle, SquareExampleEvenStep) {
    const auto f = ProxFunction::indicator(Subspace::coordinate_axes(2, {1})); // x1 = 0
    const auto g = ProxFunction::indicator(Subspace::coordinate_axes(2, {0})); // x2 = 0
    const TriangleIterate t = apply_prs_operator(f, g, 1.0, vec({1, 1}));
    EXPECT_EQ(t.x_g, vec({1, 0}));
    EXPECT_EQ(t.x_f, vec({0, -1}));
    EXPECT_EQ(t.prs_image(), vec({-1, -1}));
}

TEST(Triangle, AbsExampleStep) {
    const TriangleIterate t = apply_prs_operator(ProxFunction::l1(1.0), ProxFunction::zero(), 1.0, vec({1.9}));
    EXPECT_NEAR(t.x_g[0], 1.9, 1e-15);
    EXPECT_NEAR(t.x_f[0], 0.9, 1e-15);
    EXPECT_NEAR(t.prs_image()[0], -0.1, 1e-15);
}

TEST(Triangle, ReconstructionIdentities) {
    std::mt19937_64 rng(21);
    auto fs = sample_functions(rng, 5);
    for (std::size_t i = 0; i + 1 < fs.size(); ++i) {
        const Vector z = random_vector(rng, 5, 2.0);
        const TriangleIterate t = apply_prs_operator(fs[i], fs[i + 1], 0.7, z);
        EXPECT_LE((t.x_g - (z - 0.7 * t.subgrad_g)).norm(), 1e-14);
        EXPECT_LE((t.x_f - (t.x_g - 0.7 * t.subgrad_g - 0.7 * t.subgrad_f)).norm(), 1e-14);
    }
}

TEST(Triangle, FixedPointHasEqualPrimalPoints) {
    const auto f = ProxFunction::l1(1.0);
    const auto g = ProxFunction::zero();
    const TriangleIterate t = apply_prs_operator(f, g, 1.0, vec({0.0}));
    EXPECT_EQ(t.x_f, t.x_g);
    EXPECT_EQ(t.prs_image(), t.z);
}
