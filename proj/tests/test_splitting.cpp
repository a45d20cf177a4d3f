#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "opsplit/rates/bounds.hpp"
#include "opsplit/splitting/certificate.hpp"
#include "opsplit/splitting/drivers.hpp"
#include "test_support.hpp"

using namespace opsplit;
using opsplit::testing::grid_argmin;
using opsplit::testing::random_matrix;
using opsplit::testing::random_vector;
using opsplit::testing::vec;

namespace {

ProxFunction first_axis_zero() { return ProxFunction::indicator(Subspace::coordinate_axes(2, {1})); }
ProxFunction second_axis_zero() { return ProxFunction::indicator(Subspace::coordinate_axes(2, {0})); }

} // namespace

TEST(RelaxedPrs, SquareExampleAlternates) {
    const auto trace =
        run_relaxed_prs(first_axis_zero(), second_axis_zero(), 1.0, RelaxationSchedule::constant(1.0), vec({1, 1}), 6);
    for (std::size_t k = 0; k < trace.size(); ++k) {
        const double s = k % 2 == 0 ? 1.0 : -1.0;
        EXPECT_EQ(trace.z[k], vec({s, s}));
    }
}

TEST(RelaxedPrs, AbsExampleOscillates) {
    const auto trace = run_relaxed_prs(ProxFunction::l1(1.0), ProxFunction::zero(), 1.0,
                                       RelaxationSchedule::constant(1.0), vec({1.9}), 12);
    for (std::size_t k = 1; k < trace.size(); ++k) EXPECT_NEAR(trace.z[k][0], (k % 2 ? -0.1 : 0.1), 1e-14);
}

TEST(RelaxedPrs, StartingAtFixedPointIsConstant) {
    const auto trace = run_drs(ProxFunction::l1(1.0), ProxFunction::zero(), 1.0, vec({0.0}), 5);
    for (const auto& z : trace.z) EXPECT_EQ(z[0], 0.0);
}

TEST(RelaxedPrs, StepAndSubgradientIdentities) {
    std::mt19937_64 rng(4);
    const Matrix m = random_matrix(rng, 6, 6);
    const auto f = ProxFunction::quadratic(m.transpose() * m, random_vector(rng, 6));
    const auto g = ProxFunction::l1(0.4);
    const auto trace = run_relaxed_prs(f, g, 0.7, RelaxationSchedule::constant(0.8), random_vector(rng, 6), 50);
    for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
        const auto& t = trace.triangles[k];
        const Vector expected = trace.z[k] + 2.0 * 0.8 * (t.x_f - t.x_g);
        EXPECT_LE((trace.z[k + 1] - expected).norm(), 1e-14);
    }
    const auto drs = run_drs(f, g, 0.7, random_vector(rng, 6), 50);
    for (std::size_t k = 0; k + 1 < drs.size(); ++k) {
        const auto& t = drs.triangles[k];
        const Vector expected = drs.z[k] - 0.7 * (t.subgrad_f + t.subgrad_g);
        EXPECT_LE((drs.z[k + 1] - expected).norm(), 1e-13);
    }
}

TEST(RelaxedPrs, ErgodicAccumulatorMatchesRecomputation) {
    std::mt19937_64 rng(8);
    const auto f = ProxFunction::l1(0.5);
    const auto g = ProxFunction::squared_distance_to_point(random_vector(rng, 4));
    const auto schedule = RelaxationSchedule::explicit_list({0.3, 0.9, 0.5, 0.7, 0.2, 1.0, 0.6, 0.4, 0.8, 0.5, 0.5});
    const auto trace = run_relaxed_prs(f, g, 1.3, schedule, random_vector(rng, 4), 10);
    const auto [avg_g, avg_f] = ergodic_average(trace);
    for (std::size_t k : {2u, 5u, 9u}) {
        Vector sg = Vector::Zero(4), sf = Vector::Zero(4);
        double w = 0.0;
        for (std::size_t i = 0; i <= k; ++i) {
            sg += trace.lambda[i] * trace.triangles[i].x_g;
            sf += trace.lambda[i] * trace.triangles[i].x_f;
            w += trace.lambda[i];
        }
        EXPECT_LE((trace.ergodic_g[k] - sg / w).norm(), 1e-10);
        EXPECT_LE((trace.ergodic_f[k] - sf / w).norm(), 1e-10);
        EXPECT_LE((avg_g[k] - sg / w).norm(), 1e-10);
    }
}

TEST(ErgodicAverage, ClosedFormValues) {
    const auto abs_run = run_relaxed_prs(ProxFunction::l1(1.0), ProxFunction::zero(), 1.0,
                                         RelaxationSchedule::constant(1.0), vec({1.9}), 12);
    EXPECT_NEAR(ergodic_average(abs_run).second[9][0], 0.09, 1e-14);
    const auto square = run_relaxed_prs(first_axis_zero(), second_axis_zero(), 1.0, RelaxationSchedule::constant(1.0),
                                        vec({1, 1}), 4);
    const Vector xg2 = ergodic_average(square).first[2];
    EXPECT_NEAR(xg2[0], 1.0 / 3.0, 1e-15);
    EXPECT_EQ(xg2[1], 0.0);
}

TEST(Fbs, Examples) {
    const auto half_sq = ProxFunction::squared_distance_to_point(vec({0.0}));
    const auto t1 = run_fbs(ProxFunction::zero(), half_sq, FBSConfig(1.0, 1.0), vec({2.0}), 3);
    EXPECT_EQ(t1.z[1][0], 0.0);
    EXPECT_EQ(t1.z[3][0], 0.0);

    const auto g = ProxFunction::squared_distance_to_point(vec({3.0}));
    const auto t2 = run_fbs(ProxFunction::l1(1.0), g, FBSConfig(1.0, *g.lipschitz_grad()), vec({0.0}), 5);
    EXPECT_NEAR(t2.z[1][0], 2.0, 1e-15);
    const double grid = grid_argmin([](double x) { return std::abs(x) + 0.5 * (x - 3) * (x - 3); }, -5, 5);
    EXPECT_NEAR(t2.final_z[0], grid, 1e-4);
    EXPECT_NEAR(t2.z[2][0], 2.0, 1e-15);
}

TEST(Fbs, RejectsLargeStep) {
    try {
        FBSConfig(2.0, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidConfig);
    }
    EXPECT_NEAR(FBSConfig(1.5, 1.0).alpha(), 0.8, 1e-15);
}

TEST(Fbs, ObjectiveMonotoneAndBounded) {
    std::mt19937_64 rng(12);
    const Matrix m = random_matrix(rng, 8, 5);
    const Vector b = random_vector(rng, 8);
    const auto g = ProxFunction::quadratic(m.transpose() * m, -m.transpose() * b, 0.5 * b.squaredNorm());
    const auto f = ProxFunction::l1(0.3);
    const double beta = *g.lipschitz_grad();
    const auto reference = run_fbs(f, g, FBSConfig(beta, beta), Vector::Zero(5), 20000);
    const Vector xstar = reference.final_z;
    const double hstar = f.value(xstar) + g.value(xstar);
    for (double gamma : {beta, 1.5 * beta}) {
        const Vector z0 = random_vector(rng, 5, 2.0);
        const auto trace = run_fbs(f, g, FBSConfig(gamma, beta), z0, 500);
        const double d2 = (z0 - xstar).squaredNorm();
        for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
            EXPECT_LE(trace.objective[k + 1], trace.objective[k] + 1e-10);
            const auto bounds = fbs_bounds(d2, gamma, beta, k);
            EXPECT_LE(trace.objective[k + 1] - hstar, bounds.objective + 1e-9);
            EXPECT_LE(trace.fpr[k + 1], bounds.fpr + 1e-9);
        }
    }
}

TEST(Ppa, Examples) {
    const auto constant = run_ppa(ProxFunction::zero(), 1.0, vec({1, 2}), 3);
    EXPECT_EQ(constant.final_z, vec({1, 2}));

    const auto diag = ProxFunction::diagonal_quadratic(vec({1.0, 0.5, 1.0 / 3.0}));
    const auto trace = run_ppa(diag, 1.0, Vector::Ones(3), 6);
    for (std::size_t k = 0; k < trace.size(); ++k)
        for (int j = 1; j <= 3; ++j)
            EXPECT_NEAR(trace.z[k][j - 1], std::pow(double(j) / (j + 1), double(k)), 1e-15);

    const auto l1 = run_ppa(ProxFunction::l1(1.0), 1.0, vec({2.5}), 4);
    EXPECT_EQ(l1.z[1][0], 1.5);
    EXPECT_EQ(l1.z[2][0], 0.5);
    EXPECT_EQ(l1.z[3][0], 0.0);
    EXPECT_EQ(l1.z[4][0], 0.0);
}

TEST(Certificate, ClosedFormProblems) {
    const auto square = fixed_point_reference(first_axis_zero(), second_axis_zero(), 1.0, vec({0.3, -0.2}));
    EXPECT_LE(square.zstar.norm(), 1e-12);
    EXPECT_LE(square.xstar.norm(), 1e-12);

    const auto abs = make_certificate(ProxFunction::l1(1.0), ProxFunction::zero(), 1.0, vec({0.0}), vec({1.9}));
    EXPECT_EQ(abs.xstar[0], 0.0);
    EXPECT_NEAR(abs.dist0, 1.9, 1e-15);

    const auto plane = ProxFunction::indicator(Subspace::coordinate_axes(3, {0, 1}));
    const auto same = fixed_point_reference(plane, plane, 1.0, vec({1, 2, 3}));
    EXPECT_EQ(same.residual, 0.0);
    EXPECT_EQ(same.zstar, vec({1, 2, 3}));
    EXPECT_EQ(same.xstar, vec({1, 2, 0}));

    EXPECT_THROW(fixed_point_reference(plane, plane, 1.0, vec({1, 2, 3}), 10), Error);
    EXPECT_THROW(make_certificate(ProxFunction::l1(1.0), ProxFunction::zero(), 1.0, vec({1.0}), vec({1.9})), Error);
}

TEST(Certificate, FixedPointHasMatchingPrimalPoints) {
    std::mt19937_64 rng(31);
    const Matrix m = random_matrix(rng, 6, 6);
    const auto f = ProxFunction::quadratic(m.transpose() * m + Matrix::Identity(6, 6), random_vector(rng, 6));
    const auto g = ProxFunction::l1(0.5);
    const auto cert = fixed_point_reference(f, g, 1.0, Vector::Zero(6));
    const auto t = apply_prs_operator(f, g, 1.0, cert.zstar);
    EXPECT_LE((t.x_g - t.x_f).norm(), 1e-8);
    EXPECT_LE((t.subgrad_f + t.subgrad_g).norm(), 1e-8);
}

TEST(ScalarDrs, FprBoundOnAbsolutePair) {
    const auto f = ProxFunction::l1(1.0);
    const auto g = ProxFunction::l1(1.0, vec({1.0}));
    const Vector z0 = vec({7.5});
    const auto trace = run_drs(f, g, 1.0, z0, 200);
    const auto cert = make_certificate(f, g, 1.0, trace.final_z, z0);
    for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
        // Averaged-operator residual is a quarter of the PRS residual.
        EXPECT_LE(0.25 * trace.fpr[k + 1], drs_scalar_fpr_bound(cert.dist0, k) + 1e-9);
    }
}
