#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "opsplit/counterexamples/lower_bounds.hpp"
#include "opsplit/counterexamples/oracles.hpp"
#include "opsplit/feasibility/feasibility.hpp"
#include "opsplit/rates/fit.hpp"
#include "opsplit/splitting/certificate.hpp"
#include "test_support.hpp"

using namespace opsplit;
using opsplit::testing::random_matrix;
using opsplit::testing::random_vector;
using opsplit::testing::vec;

namespace {

ConvexSetPair axes_pair() {
    return {ConvexSet::subspace(Subspace::coordinate_axes(2, {1})), ConvexSet::subspace(Subspace::coordinate_axes(2, {0}))};
}

// Sets of every kind sharing the point p.
std::vector<ConvexSet> sets_through(std::mt19937_64& rng, const Vector& p) {
    const auto n = p.size();
    std::uniform_real_distribution<double> width(0.1, 1.0);
    Vector lo(n), hi(n);
    for (Eigen::Index i = 0; i < n; ++i) lo[i] = p[i] - width(rng), hi[i] = p[i] + width(rng);
    const Subspace plane = Subspace::from_spanning(random_matrix(rng, n, n / 2));
    return {ConvexSet::box(lo, hi), ConvexSet::ball(p + random_vector(rng, n, 0.3), 0.3 * std::sqrt(double(n)) + 0.5),
            ConvexSet::affine(plane, p), ConvexSet::subspace(Subspace::from_spanning(p))};
}

} // namespace

TEST(ConvexSet, ProjectionsAreIdempotent) {
    std::mt19937_64 rng(1);
    const Vector p = random_vector(rng, 6);
    for (const auto& set : sets_through(rng, p)) {
        for (int t = 0; t < 20; ++t) {
            const Vector x = random_vector(rng, 6, 3.0);
            const Vector once = set.project(x);
            EXPECT_LE((set.project(once) - once).norm(), 1e-12) << to_string(set.kind());
            EXPECT_TRUE(set.contains(once));
        }
        EXPECT_TRUE(set.contains(p, 1e-10)) << to_string(set.kind());
    }
}

TEST(Feasibility, AxesConvergeToOrigin) {
    const auto ft = run_feasibility(axes_pair(), RelaxationSchedule::constant(0.5), vec({1.0, 1.0}), 20);
    EXPECT_LE(ft.trace.triangles.back().x_g.norm(), 1e-12);
    EXPECT_LE(ft.trace.final_z.norm(), 1e-12);
}

TEST(Feasibility, StartInIntersectionIsFixed) {
    const ConvexSetPair pair{ConvexSet::box(vec({-1.0, -1.0}), vec({1.0, 1.0})), ConvexSet::ball(vec({0.5, 0.0}), 1.0)};
    const Vector z0 = vec({0.3, 0.2});
    const auto ft = run_feasibility(pair, RelaxationSchedule::constant(0.5), z0, 10);
    for (const auto& z : ft.trace.z) EXPECT_EQ(z, z0);
    for (double g : ft.gap_sq) EXPECT_EQ(g, 0.0);
}

TEST(Feasibility, RejectsMismatchedSets) {
    const ConvexSetPair pair{ConvexSet::box(vec({0.0}), vec({1.0})), ConvexSet::ball(vec({0.0, 0.0}), 1.0)};
    EXPECT_THROW(run_feasibility(pair, RelaxationSchedule::constant(0.5), vec({0.0}), 3), Error);
}

TEST(FeasibilityBounds, Examples) {
    const auto half = RelaxationSchedule::constant(0.5);
    EXPECT_DOUBLE_EQ(feasibility_gap_bound(1.0, half, 15, RateMode::Ergodic), 1.0 / 16.0);
    EXPECT_EQ(feasibility_gap_bound(0.0, half, 15, RateMode::Ergodic), 0.0);
    EXPECT_EQ(feasibility_gap_bound(0.0, half, 15, RateMode::Nonergodic), 0.0);
    // dist0^2 / (4 * 16 * 1/4)
    EXPECT_DOUBLE_EQ(feasibility_gap_bound(1.0, half, 15, RateMode::Nonergodic), 1.0 / 16.0);
    EXPECT_THROW(feasibility_gap_bound(1.0, RelaxationSchedule::constant(1.0), 3, RateMode::Nonergodic), Error);
}

TEST(FeasibilityBounds, SquarePairIsWithinFactorTwo) {
    const auto ex = square_feasibility_example();
    const ConvexSetPair pair{ConvexSet::subspace(Subspace::coordinate_axes(2, {1})),
                             ConvexSet::subspace(Subspace::coordinate_axes(2, {0}))};
    const auto prs = RelaxationSchedule::constant(1.0);
    const auto ft = run_feasibility(pair, prs, ex.z0, 200);
    const double dist0 = (ex.z0 - ex.zstar).norm();
    for (std::size_t k = 0; k <= 200; k += 2) {
        EXPECT_NEAR(ft.trace.ergodic_gap[k], dist0 / double(k + 1), 1e-14);
        const double bound = std::sqrt(feasibility_gap_bound(dist0, prs, k, RateMode::Ergodic));
        EXPECT_NEAR(bound / ft.trace.ergodic_gap[k], 2.0, 1e-12);
    }
    const auto report = check_feasibility(ft, prs, dist0);
    EXPECT_TRUE(report.pass());
    EXPECT_TRUE(report.nonergodic.empty());
}

TEST(FeasibilityBounds, RandomPairsSatisfyAllChecks) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lam(0.05, 0.95);
    for (int trial = 0; trial < 40; ++trial) {
        const Vector p = random_vector(rng, 6);
        const auto sets = sets_through(rng, p);
        const ConvexSetPair pair{sets[std::size_t(trial) % 4], sets[std::size_t(trial + 1 + trial / 4) % 4]};
        std::vector<double> lambdas(301);
        for (auto& l : lambdas) l = lam(rng);
        const auto schedule = RelaxationSchedule::explicit_list(lambdas);
        const Vector z0 = p + random_vector(rng, 6, 2.0);
        const auto f = pair.f_set.indicator(), g = pair.g_set.indicator();
        const auto cert = fixed_point_reference(f, g, 1.0, z0);
        const auto ft = run_feasibility(pair, schedule, z0, 300);
        const auto report = check_feasibility(ft, schedule, cert.dist0);
        EXPECT_TRUE(report.pass()) << "trial " << trial << ": " << report.distance_vs_gap.pass()
                                   << report.ergodic_membership.pass() << report.nonergodic.pass()
                                   << report.ergodic.pass();
    }
}

TEST(FeasibilityBounds, RotationPairDecaysUnderBound) {
    const auto s = optimal_fpr_setup(0.75, 10000, 300);
    const ConvexSetPair pair{ConvexSet::subspace(s.spec.v_space()), ConvexSet::subspace(s.spec.u_space())};
    const auto half = RelaxationSchedule::constant(0.5);
    const auto ft = run_feasibility(pair, half, s.z0, 300, false);
    const auto report = check_feasibility(ft, half, s.z0.norm());
    EXPECT_TRUE(report.pass());
    std::vector<double> worst(ft.size());
    for (std::size_t k = 0; k < ft.size(); ++k) worst[k] = ft.max_dist_sq(k);
    const auto fit = fit_decay_exponent(worst, 10, 300);
    RecordProperty("gap_sq_exponent", std::to_string(fit.exponent));
    EXPECT_LE(fit.exponent, -1.0 + 0.05);
    EXPECT_GE(fit.exponent, -1.5 - 0.1);
}
