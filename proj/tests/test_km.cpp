#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "opsplit/core/prs.hpp"
#include "opsplit/km/checks.hpp"
#include "opsplit/km/engine.hpp"
#include "opsplit/splitting/drivers.hpp"
#include "test_support.hpp"

using namespace opsplit;
using opsplit::testing::random_matrix;
using opsplit::testing::random_vector;
using opsplit::testing::vec;

namespace {

auto negate = [](const Vector& z) { return Vector(-z); };
auto identity = [](const Vector& z) { return z; };

// Composition of projections onto two random affine sets through a common point.
struct ProjectionPair {
    ProxFunction a, b;
    Vector common;
    Vector operator()(const Vector& z) const { return a.prox(1.0, b.prox(1.0, z)); }
};

ProjectionPair random_projection_pair(std::uint64_t seed, Eigen::Index n = 20) {
    std::mt19937_64 rng(seed);
    const Vector p = random_vector(rng, n);
    const auto sa = Subspace::from_spanning(random_matrix(rng, n, 2 * n / 5));
    const auto sb = Subspace::from_spanning(random_matrix(rng, n, n / 2));
    return {ProxFunction::indicator_affine(sa, p), ProxFunction::indicator_affine(sb, p), p};
}

} // namespace

TEST(KmStep, Examples) {
    EXPECT_EQ(km_step(negate, 0.5, vec({4, 2})), vec({0, 0}));
    EXPECT_EQ(km_step(identity, 0.3, vec({4, 2})), vec({4, 2}));
    auto zero_map = [](const Vector& z) { return Vector(Vector::Zero(z.size())); };
    EXPECT_EQ(km_step(zero_map, 0.25, vec({4, 2})), vec({3, 1.5}));
    const Vector e = vec({1, 1});
    EXPECT_EQ(km_step(identity, 0.5, vec({0, 0}), &e), vec({0.5, 0.5}));
    EXPECT_THROW(km_step(identity, 1.5, vec({0})), Error);
}

TEST(RunKm, NegationReachesFixedPointInOneStep) {
    const auto trace = run_km(negate, RelaxationSchedule::constant(0.5), vec({1, 1}), 5);
    ASSERT_EQ(trace.size(), 6u);
    EXPECT_EQ(trace.z[1], vec({0, 0}));
    EXPECT_DOUBLE_EQ(trace.fpr[0], 8.0);
    for (std::size_t k = 1; k < trace.size(); ++k) EXPECT_EQ(trace.fpr[k], 0.0);
}

TEST(RunKm, AbortsOnNonFiniteIterate) {
    auto blowup = [](const Vector& z) { return Vector(z * 1e200); };
    const auto trace = run_km(blowup, RelaxationSchedule::constant(1.0), vec({1e200}), 10);
    EXPECT_TRUE(trace.aborted);
    EXPECT_FALSE(trace.diagnostic.empty());
}

TEST(Schedule, AccessorsAndValidation) {
    const auto c = RelaxationSchedule::constant(0.5);
    EXPECT_EQ(c.cumulative(7), 4.0);
    EXPECT_EQ(c.tau(3), 0.25);
    const auto p = RelaxationSchedule::polynomial(-0.5);
    EXPECT_NEAR(p.lambda(3), 0.5, 1e-15);
    const auto series = p.cumulative_series(10);
    for (std::size_t k = 1; k <= 10; ++k) EXPECT_EQ(series[k], series[k - 1] + p.lambda(k));
    const auto e = RelaxationSchedule::explicit_list({0.2, 0.9, 0.5});
    EXPECT_NEAR(e.tau_lower(2), 0.09, 1e-15);
    EXPECT_THROW(e.lambda(3), Error);
    EXPECT_THROW(RelaxationSchedule::constant(0.0), Error);
    EXPECT_THROW(RelaxationSchedule::constant(1.2), Error);
    EXPECT_THROW(RelaxationSchedule::polynomial(0.5), Error);
}

TEST(FprBound, Examples) {
    const auto half = RelaxationSchedule::constant(0.5);
    EXPECT_DOUBLE_EQ(fpr_bound(half, 1.0, 3), 1.0);
    EXPECT_DOUBLE_EQ(fpr_bound(half, 1.0, 0), 4.0);
    EXPECT_EQ(fpr_bound(half, 0.0, 50), 0.0);
    try {
        fpr_bound(RelaxationSchedule::constant(1.0), 1.0, 2);
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.kind(), ErrorKind::UnsupportedSchedule);
    }
}

TEST(Fejer, ConstantTraceAndSquareExample) {
    const auto f = ProxFunction::indicator(Subspace::coordinate_axes(2, {1}));
    const auto g = ProxFunction::indicator(Subspace::coordinate_axes(2, {0}));
    const auto trace = run_relaxed_prs(f, g, 1.0, RelaxationSchedule::constant(1.0), vec({1, 1}), 20);
    const auto report = check_fejer(trace, vec({0, 0}));
    EXPECT_TRUE(report.pass());
    for (const auto& entry : report.entries()) EXPECT_DOUBLE_EQ(entry.measured, 2.0);

    const auto fixed = run_km(identity, RelaxationSchedule::constant(0.5), vec({3, 3}), 4);
    const auto zero_margin = check_fejer(fixed, vec({3, 3}));
    EXPECT_TRUE(zero_margin.pass());
    EXPECT_EQ(zero_margin.worst_margin(), 0.0);
}

TEST(Properties, RandomAveragedRunsAreFejerAndSummable) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto pair = random_projection_pair(seed, 8);
        std::mt19937_64 rng(seed + 1000);
        const Vector z0 = random_vector(rng, 8, 3.0);
        const auto schedule = RelaxationSchedule::constant(0.3 + 0.4 * double(seed % 3) / 2.0);
        const auto trace = run_km(pair, schedule, z0, 200);
        const double d0 = (z0 - pair.common).squaredNorm();
        EXPECT_TRUE(check_fejer(trace, pair.common).pass()) << seed;
        EXPECT_TRUE(check_fpr_monotone(trace).pass()) << seed;
        EXPECT_TRUE(check_fpr_summability(trace, schedule, d0).pass()) << seed;
        EXPECT_TRUE(check_fpr_bound(trace, schedule, d0).pass()) << seed;
    }
}

TEST(Summability, FixedStartHasZeroSum) {
    const auto trace = run_km(identity, RelaxationSchedule::constant(0.5), vec({1, 2}), 10);
    const auto report = check_fpr_summability(trace, RelaxationSchedule::constant(0.5), 0.0);
    EXPECT_TRUE(report.pass());
}

TEST(Inexact, NegationWithDecayingErrorsHasVanishingScaledResidual) {
    KmOptions options;
    options.errors = ErrorSchedule::decaying(1.5, 1.0, 77);
    options.reference = Vector::Zero(2);
    const auto schedule = RelaxationSchedule::constant(0.5);
    const auto trace = run_km(negate, schedule, vec({1, 1}), 2000, options);
    EXPECT_TRUE(options.errors->envelope_admissible(2000));
    EXPECT_TRUE(check_inexact_fpr(trace, schedule, 2.0).pass());
    EXPECT_LT(2001.0 * trace.fpr.back(), 1e-3);
    // Same seed, same errors: the run is reproducible.
    const auto again = run_km(negate, schedule, vec({1, 1}), 2000, options);
    EXPECT_EQ(again.final_z, trace.final_z);
}

TEST(Inexact, ProjectionPairsSatisfyErrorAccounting) {
    const auto schedule = RelaxationSchedule::constant(0.5);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto pair = random_projection_pair(seed);
        std::mt19937_64 rng(seed + 7);
        const Vector z0 = random_vector(rng, 20, 2.0);
        KmOptions options;
        options.keep_iterates = false;
        options.errors = ErrorSchedule::decaying(1.5, 1.0, seed);
        options.reference = pair.common;
        const auto trace = run_km(pair, schedule, z0, 2000, options);
        EXPECT_TRUE(check_inexact_fpr(trace, schedule, (z0 - pair.common).squaredNorm()).pass());
        EXPECT_TRUE(check_little_o_tail(trace).pass());
    }
}
