#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "opsplit/counterexamples/lower_bounds.hpp"
#include "opsplit/counterexamples/oracles.hpp"
#include "opsplit/km/engine.hpp"
#include "opsplit/rates/fit.hpp"
#include "opsplit/splitting/drivers.hpp"
#include "test_support.hpp"

using namespace opsplit;
using opsplit::testing::random_vector;
using opsplit::testing::vec;

namespace {

std::vector<Vector> random_points(std::mt19937_64& rng, Eigen::Index n, int count) {
    std::vector<Vector> out;
    for (int i = 0; i < count; ++i) out.push_back(random_vector(rng, n));
    return out;
}

double slow_target(double t) { return std::pow(t + 2.0, -0.05); }

} // namespace

TEST(RotationSpace, RightAngleBlockIsZeroMap) {
    const auto spec = RotationSpaceSpec::from_angles({std::numbers::pi / 2.0});
    const RotationOperator T(spec);
    EXPECT_LE(T(vec({0.7, -1.3})).norm(), 1e-15);
    EXPECT_LE(km_step(T, 1.0, vec({0.7, -1.3})).norm(), 1e-15);
}

TEST(RotationSpace, QuarterTurnBlock) {
    const RotationOperator T(RotationSpaceSpec::from_angles({std::numbers::pi / 4.0}));
    // (sqrt2/2) R_{pi/4}
    EXPECT_NEAR(T(vec({1.0, 0.0}))[0], 0.5, 1e-15);
    EXPECT_NEAR(T(vec({1.0, 0.0}))[1], 0.5, 1e-15);
    EXPECT_NEAR(T(vec({0.0, 1.0}))[0], -0.5, 1e-15);
    EXPECT_NEAR(T(vec({0.0, 1.0}))[1], 0.5, 1e-15);
}

TEST(RotationSpace, HarmonicCosines) {
    const auto s = optimal_fpr_setup(0.75, 1000, 5);
    EXPECT_NEAR(s.spec.cosine(3), std::sqrt(3.0) / 2.0, 1e-15);
    EXPECT_NEAR(s.spec.cosine(0), 0.0, 1e-15);
    EXPECT_NEAR(s.spec.angle(0), std::numbers::pi / 2.0, 1e-15);
}

TEST(RotationSpace, RejectsBadCosines) {
    EXPECT_THROW(RotationSpaceSpec::from_cosines({0.5, 1.0}), Error);
    EXPECT_THROW(RotationSpaceSpec::from_cosines({-0.1}), Error);
    EXPECT_THROW(RotationSpaceSpec::from_angles({0.0}), Error);
    EXPECT_THROW(RotationSpaceSpec::from_cosines({}), Error);
}

TEST(RotationSpace, OperatorMatchesAveragedPrs) {
    std::mt19937_64 rng(1);
    const auto harmonic = harmonic_rotation_spec(500);
    EXPECT_LE(rotation_operator_defect(harmonic, random_points(rng, harmonic.ambient_dim(), 20)), 1e-12);
    std::uniform_real_distribution<double> angle(1e-3, std::numbers::pi / 2.0);
    std::vector<double> angles(40);
    for (auto& a : angles) a = angle(rng);
    const auto spec = RotationSpaceSpec::from_angles(angles);
    EXPECT_LE(rotation_operator_defect(spec, random_points(rng, spec.ambient_dim(), 20), 2.5), 1e-12);
}

TEST(RotationSpace, EngineNormsMatchBlockFormula) {
    std::mt19937_64 rng(2);
    const auto spec = harmonic_rotation_spec(30);
    const RotationOperator T(spec);
    const Vector z0 = random_vector(rng, spec.ambient_dim());
    const auto km = run_km(T, RelaxationSchedule::constant(1.0), z0, 200);
    const auto drs = run_drs(ProxFunction::indicator(spec.v_space()), ProxFunction::indicator(spec.u_space()), 1.0, z0, 200);
    for (std::size_t k = 0; k <= 200; ++k) {
        EXPECT_NEAR(km.z[k].squaredNorm(), T.power_norm_sq(z0, k), 1e-10);
        EXPECT_LE((drs.z[k] - T.power(z0, k)).norm(), 1e-10);
    }
}

TEST(OptimalFpr, StartingPointNorms) {
    const auto s = optimal_fpr_setup(0.75, 2000, 10);
    const RotationOperator T(s.spec);
    const Vector w0 = s.z0 - T(s.z0);
    const double scale = std::sqrt(2.0 * 0.75 * std::numbers::e);
    for (std::size_t j : {0u, 1u, 7u, 1999u}) {
        const auto at = 2 * Eigen::Index(j);
        EXPECT_NEAR(s.z0.segment(at, 2).norm(), scale / std::pow(double(j + 1), 0.75), 1e-13);
        EXPECT_NEAR(w0.segment(at, 2).norm(), scale * std::pow(double(j + 1), -(1.0 + 1.5) / 2.0), 1e-13);
    }
}

TEST(OptimalFpr, LowerBoundOnHorizon) {
    const auto s = optimal_fpr_setup(0.75, 100000, 300);
    KmOptions options;
    options.keep_iterates = false;
    const auto trace = run_km(RotationOperator(s.spec), RelaxationSchedule::constant(1.0), s.z0, 300, options);
    for (std::size_t k = 1; k <= 300; ++k) {
        EXPECT_GE(trace.fpr[k] * std::pow(double(k + 1), 1.5), 0.99) << "k=" << k;
        EXPECT_GE(trace.fpr[k], s.fpr_lower_bound(k));
    }
    for (std::size_t k : {1u, 17u, 300u}) EXPECT_NEAR(trace.fpr[k], s.predicted_fpr(k), 1e-10 * trace.fpr[k]);
}

TEST(OptimalFpr, RejectsShortTruncation) {
    EXPECT_THROW(optimal_fpr_setup(0.75, 1000, 300), Error);
    try {
        optimal_fpr_setup(0.75, 1000, 300);
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidConfig);
    }
    EXPECT_THROW(optimal_fpr_setup(0.5, 100000, 300), Error);
}

TEST(SlowSequence, BisectionMatchesClosedInverse) {
    // h(t) = (t+2)^-0.05 inverts to h2(x) = (1+x)^20 - 2
    const SlowSequenceSpec bisected(slow_target, 6);
    const SlowSequenceSpec closed(slow_target, 6, [](double x) { return std::pow(1.0 + x, 20.0) - 2.0; });
    for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(bisected.gaps()[j] / closed.gaps()[j], 1.0, 1e-10);
}

TEST(SlowSequence, MonotoneAndWitnessInequality) {
    const SlowSequenceSpec seq([](double t) { return 1.0 / (t + 2.0); }, 210);
    for (std::size_t j = 0; j < seq.size(); ++j) {
        EXPECT_GT(seq.gaps()[j], 0.0);
        EXPECT_LE(seq.gaps()[j], 1.0);
        if (j > 0) {
            EXPECT_LT(seq.gaps()[j], seq.gaps()[j - 1]);
        }
    }
    for (std::size_t k = 0; k <= 200; ++k)
        EXPECT_GT(seq.witness_value(k), seq.target(double(k + 1)) / std::numbers::e) << "k=" << k;
}

TEST(SlowSequence, RejectsTargetsOutsideRange) {
    EXPECT_THROW(SlowSequenceSpec([](double t) { return 0.4 / (t + 1.0); }, 3), Error);
    EXPECT_THROW(arbitrarily_slow_setup([](double) { return 0.7; }, 10), Error);
    EXPECT_THROW(arbitrarily_slow_setup(nullptr, 10), Error);
}

TEST(ArbitrarilySlow, DistanceLowerBoundOnHorizon) {
    for (auto h : {SlowSequenceSpec::Target(slow_target), SlowSequenceSpec::Target([](double t) { return 1.0 / (t + 2.0); })}) {
        const auto s = arbitrarily_slow_setup(h, 200);
        for (std::size_t j = 0; j < s.spec.blocks(); ++j) {
            EXPECT_NEAR(s.z0.segment(2 * Eigen::Index(j), 2).norm(), 1.0 / double(j + 1), 1e-15);
            if (j > 0) {
                EXPECT_LT(s.spec.gap(j), s.spec.gap(j - 1));
            }
        }
        const RotationOperator T(s.spec);
        KmOptions options;
        options.keep_iterates = false;
        options.reference = Vector::Zero(s.spec.ambient_dim());
        const auto trace = run_km(T, RelaxationSchedule::constant(1.0), s.z0, 200, options);
        for (std::size_t k = 0; k <= 200; ++k)
            EXPECT_GE(std::sqrt(trace.dist_sq[k]), s.distance_lower_bound(k)) << "k=" << k;
        // Still converges: the block formula decays far beyond the horizon.
        EXPECT_LT(T.power_norm_sq(s.z0, 1000000000), 1e-12);
    }
}

TEST(ArbitrarilySlow, RejectsShortTruncation) {
    EXPECT_THROW(arbitrarily_slow_setup([](double t) { return 1.0 / (t + 2.0); }, 200, 10), Error);
}

TEST(SquareExample, OracleValues) {
    const auto even = feasibility_square_oracle(4);
    EXPECT_EQ(even.x_g, vec({1.0, 0.0}));
    EXPECT_EQ(even.x_f, vec({0.0, -1.0}));
    EXPECT_EQ(even.z, vec({1.0, 1.0}));
    const auto odd = feasibility_square_oracle(3);
    EXPECT_EQ(odd.ergodic_g, vec({0.0, 0.0}));
    EXPECT_EQ(odd.ergodic_f, vec({0.0, 0.0}));
    EXPECT_DOUBLE_EQ(feasibility_square_oracle(2).ergodic_g[0], 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(feasibility_square_oracle(8).ergodic_gap, std::sqrt(2.0) / 9.0);
}

TEST(SquareExample, EngineMatchesOracle) {
    const auto ex = square_feasibility_example();
    const auto trace = run_prs(ex.f, ex.g, ex.gamma, ex.z0, 1000);
    for (std::size_t k = 0; k <= 1000; ++k) {
        const auto o = feasibility_square_oracle(k);
        ASSERT_LE((trace.z[k] - o.z).norm(), 1e-12);
        ASSERT_LE((trace.triangles[k].x_g - o.x_g).norm(), 1e-12);
        ASSERT_LE((trace.triangles[k].x_f - o.x_f).norm(), 1e-12);
        ASSERT_LE((trace.ergodic_g[k] - o.ergodic_g).norm(), 1e-12);
        ASSERT_LE((trace.ergodic_f[k] - o.ergodic_f).norm(), 1e-12);
    }
}

TEST(AbsExample, OracleValues) {
    const auto a = abs_example_oracle(0.1, 5);
    EXPECT_NEAR(a.z, -0.1, 1e-15);
    EXPECT_EQ(a.x_f, 0.0);
    EXPECT_NEAR(abs_example_oracle(0.1, 9).f_side_error, 0.09, 1e-15);
    EXPECT_NEAR(abs_example_oracle(0.1, 8).g_side_error, 1.9 / 9.0, 1e-15);
    EXPECT_NEAR(abs_example_oracle(0.1, 8).ergodic_gap, 1.0 / 9.0, 1e-15);
    EXPECT_NEAR(abs_example_oracle(0.1, 7).ergodic_gap, 0.9 / 8.0, 1e-15);
    EXPECT_THROW(abs_example_oracle(1.0, 2), Error);
    EXPECT_THROW(abs_example(0.0), Error);
}

TEST(AbsExample, EngineMatchesOracle) {
    for (double eps : {0.1, 0.5, 0.01}) {
        const auto ex = abs_example(eps);
        SplittingOptions options;
        options.evaluate_ergodic_objective = true;
        const auto trace = run_prs(ex.f, ex.g, ex.gamma, ex.z0, 1000, options);
        for (std::size_t k = 0; k <= 1000; ++k) {
            const auto o = abs_example_oracle(eps, k);
            ASSERT_NEAR(trace.z[k][0], o.z, 1e-12) << "k=" << k;
            ASSERT_NEAR(trace.triangles[k].x_g[0], o.x_g, 1e-12);
            ASSERT_NEAR(trace.triangles[k].x_f[0], o.x_f, 1e-12);
            ASSERT_NEAR(trace.ergodic_g[k][0], o.ergodic_g, 1e-12);
            ASSERT_NEAR(trace.ergodic_f[k][0], o.ergodic_f, 1e-12);
            ASSERT_NEAR(trace.ergodic_gap[k], o.ergodic_gap, 1e-12);
        }
    }
}

TEST(DistanceLowerBound, MatchesIndicatorPairWhenGammaIsLarge) {
    const auto s = distance_lower_bound_setup(0.75, 2000, 0.0 + distance_lower_bound_problem(0.75, 2000, 1.0).z0.norm());
    EXPECT_LE(lockstep_deviation(s.f_indicator(), s.g(), s.f_distance(), s.g(), s.gamma, s.z0, 500), 1e-10);
    EXPECT_EQ(s.f_distance().value(Vector::Zero(s.z0.size())), 0.0);
}

TEST(DistanceLowerBound, ClosedFormMatchesEngine) {
    const auto s = distance_lower_bound_setup(0.75, 400, 3.0);
    std::vector<double> observed;
    SplittingOptions options;
    options.keep_iterates = false;
    options.observer = [&](std::size_t, const TriangleIterate& t) { observed.push_back(s.v.distance(t.x_g)); };
    run_drs(s.f_distance(), s.g(), s.gamma, s.z0, 100, options);
    for (std::size_t k = 0; k <= 100; ++k) EXPECT_NEAR(observed[k], s.distance_closed_form(k), 1e-12);
}

TEST(DistanceLowerBound, PreconditionAndSharpnessReport) {
    const double norm = distance_lower_bound_problem(0.75, 500, 1.0).z0.norm();
    EXPECT_THROW(distance_lower_bound_setup(0.75, 500, 0.99 * norm), Error);
    const auto s = distance_lower_bound_problem(0.75, 500, 0.5 * norm);
    const double deviation = lockstep_deviation(s.f_indicator(), s.g(), s.f_distance(), s.g(), s.gamma, s.z0, 500);
    EXPECT_TRUE(std::isfinite(deviation));
    RecordProperty("half_gamma_deviation", std::to_string(deviation));
}

TEST(PpaDiagonal, FirstStep) {
    const auto s = ppa_diagonal_setup(1.0, 1.0, 1000, 5);
    const Vector z1 = s.f.prox(s.gamma, s.z0);
    for (Eigen::Index j = 1; j <= 1000; j += 111)
        EXPECT_NEAR(z1[j - 1], double(j) * s.z0[j - 1] / (double(j) + 1.0), 1e-16);
    EXPECT_THROW(ppa_diagonal_setup(1.0, 1.0, 1000, 300), Error);
}

TEST(PpaDiagonal, LowerBoundsOnHorizon) {
    const auto s = ppa_diagonal_setup(1.0, 1.0, 100000, 300);
    TraceOptions options;
    options.keep_iterates = false;
    const auto trace = run_ppa(s.f, s.gamma, s.z0, 301, options);
    for (std::size_t k = 0; k <= 300; ++k) {
        EXPECT_GE(trace.fpr[k], s.fpr_lower_bound(k)) << "k=" << k;
        EXPECT_GE(trace.objective[k + 1], s.objective_lower_bound(k)) << "k=" << k;
    }
}
