#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "beamcontact/errors.hpp"
#include "beamcontact/model.hpp"

namespace bc = beamcontact;

namespace {

bc::PiecewiseLinearContact inclined_plane(double K) {
    return {K, [](double x) { return x / 2; }, [](double) { return 0.5; }};
}

bc::BVPSpec vocalfold_spec() { return {0.0, 1.0, 0.0, 0.0, -20.0, -20.0}; }

}  // namespace

TEST(Model, SpecValidation) {
    EXPECT_NO_THROW(vocalfold_spec().validate());
    EXPECT_THROW((bc::BVPSpec{1.0, 1.0}).validate(), bc::UsageError);
    EXPECT_THROW((bc::BVPSpec{0.0, std::numeric_limits<double>::infinity()}).validate(),
                 bc::UsageError);
    bc::BVPSpec s;
    s.beta1 = std::nan("");
    EXPECT_THROW(s.validate(), bc::UsageError);
}

TEST(Model, ContactLawBelowSurfaceIsZero) {
    const bc::RightHandSide rhs = inclined_plane(1e4);
    EXPECT_EQ(bc::eval_rhs(rhs, 0.5, 0.1), 0.0);
}

TEST(Model, ContactLawPenetration) {
    const bc::RightHandSide rhs = inclined_plane(1e4);
    EXPECT_NEAR(bc::eval_rhs(rhs, 0.5, 0.35), -1000.0, 1e-9);
}

TEST(Model, ContactLawAtSurfaceIsExactlyZero) {
    for (double K : {0.0, 1.0, 1e4, 1e8}) {
        const bc::RightHandSide rhs = inclined_plane(K);
        EXPECT_EQ(bc::eval_rhs(rhs, 0.3, 0.15), 0.0);
    }
}

TEST(Model, NonFiniteArgumentsAreDomainErrors) {
    const bc::RightHandSide rhs = inclined_plane(1.0);
    EXPECT_THROW(bc::eval_rhs(rhs, std::nan(""), 0.0), bc::DomainError);
    EXPECT_THROW(bc::eval_rhs(rhs, 0.0, std::numeric_limits<double>::infinity()), bc::DomainError);
}

TEST(Model, ContactLawPassesValidationForEverySeed) {
    const bc::RightHandSide rhs = inclined_plane(1e4);
    const bc::RightHandSide wrapped = bc::as_general(inclined_plane(1e4));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        EXPECT_TRUE(bc::validate_rhs(rhs, vocalfold_spec(), 500, seed).ok()) << seed;
        EXPECT_TRUE(bc::validate_rhs(wrapped, vocalfold_spec(), 500, seed).ok()) << seed;
    }
}

TEST(Model, IncreasingFunctionIsFlagged) {
    const bc::RightHandSide rhs = bc::GeneralMonotone{[](double, double y) { return y; }, 0.0};
    const auto report = bc::validate_rhs(rhs, vocalfold_spec(), 100, 3);
    EXPECT_GE(report.monotonicity_violations, 1u);
    EXPECT_FALSE(report.examples.empty());
    EXPECT_DOUBLE_EQ(report.box, 10.0 * (1.0 + 20.0));
}

TEST(Model, NegativeCubeIsMonotoneButUnbounded) {
    const bc::RightHandSide rhs =
        bc::GeneralMonotone{[](double, double y) { return -y * y * y; }, 0.0};
    const auto report = bc::validate_rhs(rhs, vocalfold_spec(), 1000, 11);
    EXPECT_EQ(report.monotonicity_violations, 0u);
    EXPECT_GT(report.bound_violations, 0u);
}

TEST(Model, ValidationIsDeterministic) {
    const bc::RightHandSide rhs = bc::GeneralMonotone{[](double x, double y) { return x + y; }, 0.0};
    const auto r1 = bc::validate_rhs(rhs, vocalfold_spec(), 300, 42);
    const auto r2 = bc::validate_rhs(rhs, vocalfold_spec(), 300, 42);
    EXPECT_EQ(r1.monotonicity_violations, r2.monotonicity_violations);
    EXPECT_EQ(r1.bound_violations, r2.bound_violations);
    ASSERT_EQ(r1.examples.size(), r2.examples.size());
    for (std::size_t i = 0; i < r1.examples.size(); ++i) {
        EXPECT_EQ(r1.examples[i].x, r2.examples[i].x);
    }
    EXPECT_THROW(bc::validate_rhs(rhs, vocalfold_spec(), 0, 1), bc::UsageError);
}

TEST(Model, WbarVanishesForZeroData) {
    const bc::BVPSpec spec{0.0, 1.0};
    for (double x : {0.0, 0.1, 0.5, 0.77, 1.0}) {
        EXPECT_EQ(bc::wbar(spec, 0.0, x), 0.0);
    }
}

TEST(Model, WbarForEndMoments) {
    // w'''' = 0, w(0) = w(1) = 0, w'' = -20 at both ends: w = 10 x (1 - x).
    const auto spec = vocalfold_spec();
    EXPECT_NEAR(bc::wbar(spec, 0.0, 0.5), 2.5, 1e-14);
    for (double x : {0.0, 0.2, 0.5, 0.9, 1.0}) {
        EXPECT_NEAR(bc::wbar(spec, 0.0, x), 10.0 * x * (1.0 - x), 1e-13);
    }
    EXPECT_NEAR(bc::wbar_derivative(spec, 0.0, 0.0, 2), -20.0, 1e-12);
    EXPECT_NEAR(bc::wbar_derivative(spec, 0.0, 0.3, 3), 0.0, 1e-12);
}

TEST(Model, WbarOutsideIntervalThrows) {
    EXPECT_THROW(bc::wbar(vocalfold_spec(), 0.0, 1.5), bc::DomainError);
}

TEST(ModelProperty, WbarMatchesBoundaryConditions) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> data(-10.0, 10.0);
    std::uniform_real_distribution<double> len(0.5, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        bc::BVPSpec s;
        s.a = data(rng);
        s.b = s.a + len(rng);
        s.alpha1 = data(rng);
        s.alpha2 = data(rng);
        s.beta1 = data(rng);
        s.beta2 = data(rng);
        const double M = data(rng);

        EXPECT_NEAR(bc::wbar(s, M, s.a), s.alpha1, 1e-12 * (1 + std::abs(s.alpha1)));
        EXPECT_NEAR(bc::wbar(s, M, s.b), s.alpha2, 1e-12 * (1 + std::abs(s.alpha2)));
        EXPECT_NEAR(bc::wbar_derivative(s, M, s.a, 2), s.beta1, 1e-10 * (1 + std::abs(s.beta1)));
        EXPECT_NEAR(bc::wbar_derivative(s, M, s.b, 2), s.beta2, 1e-10 * (1 + std::abs(s.beta2)));
        const double xm = 0.5 * (s.a + s.b);
        EXPECT_NEAR(bc::wbar_derivative(s, M, xm, 4), M, 1e-10 * (1 + std::abs(M)));
    }
}
