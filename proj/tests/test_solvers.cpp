#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "beamcontact/dense_eigen.hpp"
#include "beamcontact/errors.hpp"
#include "beamcontact/io.hpp"
#include "beamcontact/solvers.hpp"
#include "oracles.hpp"

namespace bc = beamcontact;

namespace {

const bc::BVPSpec kVocalfold{0.0, 1.0, 0.0, 0.0, -20.0, -20.0};

bc::PiecewiseLinearContact plane(double K) {
    return {K, [](double x) { return x / 2; }, [](double) { return 0.5; }};
}

bc::PiecewiseLinearContact flat(double K, double level) {
    return {K, [level](double) { return level; }, [](double) { return 0.0; }};
}

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
    return d;
}

std::vector<double> linear_solution(const bc::BVPSpec& spec, const bc::RightHandSide& rhs,
                                    std::size_t N) {
    const auto sys = bc::build_system(spec, rhs, N);
    return oracle::dense_solve(oracle::fourth_difference_matrix(N), sys.Bbar);
}

}  // namespace

TEST(ContractionConstant, Values) {
    EXPECT_EQ(bc::contraction_constant(kVocalfold, 0.0), 0.0);
    EXPECT_NEAR(bc::contraction_constant(kVocalfold, 1e4), 10000.0 / 10032.0, 1e-15);
    EXPECT_NEAR(bc::contraction_constant(kVocalfold, 1e4), 0.9968102, 1e-7);
    EXPECT_NEAR(bc::contraction_constant(bc::BVPSpec{0, 2}, 1.0), 1.0 / 3.0, 1e-15);
    EXPECT_THROW(bc::contraction_constant(kVocalfold, -1.0), bc::UsageError);
    for (double K : {1e-6, 1.0, 1e6, 1e12}) {
        const double C = bc::contraction_constant(kVocalfold, K);
        EXPECT_GE(C, 0.0);
        EXPECT_LT(C, 1.0);
    }
}

TEST(AprioriBound, Values) {
    const std::vector<double> W0{0, 0, 0}, W1{3, 4, 0};
    EXPECT_EQ(bc::apriori_bound(0.0, W1, W0, 1), 0.0);
    EXPECT_EQ(bc::apriori_bound(0.0, W1, W0, 7), 0.0);
    EXPECT_DOUBLE_EQ(bc::apriori_bound(0.5, W1, W0, 0), 10.0);
    EXPECT_DOUBLE_EQ(bc::apriori_bound(0.5, W1, W0, 2), 2.5);
    EXPECT_THROW(bc::apriori_bound(1.0, W1, W0, 1), bc::UsageError);
    EXPECT_THROW(bc::apriori_bound(-0.1, W1, W0, 1), bc::UsageError);
}

TEST(AveSolve, ZeroStiffnessIsOneLinearSolve) {
    const auto grid = bc::build_grid(kVocalfold, 30);
    const auto r = bc::ave_solve(kVocalfold, plane(0.0), grid);
    EXPECT_TRUE(r.report.converged);
    EXPECT_EQ(r.report.iterations, 1u);
    const auto ref = linear_solution(kVocalfold, plane(0.0), 30);
    EXPECT_LT(max_abs_diff(r.solution, ref), 1e-11);
}

TEST(AveSolve, SurfaceFarAboveMeansNoContact) {
    const auto contact = flat(1e4, 1e3);
    const auto grid = bc::build_grid(kVocalfold, 40);
    const auto r = bc::ave_solve(kVocalfold, contact, grid);
    ASSERT_TRUE(r.report.converged);
    EXPECT_LT(max_abs_diff(r.solution, linear_solution(kVocalfold, contact, 40)), 1e-8);
    for (double f : bc::contact_forces(contact, grid, r.solution)) EXPECT_EQ(f, 0.0);
}

TEST(AveSolve, VocalfoldAlmostConvergedAfterTwentyIterations) {
    const auto grid = bc::build_grid(kVocalfold, 50);
    bc::SolveOptions opts;
    opts.max_iter = 20;
    const auto r = bc::ave_solve(kVocalfold, plane(1e4), grid, opts);
    EXPECT_FALSE(r.report.converged);
    ASSERT_EQ(r.report.step_norms.size(), 20u);
    EXPECT_LT(r.report.step_norms.back(), 1e-2 * bc::norm2(r.solution));
}

TEST(AveSolve, VocalfoldMatchesStoredDenseReference) {
    const auto ref = bc::io::read_csv(std::string(BEAMCONTACT_SOURCE_DIR) +
                                      "/tests/data/vocalfold_n50_reference.csv");
    ASSERT_EQ(ref.columns.size(), 2u);
    ASSERT_EQ(ref.columns[1].size(), 50u);
    const auto grid = bc::build_grid(kVocalfold, 50);
    const auto r = bc::ave_solve(kVocalfold, plane(1e4), grid);
    ASSERT_TRUE(r.report.converged);
    EXPECT_LT(max_abs_diff(r.solution, ref.columns[1]), 1e-9);
    for (std::size_t i = 0; i < 50; ++i) EXPECT_NEAR(ref.columns[0][i], grid.nodes[i + 1], 1e-15);

    bc::SolveOptions twenty;
    twenty.max_iter = 20;
    const auto r20 = bc::ave_solve(kVocalfold, plane(1e4), grid, twenty);
    EXPECT_LT(max_abs_diff(r20.solution, ref.columns[1]), 1e-2);
}

TEST(AveSolve, ReportInvariants) {
    const auto grid = bc::build_grid(kVocalfold, 25);
    const auto r = bc::ave_solve(kVocalfold, plane(1e3), grid);
    ASSERT_TRUE(r.report.converged);
    ASSERT_TRUE(r.report.contraction_C.has_value());
    EXPECT_GE(*r.report.contraction_C, 0.0);
    EXPECT_LT(*r.report.contraction_C, 1.0);
    EXPECT_EQ(r.report.step_norms.size(), r.report.iterations);
    EXPECT_EQ(r.report.apriori_bounds.size(), r.report.iterations);
    for (std::size_t j = 1; j < r.report.apriori_bounds.size(); ++j) {
        EXPECT_LE(r.report.apriori_bounds[j], r.report.apriori_bounds[j - 1]);
    }
    for (double s : r.report.step_norms) EXPECT_TRUE(std::isfinite(s));
    EXPECT_LE(r.report.residual_inf, 10.0 * r.report.tol * bc::assemble_A(25).norm_inf());
    for (double f : bc::contact_forces(plane(1e3), grid, r.solution)) EXPECT_LE(f, 0.0);
}

TEST(AveSolve, MaxIterFlagsUnconverged) {
    const auto grid = bc::build_grid(kVocalfold, 25);
    bc::SolveOptions opts;
    opts.max_iter = 3;
    const auto r = bc::ave_solve(kVocalfold, plane(1e4), grid, opts);
    EXPECT_FALSE(r.report.converged);
    EXPECT_EQ(r.report.iterations, 3u);
}

TEST(AveSolve, NonFiniteIterateThrows) {
    const auto grid = bc::build_grid(kVocalfold, 10);
    bc::SolveOptions opts;
    opts.initial = std::vector<double>(10, std::nan(""));
    EXPECT_THROW(bc::ave_solve(kVocalfold, plane(1.0), grid, opts), bc::NumericalError);
    opts.initial = std::vector<double>(9, 0.0);
    EXPECT_THROW(bc::ave_solve(kVocalfold, plane(1.0), grid, opts), bc::UsageError);
}

TEST(AveSolve, UniqueFromDifferentStarts) {
    for (std::size_t N : {25u, 50u}) {
        const auto grid = bc::build_grid(kVocalfold, N);
        const auto from_zero = bc::ave_solve(kVocalfold, plane(1e4), grid);
        bc::SolveOptions opts;
        opts.initial = std::vector<double>(N, 1e3);
        const auto from_far = bc::ave_solve(kVocalfold, plane(1e4), grid, opts);
        ASSERT_TRUE(from_zero.report.converged && from_far.report.converged);
        EXPECT_LE(bc::distance2(from_zero.solution, from_far.solution), 10.0 * from_zero.report.tol);
    }
}

TEST(AveSolve, AprioriBoundHoldsAlongIterates) {
    const std::size_t N = 25;
    const auto grid = bc::build_grid(kVocalfold, N);
    bc::SolveOptions ref_opts;
    ref_opts.tol = 1e-13;
    const auto ref = bc::ave_solve(kVocalfold, plane(1e4), grid, ref_opts);
    ASSERT_TRUE(ref.report.converged);

    std::vector<std::vector<double>> iterates{std::vector<double>(N, 0.0)};
    bc::SolveOptions opts;
    opts.max_iter = 200;
    opts.observer = [&](std::size_t, std::span<const double> W) { iterates.emplace_back(W.begin(), W.end()); };
    const auto run = bc::ave_solve(kVocalfold, plane(1e4), grid, opts);
    const double C = *run.report.contraction_C;
    for (std::size_t j = 1; j < iterates.size(); ++j) {
        const double bound = bc::apriori_bound(C, iterates[1], iterates[0], j);
        EXPECT_LE(bc::distance2(iterates[j], ref.solution), bound) << j;
        EXPECT_NEAR(run.report.apriori_bounds[j - 1], bound, 1e-12 * bound);
    }
}

TEST(AveSolveZ, AgreesWithWForm) {
    const auto grid = bc::build_grid(kVocalfold, 25);
    const auto W = bc::ave_solve(kVocalfold, plane(1e4), grid);
    const auto Z = bc::ave_solve_z(kVocalfold, plane(1e4), grid);
    ASSERT_TRUE(W.report.converged && Z.report.converged);
    for (std::size_t i = 0; i < 25; ++i) {
        EXPECT_NEAR(Z.solution[i] + grid.nodes[i + 1] / 2, W.solution[i], 1e-10);
    }
}

TEST(AveSolveZ, ZeroSurfaceGivesW) {
    const auto grid = bc::build_grid(kVocalfold, 20);
    const auto W = bc::ave_solve(kVocalfold, flat(50.0, 0.0), grid);
    const auto Z = bc::ave_solve_z(kVocalfold, flat(50.0, 0.0), grid);
    EXPECT_EQ(Z.solution, W.solution);
}

TEST(AveSolveZ, ZeroStiffness) {
    const auto grid = bc::build_grid(kVocalfold, 20);
    const auto Z = bc::ave_solve_z(kVocalfold, plane(0.0), grid);
    const auto lin = linear_solution(kVocalfold, plane(0.0), 20);
    for (std::size_t i = 0; i < 20; ++i) EXPECT_NEAR(Z.solution[i], lin[i] - grid.nodes[i + 1] / 2, 1e-11);
}

TEST(GeneralSolve, ConstantLoadIsOneStep) {
    const bc::RightHandSide rhs = bc::GeneralMonotone{[](double, double) { return -3.0; }, -3.0};
    const auto grid = bc::build_grid(kVocalfold, 25);
    const auto r = bc::general_solve(kVocalfold, rhs, grid);
    EXPECT_TRUE(r.report.converged);
    EXPECT_EQ(r.report.iterations, 1u);
}

TEST(GeneralSolve, AgreesWithAveSolveOnContactLaw) {
    const auto grid = bc::build_grid(kVocalfold, 25);
    for (double K : {10.0, 1e3, 1e4}) {
        const bc::RightHandSide rhs = bc::as_general(plane(K));
        const auto g = bc::general_solve(kVocalfold, rhs, grid);
        const auto a = bc::ave_solve(kVocalfold, plane(K), grid);
        ASSERT_TRUE(g.report.converged) << K;
        EXPECT_LT(max_abs_diff(g.solution, a.solution), 1e-6) << K;
    }
}

TEST(GeneralSolve, CubicSpringResidualAndBracket) {
    const bc::RightHandSide rhs = bc::GeneralMonotone{[](double, double y) { return -y * y * y; }, 0.0};
    const std::size_t N = 25;
    const auto grid = bc::build_grid(kVocalfold, N);
    const auto r = bc::general_solve(kVocalfold, rhs, grid);
    ASSERT_TRUE(r.report.converged);
    const auto sys = bc::build_system(kVocalfold, rhs, N);
    EXPECT_LT(bc::norm_inf(bc::residual_discrete(sys, rhs, r.solution)), 1e-8);

    const auto upper = sys.A.solve(sys.Bbar);  // M = 0
    std::vector<double> load(sys.Bbar);
    for (std::size_t i = 0; i < N; ++i) load[i] += grid.h4() * bc::eval_rhs(rhs, grid.nodes[i + 1], upper[i]);
    const auto lower = sys.A.solve(load);
    for (std::size_t i = 0; i < N; ++i) {
        EXPECT_LE(r.solution[i], upper[i] + 1e-12);
        EXPECT_GE(r.solution[i], lower[i] - 1e-12);
    }
}

TEST(GeneralSolve, RejectsIncreasingRightHandSide) {
    const bc::RightHandSide rhs = bc::GeneralMonotone{[](double, double y) { return y; }, 0.0};
    const auto grid = bc::build_grid(kVocalfold, 10);
    EXPECT_THROW(bc::general_solve(kVocalfold, rhs, grid), bc::UsageError);
    const bc::RightHandSide ok = bc::GeneralMonotone{[](double, double) { return 0.0; }, 0.0};
    EXPECT_THROW(bc::general_solve(kVocalfold, ok, grid, {}, 0.0), bc::UsageError);
    EXPECT_THROW(bc::general_solve(kVocalfold, ok, grid, {}, 1.5), bc::UsageError);
}

TEST(ContractionProperty, RandomPairs) {
    std::mt19937_64 rng(31);
    for (std::size_t N : {10u, 25u}) {
        for (double K : {1.0, 1e2, 1e4, 1e7}) {
            const bc::RightHandSide rhs = plane(K);
            const auto sys = bc::build_system(kVocalfold, rhs, N);
            const bc::ContactMap T(sys, K);
            const double C = bc::contraction_constant(kVocalfold, K);
            std::uniform_real_distribution<double> u(-2.0, 2.0);
            for (int t = 0; t < 200; ++t) {
                std::vector<double> X(N), Y(N);
                for (std::size_t i = 0; i < N; ++i) {
                    X[i] = sys.Gvec[i] + u(rng);
                    Y[i] = sys.Gvec[i] + u(rng);
                }
                EXPECT_LE(bc::distance2(T.apply(X), T.apply(Y)), C * bc::distance2(X, Y) + 1e-12);
            }
        }
    }
}

TEST(ContractionProperty, SpectralRadiusOfLinearPart) {
    for (std::size_t N : {10u, 25u}) {
        for (double K : {1.0, 1e4}) {
            const auto grid = bc::build_grid(kVocalfold, N);
            const double d = grid.h4() * K / 2;
            auto shifted = oracle::fourth_difference_matrix(N);
            for (std::size_t i = 0; i < N; ++i) shifted[i][i] += d;
            auto inv = oracle::dense_inverse(shifted);
            for (auto& row : inv) for (double& v : row) v *= d;
            // symmetrize roundoff before Jacobi
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t j = i + 1; j < N; ++j) inv[i][j] = inv[j][i] = 0.5 * (inv[i][j] + inv[j][i]);
            const auto eig = bc::symmetric_eigenvalues(oracle::flatten(inv), N);
            const double lambda_min = bc::eigenvalues_A(N).front();
            EXPECT_NEAR(eig.back(), d / (d + lambda_min), 1e-10);
            EXPECT_LE(eig.back(), bc::contraction_constant(kVocalfold, K));
        }
    }
}
