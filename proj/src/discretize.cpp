#include "beamcontact/discretize.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "beamcontact/errors.hpp"

namespace beamcontact {

namespace {

void require_min_nodes(std::size_t N) {
    if (N < kMinInteriorNodes) {
        throw UsageError("need at least 5 interior nodes, got N = " + std::to_string(N));
    }
}

}  // namespace

Grid build_grid(const BVPSpec& spec, std::size_t N) {
    spec.validate();
    require_min_nodes(N);
    Grid grid;
    grid.N = N;
    grid.a = spec.a;
    grid.b = spec.b;
    grid.h = spec.length() / static_cast<double>(N + 1);
    grid.nodes.resize(N + 2);
    for (std::size_t i = 0; i <= N + 1; ++i) {
        grid.nodes[i] = spec.a + static_cast<double>(i) * grid.h;
    }
    grid.nodes.front() = spec.a;
    grid.nodes.back() = spec.b;
    return grid;
}

BandedSPD assemble_A(std::size_t N) {
    require_min_nodes(N);
    std::vector<double> diag(N, 6.0);
    diag.front() = 5.0;
    diag.back() = 5.0;
    return BandedSPD(std::move(diag), std::vector<double>(N - 1, -4.0),
                     std::vector<double>(N - 2, 1.0));
}

std::vector<double> eigenvalues_A(std::size_t N) {
    if (N < 1) {
        throw UsageError("eigenvalues_A: N must be >= 1");
    }
    std::vector<double> lambda(N);
    const double denom = 2.0 * static_cast<double>(N + 1);
    for (std::size_t i = 1; i <= N; ++i) {
        const double s = std::sin(static_cast<double>(i) * std::numbers::pi / denom);
        lambda[i - 1] = 16.0 * s * s * s * s;
    }
    return lambda;
}

std::vector<double> assemble_Bbar(const BVPSpec& spec, const RightHandSide& rhs, const Grid& grid) {
    const std::size_t N = grid.N;
    require_min_nodes(N);
    if (grid.a != spec.a || grid.b != spec.b) {
        throw UsageError("assemble_Bbar: grid was built for a different interval");
    }
    const double h2 = grid.h * grid.h;
    const double h4 = grid.h4();
    std::vector<double> B(N, 0.0);
    B[0] = -spec.beta1 * h2 + 2.0 * spec.alpha1 -
           h4 / 12.0 * eval_rhs(rhs, grid.nodes.front(), spec.alpha1);
    B[1] = -spec.alpha1;
    B[N - 2] += -spec.alpha2;
    B[N - 1] += -spec.beta2 * h2 + 2.0 * spec.alpha2 -
                h4 / 12.0 * eval_rhs(rhs, grid.nodes.back(), spec.alpha2);
    return B;
}

DiscreteSystem build_system(const BVPSpec& spec, const RightHandSide& rhs, std::size_t N) {
    auto grid = build_grid(spec, N);
    auto A = assemble_A(N);
    auto B = assemble_Bbar(spec, rhs, grid);
    std::vector<double> G;
    if (const auto* contact = std::get_if<PiecewiseLinearContact>(&rhs)) {
        G.resize(N);
        for (std::size_t i = 0; i < N; ++i) {
            G[i] = contact->g(grid.nodes[i + 1]);
        }
    }
    std::vector<double> Mv(N, upper_bound(rhs));
    return DiscreteSystem{std::move(grid), std::move(A), std::move(B), std::move(G), std::move(Mv)};
}

std::vector<double> residual_discrete(const DiscreteSystem& sys, const RightHandSide& rhs,
                                      std::span<const double> W) {
    const std::size_t N = sys.grid.N;
    if (W.size() != N || sys.Bbar.size() != N) {
        throw UsageError("residual_discrete: vector length does not match the grid");
    }
    const double h4 = sys.grid.h4();
    auto r = sys.A.multiply(W);
    for (std::size_t i = 0; i < N; ++i) {
        // M + (f - M) collapses to f.
        r[i] -= sys.Bbar[i] + h4 * eval_rhs(rhs, sys.grid.nodes[i + 1], W[i]);
    }
    return r;
}

}  // namespace beamcontact
