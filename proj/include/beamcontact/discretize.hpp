#pragma once

// Finite-difference form of the BVP on a uniform grid with N interior nodes:
//   A W = Bbar + h^4 (M + F_M(W)),   [F_M(W)]_i = f(x_i, W_i) - M,
// where A is the pentadiagonal fourth-difference matrix with the moment
// conditions folded into its corner rows.

#include <cstddef>
#include <span>
#include <vector>

#include "beamcontact/banded.hpp"
#include "beamcontact/model.hpp"

namespace beamcontact {

inline constexpr std::size_t kMinInteriorNodes = 5;

struct Grid {
    std::size_t N = 0;  ///< interior nodes
    double a = 0.0;
    double b = 1.0;
    double h = 0.0;
    std::vector<double> nodes;  ///< x_0 .. x_{N+1}, x_0 = a, x_{N+1} = b

    [[nodiscard]] double h4() const noexcept {
        const double h2 = h * h;
        return h2 * h2;
    }

    /// Interior abscissae x_1 .. x_N.
    [[nodiscard]] std::span<const double> interior() const {
        return std::span<const double>(nodes).subspan(1, N);
    }
};

Grid build_grid(const BVPSpec& spec, std::size_t N);

/// Diagonal (5, 6, ..., 6, 5), first off-diagonal -4, second +1.
BandedSPD assemble_A(std::size_t N);

/// 16 sin^4(i pi / (2(N+1))), i = 1..N, ascending.
std::vector<double> eigenvalues_A(std::size_t N);

/// Boundary load: corrections in entries 1, 2, N-1, N; zero elsewhere.
std::vector<double> assemble_Bbar(const BVPSpec& spec, const RightHandSide& rhs, const Grid& grid);

struct DiscreteSystem {
    Grid grid;
    BandedSPD A;
    std::vector<double> Bbar;
    std::vector<double> Gvec;  ///< g at interior nodes (contact law only, else empty)
    std::vector<double> Mvec;  ///< all entries M
};

DiscreteSystem build_system(const BVPSpec& spec, const RightHandSide& rhs, std::size_t N);

/// A W - Bbar - h^4 (M + F_M(W)).
std::vector<double> residual_discrete(const DiscreteSystem& sys, const RightHandSide& rhs,
                                      std::span<const double> W);

}  // namespace beamcontact
