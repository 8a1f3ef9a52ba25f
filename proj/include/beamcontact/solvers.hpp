#pragma once

// Fixed-point solvers for the discrete system.
//
// Contact law: with d = h^4 K / 2 the discrete equation becomes the
// absolute value equation
//   (A + d I) W = Bbar + d G - d |W - G|,
// whose right side defines the map
//   T(X) = (A + d I)^{-1} (Bbar + d G) - d (A + d I)^{-1} |X - G|.
// T is a contraction in the 2-norm with constant
//   C = (b-a)^4 K / ((b-a)^4 K + 32) < 1
// so plain iteration converges from any start and
//   ||W^j - W*||_2 <= C^j / (1 - C) ||W^1 - W^0||_2.
//
// General monotone f: damped iteration on
//   R(V) = A^{-1} Bbar + A^{-1} h^4 (M + F_M(V)).

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "beamcontact/discretize.hpp"
#include "beamcontact/model.hpp"

namespace beamcontact {

struct IterationReport {
    std::size_t iterations = 0;
    std::vector<double> step_norms;  ///< ||W^j - W^{j-1}||_2, j = 1..iterations
    double residual_inf = 0.0;       ///< ||A W - Bbar - h^4 f(x, W)||_inf at the result
    std::optional<double> contraction_C;
    std::vector<double> apriori_bounds;  ///< C^j ||W^1 - W^0||_2 / (1 - C), j = 1..iterations
    double tol = 0.0;
    double damping = 1.0;  ///< final relaxation factor (general solver)
    bool converged = false;
};

/// Called after every iteration with (j, W^j).
using IterateObserver = std::function<void(std::size_t, std::span<const double>)>;

struct SolveOptions {
    std::optional<double> tol;  ///< default 1e-10 (1 + ||Bbar||_2)
    std::size_t max_iter = 100000;
    std::optional<std::vector<double>> initial;  ///< W^0, default zero
    IterateObserver observer;
};

struct SolveResult {
    std::vector<double> solution;
    IterationReport report;
};

double default_tolerance(std::span<const double> Bbar);

/// (b-a)^4 K / ((b-a)^4 K + 32). Throws UsageError for K < 0.
double contraction_constant(const BVPSpec& spec, double K);

/// C^j ||W1 - W0||_2 / (1 - C). Throws UsageError unless 0 <= C < 1.
double apriori_bound(double C, std::span<const double> W1, std::span<const double> W0,
                     std::size_t j);

/// The contraction T for a fixed discrete contact problem. The shifted
/// matrix is factorized once and the affine term precomputed.
class ContactMap {
public:
    ContactMap(const DiscreteSystem& sys, double K);

    [[nodiscard]] std::vector<double> apply(std::span<const double> X) const;

    [[nodiscard]] double shift() const noexcept { return shift_; }
    [[nodiscard]] const BandedSPD& shifted_matrix() const noexcept { return shifted_; }
    [[nodiscard]] std::span<const double> affine_term() const noexcept { return affine_; }
    [[nodiscard]] std::span<const double> surface() const noexcept { return surface_; }

private:
    double shift_;
    BandedSPD shifted_;
    std::vector<double> surface_;
    std::vector<double> affine_;
};

/// Iterates W^j = T(W^{j-1}) until ||W^j - W^{j-1}||_2 <= tol (or the
/// certified bound C/(1-C) ||W^j - W^{j-1}||_2 <= tol). Hitting max_iter
/// flags the result unconverged; a non-finite iterate throws NumericalError.
SolveResult ave_solve(const BVPSpec& spec, const PiecewiseLinearContact& contact, const Grid& grid,
                      const SolveOptions& options = {});

/// The same iteration in Z = W - G:
///   (A + d I) Z = Bbar - A G - d |Z|.
/// Returns Z. Starts from Z^0 = W^0 - G.
SolveResult ave_solve_z(const BVPSpec& spec, const PiecewiseLinearContact& contact,
                        const Grid& grid, const SolveOptions& options = {});

/// Damped fixed-point iteration V <- (1 - theta) V + theta R(V) from the
/// upper bracket V^0 = A^{-1}(Bbar + h^4 M). Stops when ||R(V) - V||_2 <= tol.
/// theta is halved when progress stalls for 50 iterations or an iterate
/// blows up; below 2^-10 the result is flagged unconverged. Throws
/// UsageError if f fails a randomized monotonicity check.
SolveResult general_solve(const BVPSpec& spec, const RightHandSide& rhs, const Grid& grid,
                          const SolveOptions& options = {}, double damping = 0.5);

/// Contact force -K (W_i - G_i) H(W_i - G_i) at the interior nodes.
std::vector<double> contact_forces(const PiecewiseLinearContact& contact, const Grid& grid,
                                   std::span<const double> W);

double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);
double distance2(std::span<const double> x, std::span<const double> y);

}  // namespace beamcontact
