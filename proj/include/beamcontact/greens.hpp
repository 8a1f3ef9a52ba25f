#pragma once

// Continuous-space reference machinery: the second-order kernel Gt, the
// fourth-order Green's function G(x,s) = int Gt(x,t) Gt(t,s) dt, and the
// integral operator
//   L[v](x) = wbar_M(x) + int G(x,s) (f(s, v(s)) - M) ds,
// whose fixed point is the solution of the BVP. Integrals use composite
// Simpson on a uniform grid.

#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "beamcontact/model.hpp"

namespace beamcontact {

/// Uniform composite-Simpson grid with m (even, >= 4) panels on [a, b].
class QuadGrid {
public:
    QuadGrid(double a, double b, std::size_t panels);

    [[nodiscard]] double a() const noexcept { return a_; }
    [[nodiscard]] double b() const noexcept { return b_; }
    [[nodiscard]] std::size_t panels() const noexcept { return panels_; }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }
    [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }

    /// G at all node pairs, row-major (m+1) x (m+1). Built on first use and
    /// shared by copies of this grid.
    [[nodiscard]] std::span<const double> green_table() const;

    /// sum_j w_j G(x_i, x_j): the quadrature of int G(x_i, s) ds per node.
    [[nodiscard]] std::span<const double> green_row_integrals() const;

    friend bool operator==(const QuadGrid& lhs, const QuadGrid& rhs) noexcept {
        return lhs.a_ == rhs.a_ && lhs.b_ == rhs.b_ && lhs.panels_ == rhs.panels_;
    }

private:
    struct Cache {
        std::once_flag once;
        std::vector<double> table;
        std::vector<double> row_integrals;
    };
    void build_cache() const;

    double a_;
    double b_;
    std::size_t panels_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::shared_ptr<Cache> cache_;
};

QuadGrid make_quad_grid(const BVPSpec& spec, std::size_t panels);

struct SampledFunction {
    QuadGrid grid;
    std::vector<double> values;
};

/// Samples wbar_M at the grid nodes.
SampledFunction sample_wbar(const BVPSpec& spec, double M, const QuadGrid& quad);

/// Green's function of y'' = h, y(a) = y(b) = 0. Non-positive.
double green_tilde(const BVPSpec& spec, double x, double s);

/// Simpson approximation of int Gt(x,t) Gt(t,s) dt over the nodes of quad.
double green_G(const BVPSpec& spec, const QuadGrid& quad, double x, double s);

SampledFunction apply_L(const BVPSpec& spec, const RightHandSide& rhs, double M,
                        const QuadGrid& quad, const SampledFunction& v);

struct OracleReport {
    std::size_t iterations = 0;
    std::vector<double> step_norms;  ///< sup-norm of v_{k+1} - v_k
    /// max_x int G(x,s) ds (quadrature).
    double kernel_bound = 0.0;
    /// K * kernel_bound for the contact law; for a general f the largest
    /// observed ratio of successive step norms.
    double lipschitz_estimate = 0.0;
    bool contractive = false;
    bool bracket_held = true;  ///< L[wbar] <= v_k <= wbar at every iterate
    bool converged = false;
};

struct PicardResult {
    SampledFunction solution;
    OracleReport report;
};

/// v <- L[v] from v = wbar_M until the sup-norm step drops below tol.
/// Returns the best iterate flagged unconverged when max_iter is hit or
/// step norms fail to decrease for 10 consecutive iterations.
PicardResult picard_reference_solve(const BVPSpec& spec, const RightHandSide& rhs, double M,
                                    const QuadGrid& quad, double tol, std::size_t max_iter);

}  // namespace beamcontact
