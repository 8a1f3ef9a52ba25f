#pragma once

// Continuous problem  w'''' = f(x, w)  on [a, b] with
//   w(a) = alpha1, w(b) = alpha2, w''(a) = beta1, w''(b) = beta2,
// in the normalized form (physical load already divided by the bending
// stiffness).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace beamcontact {

struct BVPSpec {
    double a = 0.0;
    double b = 1.0;
    double alpha1 = 0.0;  ///< w(a)
    double alpha2 = 0.0;  ///< w(b)
    double beta1 = 0.0;   ///< w''(a)
    double beta2 = 0.0;   ///< w''(b)

    /// Throws UsageError unless b > a and all fields are finite.
    void validate() const;
    [[nodiscard]] double length() const noexcept { return b - a; }
};

/// Bounded-above (f <= M), non-increasing in y.
struct GeneralMonotone {
    std::function<double(double, double)> eval;
    double M = 0.0;
};

/// f(x, y) = -K (y - g(x)) H(y - g(x)), with H(0) = 0. Satisfies the
/// general assumptions with M = 0.
struct PiecewiseLinearContact {
    double K = 0.0;
    std::function<double(double)> g;
    std::function<double(double)> g_prime;

    /// Contact force at a single point; 0 when y <= g(x).
    [[nodiscard]] double force(double x, double y) const;
};

using RightHandSide = std::variant<GeneralMonotone, PiecewiseLinearContact>;

/// Evaluates f(x, y). Throws DomainError for non-finite x or y.
double eval_rhs(const RightHandSide& rhs, double x, double y);

/// Upper bound M of the right-hand side (0 for the contact law).
double upper_bound(const RightHandSide& rhs) noexcept;

/// The contact law wrapped as a generic monotone right-hand side with M = 0.
GeneralMonotone as_general(const PiecewiseLinearContact& contact);

struct Violation {
    double x = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;
    double f1 = 0.0;
    double f2 = 0.0;
};

struct ValidationReport {
    std::size_t samples = 0;
    double box = 0.0;  ///< half-width Y of the sampled y-range
    std::size_t monotonicity_violations = 0;
    std::size_t bound_violations = 0;
    std::vector<Violation> examples;  ///< first few offending samples

    [[nodiscard]] bool ok() const noexcept {
        return monotonicity_violations == 0 && bound_violations == 0;
    }
};

/// Randomized check of f <= M and y1 >= y2 => f(x,y1) <= f(x,y2) over
/// [a,b] x [-Y,Y]^2, Y = 10 (1 + max |boundary data|). Deterministic in seed.
ValidationReport validate_rhs(const RightHandSide& rhs, const BVPSpec& spec,
                              std::size_t n_samples, std::uint64_t seed);

/// The quartic with wbar'''' = M satisfying the four boundary conditions.
double wbar(const BVPSpec& spec, double M, double x);

/// Derivatives of wbar, order 0..4.
double wbar_derivative(const BVPSpec& spec, double M, double x, int order);

}  // namespace beamcontact
