#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace beamcontact {

/// Symmetric positive definite matrix with bandwidth 2 (pentadiagonal).
/// Only diagonals 0, +1, +2 are stored; the lower bands are the same
/// arrays. The Cholesky factor is computed on the first solve and shared by
/// copies.
class BandedSPD {
public:
    BandedSPD(std::vector<double> diag, std::vector<double> off1, std::vector<double> off2);

    [[nodiscard]] std::size_t size() const noexcept { return diag_.size(); }

    /// Diagonal k, for k in [-2, 2]. band(-k) aliases band(k).
    [[nodiscard]] std::span<const double> band(int k) const;

    [[nodiscard]] double at(std::size_t i, std::size_t j) const;

    /// Row-major dense copy.
    [[nodiscard]] std::vector<double> dense() const;

    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

    /// Infinity norm (max absolute row sum).
    [[nodiscard]] double norm_inf() const;

    /// A + sigma I, with its own factorization cache.
    [[nodiscard]] BandedSPD shifted(double sigma) const;

    /// Forces the factorization. Throws NumericalError carrying the pivot
    /// index if the matrix is not positive definite.
    void factorize() const;

    /// Solves A y = rhs with the cached Cholesky factor.
    [[nodiscard]] std::vector<double> solve(std::span<const double> rhs) const;

private:
    struct Factor {
        std::once_flag once;
        std::vector<double> l0, l1, l2;  // L(i,i), L(i,i-1), L(i,i-2)
    };
    void compute_factor() const;

    std::vector<double> diag_;
    std::vector<double> off1_;
    std::vector<double> off2_;
    std::shared_ptr<Factor> factor_;
};

}  // namespace beamcontact
