#pragma once

#include <cstddef>
#include <vector>

namespace beamcontact {

/// Eigenvalues of a dense symmetric matrix (row-major, n x n) by cyclic
/// Jacobi rotations, ascending. Intended for n up to a few hundred.
std::vector<double> symmetric_eigenvalues(std::vector<double> matrix, std::size_t n,
                                          double tol = 1e-14, std::size_t max_sweeps = 100);

}  // namespace beamcontact
