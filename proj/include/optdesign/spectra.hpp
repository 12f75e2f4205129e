#pragma once

#include <cstdint>
#include <vector>

#include "optdesign/design.hpp"
#include "optdesign/graph.hpp"
#include "optdesign/matrix.hpp"
#include "optdesign/spectrum.hpp"

namespace optdesign {

/// Eigenvalues of a real symmetric matrix, sorted nonincreasing, by cyclic
/// Jacobi sweeps. Sweeps stop once the off-diagonal Frobenius norm falls
/// below 1e-12 times the matrix Frobenius norm.
/// Throws std::invalid_argument if M is not square or not symmetric to 1e-12.
std::vector<double> sym_eig(const RealMatrix& m);

/// Drops the smallest-magnitude eigenvalue of C (the all-ones direction) and
/// returns the remaining v-1 values. Throws DomainError when more than one
/// eigenvalue lies below 1e-8 * trace, i.e. the design is disconnected.
Spectrum nonzero_spectrum(const InfoMatrix& c, double cluster_tol = kDefaultClusterTolerance);
Spectrum nonzero_spectrum(const RealMatrix& c, double cluster_tol = kDefaultClusterTolerance);

/// Exact determinant by fraction-free (Bareiss) elimination with row pivoting.
/// Intermediate values are exact minors; computed in 128-bit arithmetic.
__int128 bareiss_determinant(IntMatrix m);

/// Number of spanning trees, as the determinant of the Laplacian with the
/// last row and column removed.
std::int64_t spanning_tree_count(const Graph& g);

/// True iff s is an eigenvalue of the Laplacian, decided by det(L - sI) = 0
/// in exact integer arithmetic.
bool integer_eigenvalue_certificate(const Graph& g, std::int64_t s);

}  // namespace optdesign
