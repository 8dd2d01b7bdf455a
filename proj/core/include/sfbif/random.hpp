#pragma once

// Seeded generators for random symmetric matrices and paths. Used by the
// axiom checker, the test suites and the benchmarks.

#include <cstddef>
#include <random>
#include <span>

#include "sfbif/symlin.hpp"

namespace sfbif {

using Rng = std::mt19937_64;

/// Symmetric matrix with independent N(0, scale^2) entries on and above the
/// diagonal.
SymMatrix random_symmetric(Rng& rng, std::size_t dim, double scale = 1.0);

/// Haar-ish orthogonal matrix (Gram-Schmidt of a Gaussian matrix).
Matrix random_orthogonal(Rng& rng, std::size_t dim);

/// Q diag(values) Q^T for a random orthogonal Q.
SymMatrix random_with_spectrum(Rng& rng, std::span<const double> values);

/// Symmetric matrix whose eigenvalues all satisfy |x| >= gap.
SymMatrix random_invertible(Rng& rng, std::size_t dim, double gap = 0.05);

/// G G^T with G of size dim x rank.
SymMatrix random_psd(Rng& rng, std::size_t dim, std::size_t rank);

/// Random matrix with entries N(0, scale^2), not symmetric.
Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0);

}  // namespace sfbif
