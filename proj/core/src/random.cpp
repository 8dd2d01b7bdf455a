#include "sfbif/random.hpp"

#include <cmath>

namespace sfbif {

SymMatrix random_symmetric(Rng& rng, std::size_t dim, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  SymMatrix s(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i; j < dim; ++j) s.set(i, j, normal(rng));
  }
  return s;
}

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

Matrix random_orthogonal(Rng& rng, std::size_t dim) {
  Matrix q = random_matrix(rng, dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    // Two passes of modified Gram-Schmidt keep the columns orthonormal to
    // machine precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        double dot = 0.0;
        for (std::size_t i = 0; i < dim; ++i) dot += q(i, j) * q(i, k);
        for (std::size_t i = 0; i < dim; ++i) q(i, j) -= dot * q(i, k);
      }
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) norm += q(i, j) * q(i, j);
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < dim; ++i) q(i, j) /= norm;
  }
  return q;
}

SymMatrix random_with_spectrum(Rng& rng, std::span<const double> values) {
  const Matrix q = random_orthogonal(rng, values.size());
  return congruence(SymMatrix::diagonal(values), q.transposed());
}

SymMatrix random_invertible(Rng& rng, std::size_t dim, double gap) {
  std::uniform_real_distribution<double> magnitude(gap, 2.0);
  std::bernoulli_distribution negative(0.5);
  std::vector<double> values(dim);
  for (double& v : values) v = negative(rng) ? -magnitude(rng) : magnitude(rng);
  return random_with_spectrum(rng, values);
}

SymMatrix random_psd(Rng& rng, std::size_t dim, std::size_t rank) {
  const Matrix g = random_matrix(rng, dim, rank);
  return SymMatrix::from_matrix(g * g.transposed());
}

}  // namespace sfbif
