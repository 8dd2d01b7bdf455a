#pragma once

// Dense symmetric linear algebra: Jacobi eigensolver, inertia, kernels and
// the relative Morse index of two symmetric matrices.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sfbif {

/// Row-major dense real matrix. Used for eigenvector sets, congruence
/// transforms and other non-symmetric intermediates.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const { return data_; }

  Matrix transposed() const;
  /// Column `j` copied out.
  std::vector<double> column(std::size_t j) const;

  friend Matrix operator*(const Matrix& x, const Matrix& y);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Dense symmetric matrix. The constructor symmetrizes its input as
/// (S + S^T) / 2 and rejects non-finite entries, so entries(i, j) ==
/// entries(j, i) holds bit-for-bit.
class SymMatrix {
 public:
  SymMatrix() = default;
  /// Zero matrix of the given dimension.
  explicit SymMatrix(std::size_t dim);
  /// Row-major entries, dim * dim of them.
  SymMatrix(std::size_t dim, std::vector<double> entries);

  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(std::span<const double> diag);
  static SymMatrix diagonal(std::initializer_list<double> diag);
  static SymMatrix from_rows(const std::vector<std::vector<double>>& rows);
  static SymMatrix from_matrix(const Matrix& m);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double value);
  /// Adds to both (i, j) and (j, i) (once on the diagonal).
  void add(std::size_t i, std::size_t j, double value);

  std::span<const double> data() const { return data_; }
  Matrix to_matrix() const;

  double frobenius_norm() const;
  double max_abs() const;
  /// max(1, ||S||_F / sqrt(dim)); the reference magnitude for tolerances.
  double spectral_scale() const;

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator-=(const SymMatrix& other);
  SymMatrix& operator*=(double s);
  friend SymMatrix operator+(SymMatrix x, const SymMatrix& y) { return x += y; }
  friend SymMatrix operator-(SymMatrix x, const SymMatrix& y) { return x -= y; }
  friend SymMatrix operator*(SymMatrix x, double s) { return x *= s; }
  friend SymMatrix operator*(double s, SymMatrix x) { return x *= s; }
  friend SymMatrix operator-(SymMatrix x) { return x *= -1.0; }
  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Ascending eigenvalues; column j of `vectors` is the unit eigenvector for
/// values[j].
struct EigenDecomposition {
  std::vector<double> values;
  Matrix vectors;
};

struct Inertia {
  int neg = 0;
  int zero = 0;
  int pos = 0;
  double zero_tol = 0.0;

  int dim() const { return neg + zero + pos; }
  int signature() const { return pos - neg; }
  int morse_index() const { return neg; }
  int kernel_dim() const { return zero; }

  friend bool operator==(const Inertia& a, const Inertia& b) {
    return a.neg == b.neg && a.zero == b.zero && a.pos == b.pos;
  }
};

/// Which spectral side a kernel joins in relative Morse index computations.
/// `negative`: E- is the spectrum in (-inf, 0]. `positive`: E+ is [0, inf).
enum class KernelSide { negative, positive };

inline constexpr double kDefaultRelativeZeroTol = 1e-8;

/// Cyclic Jacobi eigensolver. Converges when the off-diagonal Frobenius norm
/// drops below 1e-12 * ||S||_F; throws NumericalError after 100 sweeps.
EigenDecomposition eigensym(const SymMatrix& s);

/// Eigenvalues only (same solver, ascending).
std::vector<double> eigenvalues(const SymMatrix& s);

/// relative * max(1, ||S||_F / sqrt(dim)).
double default_zero_tol(const SymMatrix& s, double relative = kDefaultRelativeZeroTol);

Inertia inertia(const SymMatrix& s, double zero_tol);
Inertia inertia(const SymMatrix& s);
Inertia inertia_of_eigenvalues(std::span<const double> values, double zero_tol);

/// Orthonormal basis (as columns) of the eigenspace for |eigenvalue| <= zero_tol.
Matrix kernel_basis(const SymMatrix& s, double zero_tol);
Matrix kernel_basis(const SymMatrix& s);

/// dim(E-(S) ∩ E+(T)) - dim(E-(T) ∩ E+(S)), with intersections measured by
/// projector residual ranks. Each matrix is classified with its own
/// default_zero_tol.
int rel_morse(const SymMatrix& s, const SymMatrix& t, KernelSide kernel_side);

/// Dimension of the intersection of two column spans (both orthonormal).
int intersection_dim(const Matrix& u, const Matrix& w, double rank_tol = 1e-8);

/// M^T S M.
SymMatrix congruence(const SymMatrix& s, const Matrix& m);

/// [[S, 0], [0, T]].
SymMatrix block_diag(const SymMatrix& s, const SymMatrix& t);

/// True when S has no eigenvalue below -tol.
bool is_psd(const SymMatrix& s, double tol);

/// Largest |eigenvalue|.
double spectral_norm(const SymMatrix& s);

}  // namespace sfbif
