#include "sfbif/symlin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "sfbif/errors.hpp"

namespace sfbif {

namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiRelTol = 1e-12;

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6e", x);
  return buf;
}

double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) sum += a[i * n + j] * a[i * n + j];
    }
  }
  return std::sqrt(sum);
}

// Orthonormal columns of `vectors` whose eigenvalue satisfies `keep`.
template <typename Pred>
Matrix select_columns(const EigenDecomposition& eig, Pred keep) {
  std::vector<std::size_t> picked;
  for (std::size_t j = 0; j < eig.values.size(); ++j) {
    if (keep(eig.values[j])) picked.push_back(j);
  }
  const std::size_t n = eig.vectors.rows();
  Matrix out(n, picked.size());
  for (std::size_t c = 0; c < picked.size(); ++c) {
    for (std::size_t i = 0; i < n; ++i) out(i, c) = eig.vectors(i, picked[c]);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

std::vector<double> Matrix::column(std::size_t j) const {
  std::vector<double> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

Matrix operator*(const Matrix& x, const Matrix& y) {
  if (x.cols() != y.rows()) throw DomainError("matrix product: inner dimensions differ");
  Matrix out(x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t k = 0; k < x.cols(); ++k) {
      const double xik = x(i, k);
      if (xik == 0.0) continue;
      for (std::size_t j = 0; j < y.cols(); ++j) out(i, j) += xik * y(k, j);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SymMatrix

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

SymMatrix::SymMatrix(std::size_t dim, std::vector<double> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim * dim) {
    throw DomainError("SymMatrix: expected " + std::to_string(dim * dim) + " entries, got " +
                      std::to_string(data_.size()));
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (!std::isfinite(data_[i * dim + j])) {
        throw DomainError("SymMatrix: non-finite entry at (" + std::to_string(i) + ", " +
                          std::to_string(j) + ")");
      }
    }
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      const double avg = 0.5 * (data_[i * dim + j] + data_[j * dim + i]);
      data_[i * dim + j] = avg;
      data_[j * dim + i] = avg;
    }
  }
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix s(dim);
  for (std::size_t i = 0; i < dim; ++i) s.data_[i * dim + i] = 1.0;
  return s;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix s(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (!std::isfinite(diag[i])) throw DomainError("SymMatrix: non-finite diagonal entry");
    s.data_[i * diag.size() + i] = diag[i];
  }
  return s;
}

SymMatrix SymMatrix::diagonal(std::initializer_list<double> diag) {
  return diagonal(std::span<const double>(diag.begin(), diag.size()));
}

SymMatrix SymMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  std::vector<double> entries;
  entries.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw DomainError("SymMatrix: row " + std::to_string(i) + " has " +
                        std::to_string(rows[i].size()) + " entries, expected " +
                        std::to_string(n));
    }
    entries.insert(entries.end(), rows[i].begin(), rows[i].end());
  }
  return SymMatrix(n, std::move(entries));
}

SymMatrix SymMatrix::from_matrix(const Matrix& m) {
  if (m.rows() != m.cols()) throw DomainError("SymMatrix: matrix is not square");
  return SymMatrix(m.rows(), std::vector<double>(m.data().begin(), m.data().end()));
}

void SymMatrix::set(std::size_t i, std::size_t j, double value) {
  if (!std::isfinite(value)) throw DomainError("SymMatrix: non-finite entry");
  data_[i * dim_ + j] = value;
  data_[j * dim_ + i] = value;
}

void SymMatrix::add(std::size_t i, std::size_t j, double value) {
  data_[i * dim_ + j] += value;
  if (i != j) data_[j * dim_ + i] += value;
}

Matrix SymMatrix::to_matrix() const {
  Matrix m(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  }
  return m;
}

double SymMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (double x : data_) sum += x * x;
  return std::sqrt(sum);
}

double SymMatrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

double SymMatrix::spectral_scale() const {
  if (dim_ == 0) return 1.0;
  return std::max(1.0, frobenius_norm() / std::sqrt(static_cast<double>(dim_)));
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  if (other.dim_ != dim_) throw DomainError("SymMatrix: dimension mismatch in +");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& other) {
  if (other.dim_ != dim_) throw DomainError("SymMatrix: dimension mismatch in -");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (double& x : data_) x *= s;
  return *this;
}

// ---------------------------------------------------------------------------
// Eigensolver

namespace {

// Cyclic Jacobi on the row-major copy `a`; rotations are accumulated into
// `v` when it is non-null.
void jacobi(std::vector<double>& a, std::size_t n, Matrix* v, double frobenius) {
  const double threshold = kJacobiRelTol * frobenius;
  double off = off_diagonal_norm(a, n);
  int sweep = 0;
  while (off > threshold) {
    if (sweep == kMaxJacobiSweeps) {
      throw NumericalError("eigensym: no convergence after " + std::to_string(kMaxJacobiSweeps) +
                           " Jacobi sweeps (off-diagonal residual " + format_double(off) +
                           ", threshold " + format_double(threshold) + ")");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (apq == 0.0) continue;
        // Below the last bit of both diagonal entries the rotation is a no-op.
        const double app = a[p * n + p], aqq = a[q * n + q];
        if (sweep > 3 && std::abs(app) + 1e2 * std::abs(apq) == std::abs(app) &&
            std::abs(aqq) + 1e2 * std::abs(apq) == std::abs(aqq)) {
          a[p * n + q] = 0.0;
          a[q * n + p] = 0.0;
          continue;
        }
        const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a[k * n + p];
          const double akq = a[k * n + q];
          const double np = c * akp - sn * akq;
          const double nq = sn * akp + c * akq;
          a[k * n + p] = np;
          a[p * n + k] = np;
          a[k * n + q] = nq;
          a[q * n + k] = nq;
        }
        a[p * n + p] -= t * apq;
        a[q * n + q] += t * apq;
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        if (v != nullptr) {
          for (std::size_t k = 0; k < n; ++k) {
            const double vkp = (*v)(k, p);
            const double vkq = (*v)(k, q);
            (*v)(k, p) = c * vkp - sn * vkq;
            (*v)(k, q) = sn * vkp + c * vkq;
          }
        }
      }
    }
    ++sweep;
    off = off_diagonal_norm(a, n);
  }
}

std::vector<std::size_t> ascending_diagonal(const std::vector<double>& a, std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });
  return order;
}

}  // namespace

EigenDecomposition eigensym(const SymMatrix& s) {
  const std::size_t n = s.dim();
  std::vector<double> a(s.data().begin(), s.data().end());
  Matrix v = Matrix::identity(n);
  jacobi(a, n, &v, s.frobenius_norm());
  const auto order = ascending_diagonal(a, n);

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a[order[c] * n + order[c]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, c) = v(i, order[c]);
  }
  return out;
}

std::vector<double> eigenvalues(const SymMatrix& s) {
  const std::size_t n = s.dim();
  std::vector<double> a(s.data().begin(), s.data().end());
  jacobi(a, n, nullptr, s.frobenius_norm());
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a[i * n + i];
  std::sort(values.begin(), values.end());
  return values;
}

double default_zero_tol(const SymMatrix& s, double relative) {
  return relative * s.spectral_scale();
}

Inertia inertia_of_eigenvalues(std::span<const double> values, double zero_tol) {
  if (!(zero_tol >= 0.0)) throw DomainError("inertia: zero_tol must be >= 0");
  Inertia in;
  in.zero_tol = zero_tol;
  for (double x : values) {
    if (x < -zero_tol) {
      ++in.neg;
    } else if (x > zero_tol) {
      ++in.pos;
    } else {
      ++in.zero;
    }
  }
  return in;
}

Inertia inertia(const SymMatrix& s, double zero_tol) {
  if (!(zero_tol >= 0.0)) throw DomainError("inertia: zero_tol must be >= 0");
  const auto values = eigenvalues(s);
  return inertia_of_eigenvalues(values, zero_tol);
}

Inertia inertia(const SymMatrix& s) { return inertia(s, default_zero_tol(s)); }

Matrix kernel_basis(const SymMatrix& s, double zero_tol) {
  if (!(zero_tol >= 0.0)) throw DomainError("kernel_basis: zero_tol must be >= 0");
  const auto eig = eigensym(s);
  return select_columns(eig, [&](double x) { return std::abs(x) <= zero_tol; });
}

Matrix kernel_basis(const SymMatrix& s) { return kernel_basis(s, default_zero_tol(s)); }

int intersection_dim(const Matrix& u, const Matrix& w, double rank_tol) {
  if (u.cols() == 0 || w.cols() == 0) return 0;
  if (u.rows() != w.rows()) throw DomainError("intersection_dim: ambient dimensions differ");
  // Residual of U after projecting onto span(W); its Gram matrix has the
  // squared sines of the principal angles as eigenvalues.
  const Matrix wt_u = w.transposed() * u;
  Matrix residual = u;
  const Matrix proj = w * wt_u;
  for (std::size_t i = 0; i < residual.rows(); ++i) {
    for (std::size_t j = 0; j < residual.cols(); ++j) residual(i, j) -= proj(i, j);
  }
  const SymMatrix gram = SymMatrix::from_matrix(residual.transposed() * residual);
  int count = 0;
  for (double x : eigenvalues(gram)) {
    if (x <= rank_tol) ++count;
  }
  return count;
}

int rel_morse(const SymMatrix& s, const SymMatrix& t, KernelSide kernel_side) {
  if (s.dim() != t.dim()) {
    throw DomainError("rel_morse: dimension mismatch (" + std::to_string(s.dim()) + " vs " +
                      std::to_string(t.dim()) + ")");
  }
  const auto es = eigensym(s);
  const auto et = eigensym(t);
  const double tol_s = default_zero_tol(s);
  const double tol_t = default_zero_tol(t);

  auto negative_space = [&](const EigenDecomposition& e, double tol) {
    if (kernel_side == KernelSide::negative) {
      return select_columns(e, [&](double x) { return x <= tol; });
    }
    return select_columns(e, [&](double x) { return x < -tol; });
  };
  auto positive_space = [&](const EigenDecomposition& e, double tol) {
    if (kernel_side == KernelSide::negative) {
      return select_columns(e, [&](double x) { return x > tol; });
    }
    return select_columns(e, [&](double x) { return x >= -tol; });
  };

  const int forward = intersection_dim(negative_space(es, tol_s), positive_space(et, tol_t));
  const int backward = intersection_dim(negative_space(et, tol_t), positive_space(es, tol_s));
  return forward - backward;
}

SymMatrix congruence(const SymMatrix& s, const Matrix& m) {
  if (m.rows() != s.dim()) throw DomainError("congruence: dimension mismatch");
  return SymMatrix::from_matrix(m.transposed() * (s.to_matrix() * m));
}

SymMatrix block_diag(const SymMatrix& s, const SymMatrix& t) {
  const std::size_t n = s.dim() + t.dim();
  SymMatrix out(n);
  for (std::size_t i = 0; i < s.dim(); ++i) {
    for (std::size_t j = i; j < s.dim(); ++j) out.set(i, j, s(i, j));
  }
  for (std::size_t i = 0; i < t.dim(); ++i) {
    for (std::size_t j = i; j < t.dim(); ++j) out.set(s.dim() + i, s.dim() + j, t(i, j));
  }
  return out;
}

bool is_psd(const SymMatrix& s, double tol) {
  const auto values = eigenvalues(s);
  return values.empty() || values.front() >= -tol;
}

double spectral_norm(const SymMatrix& s) {
  const auto values = eigenvalues(s);
  if (values.empty()) return 0.0;
  return std::max(std::abs(values.front()), std::abs(values.back()));
}

}  // namespace sfbif
