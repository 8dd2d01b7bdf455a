#pragma once

// Periodic Hamiltonian systems  sigma u' + A_lambda(t) u = 0,  u(0) = u(2 pi).
//
// The Hessian of the action functional at the stationary solution is the
// quadratic form
//     Q(u, v) = int <sigma u', v> dt + int <A(t) u, v> dt
// on H^{1/2}(S^1, R^{2n}). Truncating to Fourier modes |k| <= N gives a
// symmetric matrix whose Morse index differences compute the spectral flow.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sfbif/errors.hpp"
#include "sfbif/sfpath.hpp"
#include "sfbif/symlin.hpp"

namespace sfbif {

/// Standard symplectic matrix [[0, -Id_n], [Id_n, 0]] of size 2n.
Matrix symplectic_matrix(std::size_t n);

/// L^0(A) = diag(A, A);  L^k(A) = [[A/k, sigma], [-sigma, A/k]] for k >= 1.
SymMatrix lk_matrix(const SymMatrix& a, int k);

/// ceil(||A||_2) + 1; every L^k(A) with k >= this has signature zero.
int index_truncation(const SymMatrix& a);

struct IndexResult {
  /// Withheld when A is resonant.
  std::optional<int> value;
  int k_max = 0;
  /// sgn L^k(A) for k = 0..k_max.
  std::vector<int> signatures;
  bool resonant = false;
};

/// i(A) = sgn(L^0(A)) / 4 + (1/2) sum_{k >= 1} sgn L^k(A).
IndexResult hamiltonian_index(const SymMatrix& a, double zero_tol = kDefaultRelativeZeroTol);

/// A invertible and every L^k(A), 1 <= k <= k_max, invertible; equivalently
/// the spectrum of sigma A avoids i*Z.
bool is_nonresonant(const SymMatrix& a, double zero_tol = kDefaultRelativeZeroTol);

/// i(A_end) - i(A_start). Throws DomainError when either end is resonant.
int index_difference(const SymMatrix& a_start, const SymMatrix& a_end);

/// A(t) = A0 + sum_{m=1}^{M} cos(m t) C_m + sin(m t) S_m, period 2 pi.
class TimePeriodicCoeff {
 public:
  TimePeriodicCoeff() = default;
  /// Shorter harmonic lists are zero-padded to a common length M.
  explicit TimePeriodicCoeff(SymMatrix mean, std::vector<SymMatrix> cos_terms = {},
                             std::vector<SymMatrix> sin_terms = {});

  std::size_t dim() const { return mean_.dim(); }
  std::size_t half_dim() const { return mean_.dim() / 2; }
  std::size_t harmonics() const { return cos_.size(); }

  const SymMatrix& mean() const { return mean_; }
  /// Harmonic m = 1..M.
  const SymMatrix& cos_term(std::size_t m) const { return cos_[m - 1]; }
  const SymMatrix& sin_term(std::size_t m) const { return sin_[m - 1]; }

  SymMatrix evaluate(double t) const;
  bool is_constant() const;
  TimePeriodicCoeff padded(std::size_t harmonics) const;

  /// (1 - w) x + w y, coefficientwise.
  static TimePeriodicCoeff blend(const TimePeriodicCoeff& x, const TimePeriodicCoeff& y, double w);

  friend bool operator==(const TimePeriodicCoeff&, const TimePeriodicCoeff&) = default;

 private:
  SymMatrix mean_;
  std::vector<SymMatrix> cos_;
  std::vector<SymMatrix> sin_;
};

/// lambda -> A_lambda(t), entrywise affine in lambda between samples.
class HamiltonianPath {
 public:
  HamiltonianPath(std::vector<double> lambdas, std::vector<TimePeriodicCoeff> samples);
  static HamiltonianPath segment(double a, double b, TimePeriodicCoeff start, TimePeriodicCoeff end);
  static HamiltonianPath constant_coefficients(double a, double b, const SymMatrix& start,
                                               const SymMatrix& end);

  double lower() const { return lambdas_.front(); }
  double upper() const { return lambdas_.back(); }
  std::size_t half_dim() const { return samples_.front().half_dim(); }
  std::size_t harmonics() const { return samples_.front().harmonics(); }
  const std::vector<double>& lambdas() const { return lambdas_; }
  const std::vector<TimePeriodicCoeff>& samples() const { return samples_; }

  TimePeriodicCoeff at(double lambda) const;

 private:
  std::vector<double> lambdas_;
  std::vector<TimePeriodicCoeff> samples_;
};

/// Basis order: constant block (2n), then for k = 1..N the sin-k block (2n)
/// followed by the cos-k block (2n).
struct GalerkinHessian {
  int truncation = 0;
  std::size_t half_dim = 0;
  SymMatrix q;

  static std::size_t constant_offset() { return 0; }
  std::size_t sin_offset(int k) const { return 2 * half_dim * (2 * static_cast<std::size_t>(k) - 1); }
  std::size_t cos_offset(int k) const { return 2 * half_dim * 2 * static_cast<std::size_t>(k); }
};

/// Exact quadratic-form matrix on the modes |k| <= N. Requires N >= M.
GalerkinHessian assemble_hessian(const TimePeriodicCoeff& coeff, int truncation);

/// lambda -> Q_N(A_lambda); affine between the path samples.
OperatorPath galerkin_path(const HamiltonianPath& path, int truncation);

/// max(M, ceil(2 sup ||A_lambda(t)||_2), 1).
int default_truncation_start(const HamiltonianPath& path);

struct GalerkinSfResult {
  int sf = 0;
  int truncation = 0;
  /// (N, sf) for every truncation tried.
  std::vector<std::pair<int, int>> trace;
  bool admissible_start = false;
  bool admissible_end = false;
};

class StabilizationError : public NumericalError {
 public:
  StabilizationError(const std::string& what, std::vector<std::pair<int, int>> trace)
      : NumericalError(what), trace_(std::move(trace)) {}
  const std::vector<std::pair<int, int>>& trace() const { return trace_; }

 private:
  std::vector<std::pair<int, int>> trace_;
};

/// Extended spectral flow of the truncated Hessian path, doubling N from
/// `start` until two consecutive truncations agree. Throws
/// StabilizationError once N would exceed `cap`.
GalerkinSfResult galerkin_sf(const HamiltonianPath& path, std::optional<int> start = std::nullopt,
                             int cap = 512, double zero_tol = kDefaultRelativeZeroTol);

struct EigRange {
  double alpha = 0.0;  ///< min over the t grid of the smallest eigenvalue
  double beta = 0.0;   ///< max over the t grid of the largest eigenvalue
  double spacing = 0.0;
};

/// Uniform t grid of `t_samples` points on [0, 2 pi); needs t_samples >= 4M + 4.
EigRange eig_range(const TimePeriodicCoeff& coeff, std::size_t t_samples = 1024);

/// Signed count of integers in the half-open interval between mu and nu:
/// #{i : mu <= i < nu} if mu <= nu, else -#{i : nu <= i < mu}.
long long delta(double mu, double nu);

/// Same count with the interval closed on the right: #{i : mu < i <= nu}.
long long delta_right_closed(double mu, double nu);

enum class BoundCase { increasing, decreasing, none };

struct CoefficientBoundsOptions {
  std::size_t t_samples = 1024;
  bool with_galerkin = true;
  std::optional<int> truncation_start;
  int truncation_cap = 512;
};

struct CoefficientBounds {
  EigRange start;  ///< (alpha_0, beta_0) at lambda = a
  EigRange end;    ///< (alpha_1, beta_1) at lambda = b
  BoundCase bound_case = BoundCase::none;
  /// Lower bound on the number of bifurcation points; 0 when no case applies.
  long long lower_bound = 0;
  long long sandwich_low = 0;   ///< 2n Delta(beta_0, alpha_1)
  long long sandwich_high = 0;  ///< 2n Delta(alpha_0, beta_1)
  std::optional<GalerkinSfResult> galerkin;
  std::optional<bool> sandwich_holds;
  /// Some alpha/beta lies within tolerance of an integer, where the half-open
  /// convention matters; `alt_lower_bound` uses the right-closed count.
  bool near_integer = false;
  long long alt_lower_bound = 0;
  std::vector<std::string> notes;
};

CoefficientBounds coefficient_bounds(const HamiltonianPath& path,
                                     const CoefficientBoundsOptions& options = {});

}  // namespace sfbif
