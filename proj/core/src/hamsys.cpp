#include "sfbif/hamsys.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sfbif {

Matrix symplectic_matrix(std::size_t n) {
  Matrix s(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    s(i, n + i) = -1.0;
    s(n + i, i) = 1.0;
  }
  return s;
}

SymMatrix lk_matrix(const SymMatrix& a, int k) {
  if (a.dim() % 2 != 0) throw DomainError("lk_matrix: A must have even dimension");
  if (k < 0) throw DomainError("lk_matrix: k must be >= 0");
  const std::size_t d = a.dim();
  const Matrix sigma = symplectic_matrix(d / 2);
  const double scale = k == 0 ? 1.0 : 1.0 / k;
  SymMatrix l(2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      l.set(i, j, scale * a(i, j));
      l.set(d + i, d + j, scale * a(i, j));
    }
  }
  if (k > 0) {
    // Upper-right block sigma; the lower-left block -sigma is its transpose.
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        if (sigma(i, j) != 0.0) l.set(i, d + j, sigma(i, j));
      }
    }
  }
  return l;
}

int index_truncation(const SymMatrix& a) {
  return static_cast<int>(std::ceil(spectral_norm(a))) + 1;
}

IndexResult hamiltonian_index(const SymMatrix& a, double zero_tol) {
  if (a.dim() % 2 != 0 || a.dim() == 0) {
    throw DomainError("hamiltonian_index: A must have positive even dimension");
  }
  IndexResult result;
  result.k_max = index_truncation(a);
  int doubled = 0;  // 4 * i(A)
  for (int k = 0; k <= result.k_max; ++k) {
    const SymMatrix l = lk_matrix(a, k);
    const Inertia in = inertia(l, default_zero_tol(l, zero_tol));
    if (in.zero > 0) result.resonant = true;
    result.signatures.push_back(in.signature());
    doubled += k == 0 ? in.signature() : 2 * in.signature();
  }
  if (!result.resonant) result.value = doubled / 4;
  return result;
}

bool is_nonresonant(const SymMatrix& a, double zero_tol) {
  return !hamiltonian_index(a, zero_tol).resonant;
}

int index_difference(const SymMatrix& a_start, const SymMatrix& a_end) {
  const auto start = hamiltonian_index(a_start);
  const auto end = hamiltonian_index(a_end);
  if (start.resonant) throw DomainError("index_difference: start coefficient is resonant");
  if (end.resonant) throw DomainError("index_difference: end coefficient is resonant");
  return *end.value - *start.value;
}

EigRange eig_range(const TimePeriodicCoeff& coeff, std::size_t t_samples) {
  if (t_samples < 4 * coeff.harmonics() + 4) {
    throw DomainError("eig_range: t_samples must be >= 4M + 4 = " +
                      std::to_string(4 * coeff.harmonics() + 4));
  }
  EigRange range;
  range.spacing = 2.0 * std::numbers::pi / static_cast<double>(t_samples);
  range.alpha = INFINITY;
  range.beta = -INFINITY;
  const std::size_t steps = coeff.is_constant() ? 1 : t_samples;
  for (std::size_t j = 0; j < steps; ++j) {
    const auto values = eigenvalues(coeff.evaluate(range.spacing * static_cast<double>(j)));
    range.alpha = std::min(range.alpha, values.front());
    range.beta = std::max(range.beta, values.back());
  }
  return range;
}

long long delta(double mu, double nu) {
  if (mu <= nu) return static_cast<long long>(std::ceil(nu) - std::ceil(mu));
  return -static_cast<long long>(std::ceil(mu) - std::ceil(nu));
}

long long delta_right_closed(double mu, double nu) {
  if (mu <= nu) return static_cast<long long>(std::floor(nu) - std::floor(mu));
  return -static_cast<long long>(std::floor(mu) - std::floor(nu));
}

namespace {

bool near_integer(double x) {
  return std::abs(x - std::round(x)) <= 1e-8 * std::max(1.0, std::abs(x));
}

}  // namespace

CoefficientBounds coefficient_bounds(const HamiltonianPath& path,
                                     const CoefficientBoundsOptions& options) {
  CoefficientBounds out;
  out.start = eig_range(path.at(path.lower()), options.t_samples);
  out.end = eig_range(path.at(path.upper()), options.t_samples);
  const double a0 = out.start.alpha, b0 = out.start.beta;
  const double a1 = out.end.alpha, b1 = out.end.beta;
  const auto two_n = static_cast<long long>(2 * path.half_dim());

  out.sandwich_low = two_n * delta(b0, a1);
  out.sandwich_high = two_n * delta(a0, b1);

  if (b0 < a1) {
    out.bound_case = BoundCase::increasing;
    out.lower_bound = delta(b0, a1);
    out.alt_lower_bound = delta_right_closed(b0, a1);
  } else if (b1 < a0) {
    out.bound_case = BoundCase::decreasing;
    out.lower_bound = -delta(a0, b1);
    out.alt_lower_bound = -delta_right_closed(a0, b1);
  } else {
    out.notes.push_back("eigenvalue ranges at the endpoints overlap; no lower bound");
  }
  out.near_integer = near_integer(a0) || near_integer(b0) || near_integer(a1) || near_integer(b1);
  if (out.near_integer) {
    out.notes.push_back("an eigenvalue bound lies within tolerance of an integer; "
                        "alt_lower_bound uses the right-closed count");
  }

  if (options.with_galerkin) {
    out.galerkin = galerkin_sf(path, options.truncation_start, options.truncation_cap);
    const int sf = out.galerkin->sf;
    out.sandwich_holds = out.sandwich_low <= sf && sf <= out.sandwich_high;
  }
  return out;
}

}  // namespace sfbif
