#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sfbif/hamsys.hpp"

namespace sfbif {

TimePeriodicCoeff::TimePeriodicCoeff(SymMatrix mean, std::vector<SymMatrix> cos_terms,
                                     std::vector<SymMatrix> sin_terms)
    : mean_(std::move(mean)), cos_(std::move(cos_terms)), sin_(std::move(sin_terms)) {
  if (mean_.dim() == 0 || mean_.dim() % 2 != 0) {
    throw DomainError("TimePeriodicCoeff: dimension must be positive and even");
  }
  for (const auto* terms : {&cos_, &sin_}) {
    for (const auto& c : *terms) {
      if (c.dim() != mean_.dim()) throw DomainError("TimePeriodicCoeff: harmonic dimension mismatch");
    }
  }
  const std::size_t m = std::max(cos_.size(), sin_.size());
  cos_.resize(m, SymMatrix(mean_.dim()));
  sin_.resize(m, SymMatrix(mean_.dim()));
}

SymMatrix TimePeriodicCoeff::evaluate(double t) const {
  SymMatrix out = mean_;
  for (std::size_t m = 1; m <= cos_.size(); ++m) {
    const double x = static_cast<double>(m) * t;
    out += std::cos(x) * cos_[m - 1];
    out += std::sin(x) * sin_[m - 1];
  }
  return out;
}

bool TimePeriodicCoeff::is_constant() const {
  const auto zero = [](const SymMatrix& s) { return s.max_abs() == 0.0; };
  return std::all_of(cos_.begin(), cos_.end(), zero) && std::all_of(sin_.begin(), sin_.end(), zero);
}

TimePeriodicCoeff TimePeriodicCoeff::padded(std::size_t harmonics) const {
  TimePeriodicCoeff out = *this;
  if (harmonics > out.cos_.size()) {
    out.cos_.resize(harmonics, SymMatrix(dim()));
    out.sin_.resize(harmonics, SymMatrix(dim()));
  }
  return out;
}

TimePeriodicCoeff TimePeriodicCoeff::blend(const TimePeriodicCoeff& x, const TimePeriodicCoeff& y,
                                           double w) {
  if (x.dim() != y.dim()) throw DomainError("TimePeriodicCoeff::blend: dimension mismatch");
  const std::size_t m = std::max(x.harmonics(), y.harmonics());
  const TimePeriodicCoeff px = x.padded(m);
  const TimePeriodicCoeff py = y.padded(m);
  TimePeriodicCoeff out = px;
  out.mean_ = (1.0 - w) * px.mean_ + w * py.mean_;
  for (std::size_t k = 0; k < m; ++k) {
    out.cos_[k] = (1.0 - w) * px.cos_[k] + w * py.cos_[k];
    out.sin_[k] = (1.0 - w) * px.sin_[k] + w * py.sin_[k];
  }
  return out;
}

HamiltonianPath::HamiltonianPath(std::vector<double> lambdas, std::vector<TimePeriodicCoeff> samples)
    : lambdas_(std::move(lambdas)), samples_(std::move(samples)) {
  if (lambdas_.size() < 2 || lambdas_.size() != samples_.size()) {
    throw DomainError("HamiltonianPath: need at least two samples, one per lambda");
  }
  for (std::size_t i = 1; i < lambdas_.size(); ++i) {
    if (!(lambdas_[i] > lambdas_[i - 1])) {
      throw DomainError("HamiltonianPath: lambda grid must be strictly increasing");
    }
  }
  std::size_t m = 0;
  for (const auto& s : samples_) {
    if (s.dim() != samples_.front().dim()) throw DomainError("HamiltonianPath: dimension mismatch");
    m = std::max(m, s.harmonics());
  }
  for (auto& s : samples_) s = s.padded(m);
}

HamiltonianPath HamiltonianPath::segment(double a, double b, TimePeriodicCoeff start,
                                         TimePeriodicCoeff end) {
  return HamiltonianPath({a, b}, {std::move(start), std::move(end)});
}

HamiltonianPath HamiltonianPath::constant_coefficients(double a, double b, const SymMatrix& start,
                                                       const SymMatrix& end) {
  return segment(a, b, TimePeriodicCoeff(start), TimePeriodicCoeff(end));
}

TimePeriodicCoeff HamiltonianPath::at(double lambda) const {
  const double slack = 1e-12 * std::max(1.0, upper() - lower());
  if (lambda < lower() - slack || lambda > upper() + slack) {
    throw DomainError("HamiltonianPath: lambda outside the parameter interval");
  }
  lambda = std::clamp(lambda, lower(), upper());
  const auto it = std::upper_bound(lambdas_.begin(), lambdas_.end(), lambda);
  if (it == lambdas_.end()) return samples_.back();
  const std::size_t hi = static_cast<std::size_t>(it - lambdas_.begin());
  const std::size_t lo = hi - 1;
  if (lambda == lambdas_[lo]) return samples_[lo];
  const double w = (lambda - lambdas_[lo]) / (lambdas_[hi] - lambdas_[lo]);
  return TimePeriodicCoeff::blend(samples_[lo], samples_[hi], w);
}

namespace {

// coef * sin(freq t) or coef * cos(freq t), freq >= 0.
struct Trig {
  double coef;
  bool is_sin;
  int freq;
};

Trig normalized(double coef, bool is_sin, int freq) {
  if (freq < 0) return {is_sin ? -coef : coef, is_sin, -freq};
  return {coef, is_sin, freq};
}

std::array<Trig, 2> product(const Trig& x, const Trig& y) {
  const double c = 0.5 * x.coef * y.coef;
  const int d = x.freq - y.freq;
  const int s = x.freq + y.freq;
  if (!x.is_sin && !y.is_sin) return {normalized(c, false, d), normalized(c, false, s)};
  if (x.is_sin && y.is_sin) return {normalized(c, false, d), normalized(-c, false, s)};
  if (x.is_sin) return {normalized(c, true, s), normalized(c, true, d)};
  return {normalized(c, true, s), normalized(-c, true, d)};
}

double integral(const Trig& x) {
  return (!x.is_sin && x.freq == 0) ? 2.0 * std::numbers::pi * x.coef : 0.0;
}

double triple_integral(const Trig& x, const Trig& y, const Trig& z) {
  double total = 0.0;
  for (const Trig& xy : product(x, y)) {
    for (const Trig& t : product(xy, z)) total += integral(t);
  }
  return total;
}

struct Block {
  std::size_t offset;
  Trig phi;
};

}  // namespace

GalerkinHessian assemble_hessian(const TimePeriodicCoeff& coeff, int truncation) {
  if (truncation < 0) throw DomainError("assemble_hessian: truncation must be >= 0");
  if (static_cast<std::size_t>(truncation) < coeff.harmonics()) {
    throw DomainError("assemble_hessian: truncation N = " + std::to_string(truncation) +
                      " is below the number of harmonics M = " + std::to_string(coeff.harmonics()));
  }
  GalerkinHessian h;
  h.truncation = truncation;
  h.half_dim = coeff.half_dim();
  const std::size_t b = 2 * h.half_dim;
  const std::size_t dim = b * (2 * static_cast<std::size_t>(truncation) + 1);
  Matrix q(dim, dim);

  std::vector<Block> blocks{{0, {1.0, false, 0}}};
  for (int k = 1; k <= truncation; ++k) {
    blocks.push_back({h.sin_offset(k), {1.0, true, k}});
    blocks.push_back({h.cos_offset(k), {1.0, false, k}});
  }

  const auto add_block = [&](std::size_t row, std::size_t col, const SymMatrix& m, double w) {
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t j = 0; j < b; ++j) q(row + i, col + j) += w * m(i, j);
    }
  };

  // Coefficient term: int A_ij(t) phi_p(t) phi_q(t) dt.
  struct Term {
    Trig phi;
    const SymMatrix* matrix;
  };
  std::vector<Term> terms{{{1.0, false, 0}, &coeff.mean()}};
  for (std::size_t m = 1; m <= coeff.harmonics(); ++m) {
    const int f = static_cast<int>(m);
    if (coeff.cos_term(m).max_abs() != 0.0) terms.push_back({{1.0, false, f}, &coeff.cos_term(m)});
    if (coeff.sin_term(m).max_abs() != 0.0) terms.push_back({{1.0, true, f}, &coeff.sin_term(m)});
  }
  for (const Block& p : blocks) {
    for (const Block& r : blocks) {
      if (r.offset < p.offset) continue;
      for (const Term& t : terms) {
        const double w = triple_integral(t.phi, p.phi, r.phi);
        if (w != 0.0) add_block(p.offset, r.offset, *t.matrix, w);
      }
    }
  }
  // Lower triangle of blocks by symmetry.
  for (const Block& p : blocks) {
    for (const Block& r : blocks) {
      if (r.offset <= p.offset) continue;
      for (std::size_t i = 0; i < b; ++i) {
        for (std::size_t j = 0; j < b; ++j) q(r.offset + j, p.offset + i) = q(p.offset + i, r.offset + j);
      }
    }
  }

  // Symplectic term: int <sigma u', v>. With u = sin(kt) x, v = cos(kt) y it
  // gives k pi <sigma x, y>, and the sin/cos roles swapped give the negative.
  const Matrix sigma = symplectic_matrix(h.half_dim);
  for (int k = 1; k <= truncation; ++k) {
    const double w = k * std::numbers::pi;
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t j = 0; j < b; ++j) {
        q(h.cos_offset(k) + i, h.sin_offset(k) + j) += w * sigma(i, j);
        q(h.sin_offset(k) + i, h.cos_offset(k) + j) -= w * sigma(i, j);
      }
    }
  }
  h.q = SymMatrix::from_matrix(q);
  return h;
}

OperatorPath galerkin_path(const HamiltonianPath& path, int truncation) {
  std::vector<SymMatrix> matrices;
  matrices.reserve(path.samples().size());
  for (const auto& s : path.samples()) matrices.push_back(assemble_hessian(s, truncation).q);
  return OperatorPath::from_samples(path.lambdas(), std::move(matrices));
}

int default_truncation_start(const HamiltonianPath& path) {
  double sup = 0.0;
  const std::size_t t_samples = std::max<std::size_t>(1024, 4 * path.harmonics() + 4);
  // ||A_lambda(t)|| is convex along each affine piece, so the samples suffice.
  for (const auto& s : path.samples()) {
    const EigRange r = eig_range(s, t_samples);
    sup = std::max({sup, std::abs(r.alpha), std::abs(r.beta)});
  }
  const int m = static_cast<int>(path.harmonics());
  return std::max({m, static_cast<int>(std::ceil(2.0 * sup)), 1});
}

GalerkinSfResult galerkin_sf(const HamiltonianPath& path, std::optional<int> start, int cap,
                             double zero_tol) {
  int n = start.value_or(default_truncation_start(path));
  if (n < static_cast<int>(path.harmonics())) {
    throw DomainError("galerkin_sf: starting truncation is below the number of harmonics");
  }
  if (n < 1) n = 1;
  if (n > cap) {
    throw DomainError("galerkin_sf: starting truncation " + std::to_string(n) +
                      " exceeds the cap " + std::to_string(cap));
  }
  GalerkinSfResult result;
  for (;;) {
    const auto sf = extended_sf(galerkin_path(path, n), zero_tol);
    result.trace.emplace_back(n, sf.total_sf);
    result.admissible_start = sf.admissible_start;
    result.admissible_end = sf.admissible_end;
    const std::size_t k = result.trace.size();
    if (k >= 2 && result.trace[k - 1].second == result.trace[k - 2].second) {
      result.sf = sf.total_sf;
      result.truncation = n;
      return result;
    }
    if (n >= cap) break;
    n = std::min(2 * n, cap);
  }
  std::ostringstream msg;
  msg << "galerkin_sf: no stabilization up to N = " << cap << "; trace:";
  for (const auto& [nn, s] : result.trace) msg << " (N=" << nn << ", sf=" << s << ")";
  throw StabilizationError(msg.str(), result.trace);
}

}  // namespace sfbif
