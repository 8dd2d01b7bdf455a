#include <algorithm>
#include <cmath>
#include <string>

#include "sfbif/errors.hpp"
#include "sfbif/sfpath.hpp"

namespace sfbif {

namespace {

double domain_slack(double a, double b) {
  return 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

void check_same_dims(const std::vector<SymMatrix>& matrices) {
  for (std::size_t k = 1; k < matrices.size(); ++k) {
    if (matrices[k].dim() != matrices[0].dim()) {
      throw DomainError("OperatorPath: sample " + std::to_string(k) + " has dimension " +
                        std::to_string(matrices[k].dim()) + ", expected " +
                        std::to_string(matrices[0].dim()));
    }
  }
}

SymMatrix lerp(const SymMatrix& x, const SymMatrix& y, double t) {
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  const std::size_t n = x.dim();
  std::vector<double> entries(n * n);
  const auto xd = x.data();
  const auto yd = y.data();
  for (std::size_t k = 0; k < entries.size(); ++k) entries[k] = (1.0 - t) * xd[k] + t * yd[k];
  return SymMatrix(n, std::move(entries));
}

std::vector<double> merged_knots(std::span<const double> x, std::span<const double> y) {
  std::vector<double> out(x.begin(), x.end());
  out.insert(out.end(), y.begin(), y.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

struct OperatorPath::Impl {
  double a = 0.0;
  double b = 1.0;
  std::size_t dim = 0;
  bool smooth = false;
  std::vector<double> lambdas;
  std::vector<SymMatrix> samples;
  Rule rule;
  std::vector<double> knots;

  SymMatrix eval(double lambda) const {
    const double slack = domain_slack(a, b);
    if (!(lambda >= a - slack && lambda <= b + slack)) {
      throw DomainError("OperatorPath: lambda " + std::to_string(lambda) + " outside [" +
                        std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    lambda = std::clamp(lambda, a, b);
    if (lambdas.empty()) {
      SymMatrix s = rule(lambda);
      if (s.dim() != dim) {
        throw DomainError("OperatorPath: rule returned dimension " + std::to_string(s.dim()) +
                          ", expected " + std::to_string(dim));
      }
      return s;
    }
    auto it = std::lower_bound(lambdas.begin(), lambdas.end(), lambda);
    std::size_t hi = static_cast<std::size_t>(it - lambdas.begin());
    if (hi < lambdas.size() && lambdas[hi] == lambda) return samples[hi];
    if (hi == 0) return samples.front();
    if (hi == lambdas.size()) return samples.back();
    const std::size_t lo = hi - 1;
    const double t = (lambda - lambdas[lo]) / (lambdas[hi] - lambdas[lo]);
    return lerp(samples[lo], samples[hi], t);
  }
};

OperatorPath::OperatorPath(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

OperatorPath OperatorPath::with_knots(std::vector<double> knots) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->knots = std::move(knots);
  return OperatorPath(std::move(impl));
}

OperatorPath OperatorPath::from_samples(std::vector<double> lambdas,
                                        std::vector<SymMatrix> matrices) {
  if (lambdas.size() < 2) throw DomainError("OperatorPath: a grid needs at least 2 samples");
  if (lambdas.size() != matrices.size()) {
    throw DomainError("OperatorPath: " + std::to_string(lambdas.size()) + " parameters but " +
                      std::to_string(matrices.size()) + " matrices");
  }
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!std::isfinite(lambdas[k])) throw DomainError("OperatorPath: non-finite parameter");
    if (k > 0 && !(lambdas[k] > lambdas[k - 1])) {
      throw DomainError("OperatorPath: parameters must be strictly increasing (index " +
                        std::to_string(k) + ")");
    }
  }
  check_same_dims(matrices);
  if (matrices[0].dim() == 0) throw DomainError("OperatorPath: dimension must be positive");
  auto impl = std::make_shared<Impl>();
  impl->a = lambdas.front();
  impl->b = lambdas.back();
  impl->dim = matrices[0].dim();
  impl->smooth = lambdas.size() == 2;
  impl->knots = lambdas;
  impl->lambdas = std::move(lambdas);
  impl->samples = std::move(matrices);
  return OperatorPath(std::move(impl));
}

OperatorPath OperatorPath::analytic(double a, double b, std::size_t dim, Rule rule, bool smooth) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("OperatorPath: domain must be a finite interval with a < b");
  }
  if (dim == 0) throw DomainError("OperatorPath: dimension must be positive");
  if (!rule) throw DomainError("OperatorPath: empty evaluation rule");
  auto impl = std::make_shared<Impl>();
  impl->a = a;
  impl->b = b;
  impl->dim = dim;
  impl->smooth = smooth;
  impl->rule = std::move(rule);
  return OperatorPath(std::move(impl));
}

OperatorPath OperatorPath::affine(double a, double b, SymMatrix base, SymMatrix slope) {
  if (base.dim() != slope.dim()) throw DomainError("OperatorPath::affine: dimension mismatch");
  const std::size_t n = base.dim();
  return analytic(
      a, b, n,
      [base = std::move(base), slope = std::move(slope)](double lambda) {
        return base + lambda * slope;
      },
      true).with_knots({a, b});
}

OperatorPath OperatorPath::segment(double a, double b, SymMatrix start, SymMatrix end) {
  return from_samples({a, b}, {std::move(start), std::move(end)});
}

OperatorPath OperatorPath::constant(double a, double b, SymMatrix value) {
  const std::size_t n = value.dim();
  return analytic(a, b, n, [value = std::move(value)](double) { return value; }, true).with_knots({a, b});
}

double OperatorPath::lower() const { return impl_->a; }
double OperatorPath::upper() const { return impl_->b; }
std::size_t OperatorPath::dim() const { return impl_->dim; }
bool OperatorPath::smooth() const { return impl_->smooth; }
bool OperatorPath::is_grid() const { return !impl_->lambdas.empty(); }
std::span<const double> OperatorPath::grid() const { return impl_->lambdas; }
bool OperatorPath::piecewise_affine() const { return !impl_->knots.empty(); }
std::span<const double> OperatorPath::knots() const { return impl_->knots; }

SymMatrix OperatorPath::evaluate(double lambda) const { return impl_->eval(lambda); }

OperatorPath OperatorPath::restricted(double c, double d) const {
  const double slack = domain_slack(lower(), upper());
  if (!(c < d) || c < lower() - slack || d > upper() + slack) {
    throw DomainError("OperatorPath::restricted: [" + std::to_string(c) + ", " +
                      std::to_string(d) + "] not inside the domain");
  }
  c = std::max(c, lower());
  d = std::min(d, upper());
  auto parent = impl_;
  OperatorPath out = analytic(
      c, d, dim(), [parent](double lambda) { return parent->eval(lambda); }, smooth());
  if (!piecewise_affine()) return out;
  std::vector<double> knots{c};
  for (double k : impl_->knots) {
    if (k > c && k < d) knots.push_back(k);
  }
  knots.push_back(d);
  return out.with_knots(std::move(knots));
}

OperatorPath concat(const OperatorPath& p, const OperatorPath& q) {
  if (p.dim() != q.dim()) throw DomainError("concat: dimension mismatch");
  const double c = p.upper();
  if (std::abs(c - q.lower()) > domain_slack(c, q.lower())) {
    throw DomainError("concat: junction mismatch, p ends at " + std::to_string(c) +
                      " but q starts at " + std::to_string(q.lower()));
  }
  const SymMatrix left = p.end();
  const SymMatrix right = q.start();
  const double tol = 1e-12 * std::max({1.0, left.max_abs(), right.max_abs()});
  if ((left - right).max_abs() > tol) {
    throw DomainError("concat: paths disagree at the junction lambda = " + std::to_string(c));
  }
  if (p.is_grid() && q.is_grid()) {
    std::vector<double> lambdas(p.grid().begin(), p.grid().end());
    std::vector<SymMatrix> mats;
    for (double l : lambdas) mats.push_back(p.evaluate(l));
    for (std::size_t k = 1; k < q.grid().size(); ++k) {
      lambdas.push_back(q.grid()[k]);
      mats.push_back(q.evaluate(q.grid()[k]));
    }
    return OperatorPath::from_samples(std::move(lambdas), std::move(mats));
  }
  OperatorPath out = OperatorPath::analytic(
      p.lower(), q.upper(), p.dim(),
      [p, q, c](double lambda) { return lambda <= c ? p.evaluate(lambda) : q.evaluate(lambda); },
      false);
  if (!p.piecewise_affine() || !q.piecewise_affine()) return out;
  return out.with_knots(merged_knots(p.knots(), q.knots()));
}

OperatorPath reverse(const OperatorPath& p) {
  const double a = p.lower();
  const double b = p.upper();
  if (p.is_grid()) {
    const auto g = p.grid();
    std::vector<double> lambdas(g.size());
    std::vector<SymMatrix> mats;
    mats.reserve(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      const std::size_t src = g.size() - 1 - k;
      lambdas[k] = (k == 0) ? a : (k + 1 == g.size() ? b : a + b - g[src]);
      mats.push_back(p.evaluate(g[src]));
    }
    return OperatorPath::from_samples(std::move(lambdas), std::move(mats));
  }
  OperatorPath out = OperatorPath::analytic(
      a, b, p.dim(), [p, a, b](double lambda) { return p.evaluate(std::clamp(a + b - lambda, a, b)); },
      p.smooth());
  if (!p.piecewise_affine()) return out;
  std::vector<double> knots;
  for (double k : p.knots()) knots.push_back(std::clamp(a + b - k, a, b));
  std::sort(knots.begin(), knots.end());
  return out.with_knots(std::move(knots));
}

OperatorPath direct_sum(const OperatorPath& p, const OperatorPath& q) {
  const double slack = domain_slack(p.lower(), p.upper());
  if (std::abs(p.lower() - q.lower()) > slack || std::abs(p.upper() - q.upper()) > slack) {
    throw DomainError("direct_sum: domain mismatch");
  }
  const bool same_grid = p.is_grid() && q.is_grid() && p.grid().size() == q.grid().size() &&
                         std::equal(p.grid().begin(), p.grid().end(), q.grid().begin());
  if (same_grid) {
    std::vector<double> lambdas(p.grid().begin(), p.grid().end());
    std::vector<SymMatrix> mats;
    for (double l : lambdas) mats.push_back(block_diag(p.evaluate(l), q.evaluate(l)));
    return OperatorPath::from_samples(std::move(lambdas), std::move(mats));
  }
  OperatorPath out = OperatorPath::analytic(
      p.lower(), p.upper(), p.dim() + q.dim(),
      [p, q](double lambda) { return block_diag(p.evaluate(lambda), q.evaluate(lambda)); },
      p.smooth() && q.smooth());
  if (!p.piecewise_affine() || !q.piecewise_affine()) return out;
  return out.with_knots(merged_knots(p.knots(), q.knots()));
}

}  // namespace sfbif
