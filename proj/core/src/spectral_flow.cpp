#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "sfbif/errors.hpp"
#include "sfbif/sfpath.hpp"

namespace sfbif {

namespace {

constexpr int kMaxBisections = 60;
// Safety factor on the quadratic model of a curved path over one cell; cubic
// and higher terms are not modelled.
constexpr double kCurvedSlack = 2.0;
constexpr double kFormRelativeTol = 1e-6;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

struct Sample {
  double lambda = 0.0;
  SymMatrix mat;
  std::vector<double> eig;
  double tol = 0.0;
  int neg_raw = 0;    // eigenvalues < 0
  int neg_shift = 0;  // eigenvalues < -tol, the Morse index of L + delta
  int zero = 0;
  double min_abs = 0.0;

  bool singular() const { return zero > 0; }
};

class Sampler {
 public:
  Sampler(const OperatorPath& path, double rel_tol, std::size_t budget)
      : path_(path), rel_tol_(rel_tol), budget_(budget) {}

  Sample at(double lambda) {
    if (++count_ > budget_) {
      throw NumericalError("locate_crossings: evaluation budget of " + std::to_string(budget_) +
                           " exhausted; refine the grid or loosen eps_lambda");
    }
    Sample s;
    s.lambda = lambda;
    s.mat = path_.evaluate(lambda);
    s.eig = eigenvalues(s.mat);
    s.tol = default_zero_tol(s.mat, rel_tol_);
    s.min_abs = s.eig.empty() ? 0.0 : std::abs(s.eig.front());
    for (double e : s.eig) {
      if (e < 0.0) ++s.neg_raw;
      if (e < -s.tol) ++s.neg_shift;
      if (std::abs(e) <= s.tol) ++s.zero;
      s.min_abs = std::min(s.min_abs, std::abs(e));
    }
    return s;
  }

  std::size_t count() const { return count_; }

 private:
  const OperatorPath& path_;
  double rel_tol_;
  std::size_t budget_;
  std::size_t count_ = 0;
};

struct Leaf {
  double lo;
  double hi;
  bool plateau_top;
};

struct Interval {
  double lo;
  double hi;
};

class Refiner {
 public:
  Refiner(const OperatorPath& path, Sampler& sampler, double eps)
      : knots_(path.knots()), sampler_(sampler), eps_(eps) {}

  // By Weyl, each eigenvalue moves by at most ||L(x) - L(l)||_2 <= t ||D||_F
  // on an affine piece, so no eigenvalue reaches zero on [l, r] when
  // |e(l)|min + |e(r)|min > ||D||_F.
  void half(const Sample& l, const Sample& r, int depth) {
    if (!l.singular() && !r.singular() && affine_between(l.lambda, r.lambda)) {
      const double variation = (r.mat - l.mat).frobenius_norm();
      if (l.min_abs + r.min_abs > variation * (1.0 + 1e-9)) return;
    }
    if (r.lambda - l.lambda <= eps_ || depth >= kMaxBisections) {
      if (l.neg_raw != r.neg_raw || l.singular() || r.singular()) {
        leaves.push_back({l.lambda, r.lambda, false});
      }
      return;
    }
    cell(l, r, depth);
  }

  void cell(const Sample& l, const Sample& r, int depth) {
    const bool curved = knots_.empty();
    const Sample m = sampler_.at(split_point(l.lambda, r.lambda));
    if (l.singular() && m.singular() && r.singular() && l.zero == m.zero && m.zero == r.zero) {
      leaves.push_back({l.lambda, r.lambda, depth == 0});
      return;
    }
    if (curved && !l.singular() && !m.singular() && !r.singular()) {
      // Quadratic model: the path leaves each half-chord by at most a quarter
      // of the midpoint deviation from the full chord.
      SymMatrix chord_mid = l.mat + r.mat;
      chord_mid *= 0.5;
      const double bend = (m.mat - chord_mid).frobenius_norm();
      const double left = kCurvedSlack * ((m.mat - l.mat).frobenius_norm() + 0.5 * bend);
      const double right = kCurvedSlack * ((r.mat - m.mat).frobenius_norm() + 0.5 * bend);
      if (l.min_abs + m.min_abs > left && m.min_abs + r.min_abs > right) return;
    }
    half(l, m, depth + 1);
    half(m, r, depth + 1);
  }

  std::vector<Leaf> leaves;
  // Sub-intervals of width <= eps across which the raw Morse index changes.
  void index_changes(const Sample& l, const Sample& r, int depth, std::vector<Interval>& out) {
    if (l.neg_raw == r.neg_raw) return;
    if (r.lambda - l.lambda <= eps_ || depth >= kMaxBisections) {
      out.push_back({l.lambda, r.lambda});
      return;
    }
    const Sample m = sampler_.at(0.5 * (l.lambda + r.lambda));
    index_changes(l, m, depth + 1, out);
    index_changes(m, r, depth + 1, out);
  }

  // Golden-section search for the smallest |eigenvalue| on [lo, hi].
  double closest_to_singular(double lo, double hi) {
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = sampler_.at(x1).min_abs;
    double f2 = sampler_.at(x2).min_abs;
    for (int it = 0; it < 200 && hi - lo > eps_; ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - ratio * (hi - lo);
        f1 = sampler_.at(x1).min_abs;
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + ratio * (hi - lo);
        f2 = sampler_.at(x2).min_abs;
      }
    }
    return 0.5 * (lo + hi);
  }

 private:
  // No knot strictly inside (lo, hi) of a piecewise affine path.
  bool affine_between(double lo, double hi) const {
    if (knots_.empty()) return false;
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), lo);
    return it == knots_.end() || *it >= hi;
  }

  // Interior knot nearest the midpoint, so that affine pieces separate
  // first; the midpoint otherwise.
  double split_point(double lo, double hi) const {
    const double mid = 0.5 * (lo + hi);
    double best = mid;
    double best_gap = hi - lo;
    for (auto it = std::upper_bound(knots_.begin(), knots_.end(), lo); it != knots_.end() && *it < hi; ++it) {
      if (std::abs(*it - mid) < best_gap) {
        best = *it;
        best_gap = std::abs(*it - mid);
      }
    }
    return best;
  }

  std::span<const double> knots_;
  Sampler& sampler_;
  double eps_;
};

struct Region {
  double lo;
  double hi;
  bool plateau;
  std::vector<Leaf> leaves;
};

std::vector<Region> merge_leaves(const std::vector<Leaf>& leaves, double eps) {
  std::vector<Region> regions;
  for (const Leaf& leaf : leaves) {
    if (!regions.empty() && leaf.lo - regions.back().hi <= 2.0 * eps) {
      Region& r = regions.back();
      r.hi = std::max(r.hi, leaf.hi);
      r.plateau = r.plateau || leaf.plateau_top;
      r.leaves.push_back(leaf);
    } else {
      regions.push_back({leaf.lo, leaf.hi, leaf.plateau_top, {leaf}});
    }
  }
  return regions;
}

CrossingForm form_from(const SymMatrix& derivative, const Matrix& kernel) {
  const SymMatrix form = congruence(derivative, kernel);
  const double tol = kFormRelativeTol * derivative.spectral_scale();
  const Inertia in = inertia(form, tol);
  return {form, in.signature(), in.zero == 0};
}

SymMatrix central_difference(const OperatorPath& path, double lambda0, double h) {
  const double a = path.lower();
  const double b = path.upper();
  if (!(h > 0.0)) throw DomainError("crossing_form: step must be positive");
  if (lambda0 - h < a || lambda0 + h > b) {
    throw DomainError("crossing_form: lambda0 +- h = [" + fmt(lambda0 - h) + ", " +
                      fmt(lambda0 + h) + "] leaves the domain [" + fmt(a) + ", " + fmt(b) + "]");
  }
  return (path.evaluate(lambda0 + h) - path.evaluate(lambda0 - h)) * (0.5 / h);
}

void require_smooth(const OperatorPath& path) {
  if (!path.smooth()) throw DomainError("crossing forms require a smooth path");
}

}  // namespace

std::pair<bool, bool> is_admissible(const OperatorPath& path, double zero_tol) {
  const SymMatrix la = path.start();
  const SymMatrix lb = path.end();
  return {inertia(la, default_zero_tol(la, zero_tol)).zero == 0,
          inertia(lb, default_zero_tol(lb, zero_tol)).zero == 0};
}

SpectralFlowResult extended_sf(const OperatorPath& path, double zero_tol) {
  const SymMatrix la = path.start();
  const SymMatrix lb = path.end();
  const auto ea = eigenvalues(la);
  const auto eb = eigenvalues(lb);
  const double tol_a = default_zero_tol(la, zero_tol);
  const double tol_b = default_zero_tol(lb, zero_tol);

  SpectralFlowResult result;
  result.admissible_start = inertia_of_eigenvalues(ea, tol_a).zero == 0;
  result.admissible_end = inertia_of_eigenvalues(eb, tol_b).zero == 0;
  result.grid_points_used = 2;

  double delta = 0.0;
  if (!result.admissible_start || !result.admissible_end) {
    delta = 1e-6 * std::max(la.spectral_scale(), lb.spectral_scale());
    auto shrink = [&](const std::vector<double>& values, double tol) {
      for (double e : values) {
        if (std::abs(e) > tol) delta = std::min(delta, 0.5 * std::abs(e));
      }
    };
    shrink(ea, tol_a);
    shrink(eb, tol_b);
  }
  result.shift_delta = delta;

  // Kernel eigenvalues are exactly zero before the shift.
  auto shifted_morse = [delta](const std::vector<double>& values, double tol) {
    int count = 0;
    for (double e : values) {
      const double snapped = std::abs(e) <= tol ? 0.0 : e;
      if (snapped + delta < 0.0) ++count;
    }
    return count;
  };
  result.total_sf = shifted_morse(ea, tol_a) - shifted_morse(eb, tol_b);
  return result;
}

CrossingScan locate_crossings(const OperatorPath& path, const ScanOptions& options) {
  if (options.n_grid < 2) throw DomainError("locate_crossings: n_grid must be >= 2");
  const double a = path.lower();
  const double b = path.upper();
  const double eps = options.eps_lambda.value_or(1e-8 * (b - a));
  if (!(eps > 0.0)) throw DomainError("locate_crossings: eps_lambda must be positive");

  Sampler sampler(path, options.zero_tol, options.max_evaluations);
  Refiner refiner(path, sampler, eps);

  const std::size_t n = options.n_grid;
  std::vector<Sample> grid;
  grid.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lambda =
        (i + 1 == n) ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    grid.push_back(sampler.at(lambda));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) refiner.half(grid[i], grid[i + 1], 0);

  CrossingScan scan;
  const auto regions = merge_leaves(refiner.leaves, eps);
  if (regions.empty()) {
    scan.evaluations = sampler.count();
    return scan;
  }

  // Kernel-free anchor points between consecutive regions. Local spectral
  // flows are Morse index differences between anchors, so they telescope.
  std::vector<Sample> anchors;
  anchors.push_back(grid.front());
  for (std::size_t r = 0; r + 1 < regions.size(); ++r) {
    const double gap_lo = regions[r].hi;
    const double gap_hi = regions[r + 1].lo;
    std::optional<Sample> chosen;
    for (double step = eps; gap_lo + step < gap_hi; step *= 2.0) {
      Sample s = sampler.at(gap_lo + step);
      if (!s.singular()) {
        chosen = std::move(s);
        break;
      }
    }
    anchors.push_back(chosen ? std::move(*chosen) : sampler.at(0.5 * (gap_lo + gap_hi)));
  }
  anchors.push_back(grid.back());

  for (std::size_t r = 0; r < regions.size(); ++r) {
    const Region& region = regions[r];
    std::vector<Interval> changes;
    for (const Leaf& leaf : region.leaves) {
      refiner.index_changes(sampler.at(leaf.lo), sampler.at(leaf.hi), 0, changes);
    }

    Crossing c;
    if (!changes.empty()) {
      c.lo = changes.front().lo;
      c.hi = changes.back().hi;
      c.lambda_est = 0.5 * (c.lo + c.hi);
    } else {
      c.lambda_est = refiner.closest_to_singular(region.lo, region.hi);
      c.lo = std::max(a, c.lambda_est - 0.5 * eps);
      c.hi = std::min(b, c.lambda_est + 0.5 * eps);
    }
    c.at_endpoint = region.lo - a <= eps || b - region.hi <= eps;
    c.isolated = !region.plateau;
    c.local_sf = anchors[r].neg_shift - anchors[r + 1].neg_shift;

    const Sample center = sampler.at(c.lambda_est);
    const double spread = (path.evaluate(c.hi) - path.evaluate(c.lo)).frobenius_norm();
    const double kernel_tol = std::max(center.tol, spread);
    int kernel = 0;
    for (double e : center.eig) {
      if (std::abs(e) <= kernel_tol) ++kernel;
    }
    c.kernel_dim = std::max(kernel, 1);

    if (path.smooth()) {
      const double h = default_derivative_step(path);
      if (c.lambda_est - h >= a && c.lambda_est + h <= b) {
        const CrossingForm form = crossing_form_on(path, c.lambda_est, c.kernel_dim, h);
        c.form_signature = form.signature;
        c.regular = form.regular;
      }
    }

    if (c.at_endpoint) {
      scan.notes.push_back("crossing at endpoint: kernel detected within eps_lambda of lambda = " +
                           fmt(region.lo - a <= eps ? a : b));
    }
    if (!c.isolated) {
      scan.notes.push_back("non-isolated singular set on [" + fmt(region.lo) + ", " +
                           fmt(region.hi) + "]");
    }
    scan.crossings.push_back(c);
  }
  scan.evaluations = sampler.count();
  return scan;
}

SpectralFlowResult spectral_flow(const OperatorPath& path, const ScanOptions& options) {
  SpectralFlowResult result = extended_sf(path, options.zero_tol);
  CrossingScan scan = locate_crossings(path, options);
  result.crossings = std::move(scan.crossings);
  result.notes = std::move(scan.notes);
  result.grid_points_used = scan.evaluations;
  return result;
}

double default_derivative_step(const OperatorPath& path) {
  return std::max(1e-5 * (path.upper() - path.lower()), 1e-7);
}

CrossingForm crossing_form(const OperatorPath& path, double lambda0, std::optional<double> h,
                           double zero_tol) {
  require_smooth(path);
  const SymMatrix at = path.evaluate(lambda0);
  const Matrix kernel = kernel_basis(at, default_zero_tol(at, zero_tol));
  if (kernel.cols() == 0) throw DomainError("not a crossing: trivial kernel at lambda = " + fmt(lambda0));
  const SymMatrix derivative =
      central_difference(path, lambda0, h.value_or(default_derivative_step(path)));
  return form_from(derivative, kernel);
}

CrossingForm crossing_form_on(const OperatorPath& path, double lambda0, int kernel_dim,
                              std::optional<double> h) {
  require_smooth(path);
  if (kernel_dim < 1) throw DomainError("not a crossing: kernel dimension must be >= 1");
  const auto eig = eigensym(path.evaluate(lambda0));
  std::vector<std::size_t> order(eig.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::abs(eig.values[i]) < std::abs(eig.values[j]);
  });
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(kernel_dim), order.size());
  Matrix kernel(eig.vectors.rows(), k);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < kernel.rows(); ++i) kernel(i, c) = eig.vectors(i, order[c]);
  }
  const SymMatrix derivative =
      central_difference(path, lambda0, h.value_or(default_derivative_step(path)));
  return form_from(derivative, kernel);
}

int sf_regular_sum(const OperatorPath& path, std::span<const Crossing> crossings) {
  require_smooth(path);
  int sum = 0;
  for (const Crossing& c : crossings) {
    int signature = 0;
    bool regular = false;
    if (c.form_signature && c.regular) {
      signature = *c.form_signature;
      regular = *c.regular;
    } else {
      const CrossingForm form = crossing_form_on(path, c.lambda_est, c.kernel_dim);
      signature = form.signature;
      regular = form.regular;
    }
    if (!regular) {
      throw DomainError("sf_regular_sum: crossing at lambda = " + fmt(c.lambda_est) +
                        " is not regular (degenerate crossing form)");
    }
    sum += signature;
  }
  return sum;
}

bool is_nondecreasing(const OperatorPath& path, std::size_t n_grid, double zero_tol) {
  if (n_grid < 2) throw DomainError("is_nondecreasing: n_grid must be >= 2");
  const double a = path.lower();
  const double b = path.upper();
  SymMatrix prev = path.start();
  for (std::size_t i = 1; i < n_grid; ++i) {
    const double lambda =
        (i + 1 == n_grid) ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n_grid - 1);
    SymMatrix next = path.evaluate(lambda);
    const double tol = zero_tol * std::max(prev.spectral_scale(), next.spectral_scale());
    if (!is_psd(next - prev, tol)) return false;
    prev = std::move(next);
  }
  return true;
}

ComparisonReport compare_paths(const OperatorPath& l, const OperatorPath& m, double zero_tol) {
  if (l.dim() != m.dim()) throw DomainError("compare_paths: dimension mismatch");
  const double slack = 1e-12 * std::max({1.0, std::abs(l.lower()), std::abs(l.upper())});
  if (std::abs(l.lower() - m.lower()) > slack || std::abs(l.upper() - m.upper()) > slack) {
    throw DomainError("compare_paths: domain mismatch");
  }
  const SymMatrix la = l.start();
  const SymMatrix lb = l.end();
  const SymMatrix ma = m.start();
  const SymMatrix mb = m.end();
  ComparisonReport report;
  report.start_ordered =
      is_psd(ma - la, zero_tol * std::max(la.spectral_scale(), ma.spectral_scale()));
  report.end_ordered =
      is_psd(lb - mb, zero_tol * std::max(lb.spectral_scale(), mb.spectral_scale()));
  report.hypothesis = report.start_ordered && report.end_ordered;
  report.sf_l = extended_sf(l, zero_tol).total_sf;
  report.sf_m = extended_sf(m, zero_tol).total_sf;
  report.conclusion = report.sf_m <= report.sf_l;
  return report;
}

}  // namespace sfbif
