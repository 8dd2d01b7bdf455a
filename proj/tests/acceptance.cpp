// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "golden.hpp"
#include "oracles.hpp"
#include "sfbif/bifurcate.hpp"
#include "sfbif/hamsys.hpp"
#include "sfbif/random.hpp"
#include "sfbif/sfpath.hpp"

using namespace sfbif;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure descriptions of a criterion.
class Tally {
 public:
  void check(bool ok, const std::function<std::string()>& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) messages_.push_back(what());
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream s;
    s << summary << "; " << checks_ << " checks, " << failures_ << " failures";
    for (const auto& m : messages_) s << "; " << m;
    return {failures_ == 0 && checks_ > 0, s.str()};
  }

 private:
  int checks_ = 0;
  int failures_ = 0;
  std::vector<std::string> messages_;
};

std::string str(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

int morse(const SymMatrix& s) { return inertia(s).neg; }

std::size_t pick_dim(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Curved smooth path L0 + lambda L1 + lambda^2 L2 on [0, 1].
OperatorPath quadratic_path(const SymMatrix& l0, const SymMatrix& l1, const SymMatrix& l2) {
  return OperatorPath::analytic(0.0, 1.0, l0.dim(), [=](double x) { return l0 + x * l1 + (x * x) * l2; });
}

// Curved path from a to b bending along `bend`.
OperatorPath bent_path(const SymMatrix& a, const SymMatrix& b, const SymMatrix& bend) {
  return quadratic_path(a, b - a - bend, bend);
}

Outcome criterion_axioms() {
  const auto r = verify_axioms(7, 500);
  Tally t;
  for (const auto& c : r.checks) {
    t.check(c.failures == 0 && c.trials >= 500, [&] { return c.name + " failed " + std::to_string(c.failures); });
  }
  t.check(r.passed, [&] { return "counterexample " + r.counterexample; });
  return t.outcome("seed 7, 500 trials per check, dims 2-8, 10 homotopy slices");
}

Outcome criterion_positivity_comparison() {
  Rng rng(101);
  Tally t;
  std::uniform_real_distribution<double> width(0.5, 3.0);
  for (int k = 0; k < 200; ++k) {
    const std::size_t dim = pick_dim(rng, 2, 8);
    const SymMatrix l0 = random_symmetric(rng, dim);
    const SymMatrix p = random_psd(rng, dim, pick_dim(rng, 0, dim));
    const auto path = OperatorPath::affine(0.0, width(rng), l0, p);
    const int sf = extended_sf(path).total_sf;
    t.check(sf >= 0, [&] { return "monotone path " + std::to_string(k) + " has sf " + std::to_string(sf); });
  }
  for (int k = 0; k < 200; ++k) {
    const std::size_t dim = pick_dim(rng, 2, 8);
    const SymMatrix la = random_symmetric(rng, dim);
    const SymMatrix lb = random_symmetric(rng, dim);
    // L_a <= M_a and M_b <= L_b by construction.
    const SymMatrix ma = la + random_psd(rng, dim, pick_dim(rng, 0, dim));
    const SymMatrix mb = lb - random_psd(rng, dim, pick_dim(rng, 0, dim));
    const auto l = OperatorPath::segment(0.0, 1.0, la, lb);
    const auto m = k % 2 == 0 ? OperatorPath::segment(0.0, 1.0, ma, mb)
                              : OperatorPath::analytic(0.0, 1.0, dim, [=](double x) {
                                  return (1 - x) * ma + x * mb + (x * (1 - x)) * la;
                                });
    const auto r = compare_paths(l, m);
    t.check(r.hypothesis, [&] { return "pair " + std::to_string(k) + " violates the generated hypothesis"; });
    t.check(r.sf_m <= r.sf_l, [&] {
      return "pair " + std::to_string(k) + ": sf(M) = " + std::to_string(r.sf_m) + " > sf(L) = " + std::to_string(r.sf_l);
    });
    t.check(r.conclusion == (r.sf_m <= r.sf_l), [&] { return "pair " + std::to_string(k) + " conclusion flag"; });
  }
  return t.outcome("200 monotone paths, 200 comparison pairs");
}

Outcome criterion_kernel_bound() {
  Rng rng(202);
  Tally t;
  int crossings = 0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t dim = pick_dim(rng, 2, 8);
    const SymMatrix a = random_invertible(rng, dim, 0.1);
    const SymMatrix b = random_invertible(rng, dim, 0.1);
    const OperatorPath path = k % 2 == 0 ? OperatorPath::segment(0.0, 1.0, a, b)
                                         : bent_path(a, b, 0.5 * random_symmetric(rng, dim));
    const auto r = spectral_flow(path);
    int sum = 0;
    for (const auto& c : r.crossings) {
      ++crossings;
      sum += c.local_sf;
      t.check(std::abs(c.local_sf) <= c.kernel_dim, [&] {
        return "path " + std::to_string(k) + " crossing at " + str(c.lambda_est) + ": local sf " +
               std::to_string(c.local_sf) + ", kernel " + std::to_string(c.kernel_dim);
      });
    }
    t.check(sum == r.total_sf, [&] { return "path " + std::to_string(k) + ": sum " + std::to_string(sum) + " != " + std::to_string(r.total_sf); });
    const int oracle_sf = morse(path.start()) - morse(path.end());
    t.check(r.total_sf == oracle_sf, [&] { return "path " + std::to_string(k) + ": total sf differs from endpoint Morse indices"; });
  }
  return t.outcome("200 paths, " + std::to_string(crossings) + " crossings");
}

Outcome criterion_crossing_forms() {
  Rng rng(303);
  Tally t;
  int generated = 0, positive = 0, discarded = 0;
  while (generated < 100) {
    const std::size_t dim = pick_dim(rng, 2, 8);
    const bool is_positive = generated % 2 == 1;
    const SymMatrix l0 = random_symmetric(rng, dim);
    // Positive paths have a positive definite derivative.
    const SymMatrix l1 = is_positive ? random_psd(rng, dim, dim) + SymMatrix::identity(dim) * 0.1 : random_symmetric(rng, dim);
    const SymMatrix l2 = is_positive ? SymMatrix(dim) : 0.3 * random_symmetric(rng, dim);
    const OperatorPath path = generated % 4 == 2 ? quadratic_path(l0, l1, l2) : OperatorPath::affine(0.0, 1.0, l0, l1);
    if (is_admissible(path) != std::pair{true, true}) {
      ++discarded;
      continue;
    }
    const auto r = spectral_flow(path);
    const bool all_regular = std::all_of(r.crossings.begin(), r.crossings.end(),
                                         [](const Crossing& c) { return c.regular == true; });
    if (!all_regular) {
      ++discarded;
      continue;
    }
    ++generated;
    const int sum = sf_regular_sum(path, r.crossings);
    const int oracle_sf = morse(path.start()) - morse(path.end());
    t.check(sum == r.total_sf && sum == oracle_sf, [&] {
      return "path " + std::to_string(generated) + ": signature sum " + std::to_string(sum) + ", sf " +
             std::to_string(r.total_sf) + ", endpoint oracle " + std::to_string(oracle_sf);
    });
    if (is_positive) {
      ++positive;
      int kernels = 0;
      for (const auto& c : r.crossings) kernels += c.kernel_dim;
      t.check(r.total_sf == kernels, [&] {
        return "positive path " + std::to_string(generated) + ": sf " + std::to_string(r.total_sf) +
               " != sum of kernel dims " + std::to_string(kernels);
      });
    }
  }
  return t.outcome("100 regular paths (" + std::to_string(positive) + " positive, " + std::to_string(discarded) +
                   " discarded draws)");
}

Outcome criterion_krasnoselskii() {
  Rng rng(404);
  Tally t;
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  int eigen_checked = 0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t dim = pick_dim(rng, 1, 8);
    // Known spectrum with repeated values.
    std::vector<double> spectrum;
    while (spectrum.size() < dim) {
      const double e = std::round(u(rng) * 1000.0) / 1000.0;
      const std::size_t mult = std::min<std::size_t>(dim - spectrum.size(), pick_dim(rng, 1, 3));
      if (std::any_of(spectrum.begin(), spectrum.end(), [&](double x) { return std::abs(x - e) < 0.02; })) continue;
      spectrum.insert(spectrum.end(), mult, e);
    }
    const SymMatrix kmat = random_with_spectrum(rng, spectrum);
    double c = u(rng) * 1.2, d = u(rng) * 1.2;
    if (c > d) std::swap(c, d);
    const auto too_close = [&](double x) {
      return std::any_of(spectrum.begin(), spectrum.end(), [&](double e) { return std::abs(x - e) < 0.01; });
    };
    if (d - c < 0.5 || too_close(c) || too_close(d)) {
      c = -5.0;
      d = 5.0;
    }
    ScanOptions opts;
    opts.eps_lambda = 1e-8;
    const auto r = krasnoselskii(kmat, c, d, opts);

    std::vector<std::pair<double, int>> expected;
    std::vector<double> sorted = spectrum;
    std::sort(sorted.begin(), sorted.end());
    for (double e : sorted) {
      if (e <= c || e >= d) continue;
      if (!expected.empty() && expected.back().first == e) ++expected.back().second;
      else expected.emplace_back(e, 1);
    }
    int total = 0;
    for (const auto& [e, mult] : expected) total += mult;
    t.check(r.report.total_sf == total, [&] { return "K " + std::to_string(k) + ": sf " + std::to_string(r.report.total_sf) + " != " + std::to_string(total); });
    t.check(r.report.crossings.size() == expected.size(), [&] {
      return "K " + std::to_string(k) + ": " + std::to_string(r.report.crossings.size()) + " crossings for " +
             std::to_string(expected.size()) + " eigenvalues";
    });
    for (const auto& [e, mult] : expected) {
      ++eigen_checked;
      const auto it = std::find_if(r.report.crossings.begin(), r.report.crossings.end(),
                                   [&](const Crossing& x) { return std::abs(x.lambda_est - e) <= 1e-8; });
      t.check(it != r.report.crossings.end() && it->local_sf == mult && it->form_signature == mult, [&] {
        std::string near = "none";
        for (const auto& x : r.report.crossings) near = str(x.lambda_est) + " (sf " + std::to_string(x.local_sf) + ")";
        return "K " + std::to_string(k) + ": eigenvalue " + str(e) + " x" + std::to_string(mult) + ", found " + near;
      });
    }
    t.check(r.consistent, [&] { return "K " + std::to_string(k) + " report not consistent"; });
  }
  return t.outcome("100 matrices, " + std::to_string(eigen_checked) + " eigenvalues within 1e-8");
}

Outcome criterion_hamiltonian_index() {
  Rng rng(505);
  Tally t;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = pick_dim(rng, 1, 3);
    const SymMatrix a = random_symmetric(rng, 2 * n, std::uniform_real_distribution<double>(0.3, 3.0)(rng));
    const double norm = spectral_norm(a);
    const int kmax = index_truncation(a);
    for (int j = static_cast<int>(std::floor(norm)) + 1; j <= kmax + 3; ++j) {
      const int sgn = inertia(lk_matrix(a, j)).signature();
      t.check(sgn == 0, [&] { return "A " + std::to_string(k) + ": sgn L^" + std::to_string(j) + " = " + std::to_string(sgn); });
    }
  }
  std::uniform_real_distribution<double> cdist(0.0, 8.0);
  int tested = 0;
  while (tested < 50) {
    const double c = cdist(rng);
    if (std::abs(c - std::round(c)) < 1e-3) continue;
    ++tested;
    for (double sign : {1.0, -1.0}) {
      const auto r = hamiltonian_index(SymMatrix::identity(2) * (sign * c));
      const int expected = static_cast<int>(sign) * (1 + 2 * static_cast<int>(std::floor(c)));
      t.check(r.value == expected, [&] {
        return "c = " + str(sign * c) + ": i = " + (r.value ? std::to_string(*r.value) : std::string("none")) +
               ", expected " + std::to_string(expected);
      });
    }
  }
  return t.outcome("200 tail checks, 50 values of c and their negatives");
}

Outcome criterion_index_difference() {
  Rng rng(606);
  Tally t;
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int max_truncation = 0;
  const auto draw = [&](std::size_t dim) {
    std::vector<double> e(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i; j < dim; ++j) e[i * dim + j] = e[j * dim + i] = u(rng);
    return SymMatrix(dim, e);
  };
  for (int k = 0; k < 200; ++k) {
    const std::size_t dim = k < 100 ? 2 : 4;
    SymMatrix a, b;
    // Keep a margin from resonance so the endpoint classification is unambiguous.
    do a = draw(dim); while (!is_nonresonant(a, 1e-4));
    do b = draw(dim); while (!is_nonresonant(b, 1e-4));
    const int expected = index_difference(a, b);
    try {
      const auto g = galerkin_sf(HamiltonianPath::constant_coefficients(0.0, 1.0, a, b));
      max_truncation = std::max(max_truncation, g.truncation);
      t.check(g.sf == expected && g.truncation < 512, [&] {
        return "pair " + std::to_string(k) + ": galerkin " + std::to_string(g.sf) + " at N = " +
               std::to_string(g.truncation) + ", index difference " + std::to_string(expected);
      });
    } catch (const StabilizationError& e) {
      t.check(false, [&] { return "pair " + std::to_string(k) + ": " + e.what(); });
    }
  }
  return t.outcome("100 pairs at 2n = 2, 100 at 2n = 4, largest N used " + std::to_string(max_truncation));
}

TimePeriodicCoeff random_coeff(Rng& rng, std::size_t n, std::size_t harmonics, double scale) {
  std::vector<SymMatrix> c, s;
  for (std::size_t m = 0; m < harmonics; ++m) {
    c.push_back(random_symmetric(rng, 2 * n, scale));
    s.push_back(random_symmetric(rng, 2 * n, scale));
  }
  return TimePeriodicCoeff(random_symmetric(rng, 2 * n, scale), c, s);
}

Outcome criterion_assembly_oracle() {
  Rng rng(707);
  Tally t;
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = pick_dim(rng, 1, 2);
    const std::size_t m = pick_dim(rng, 1, 3);
    const int truncation = static_cast<int>(pick_dim(rng, m, 8));
    const auto coeff = random_coeff(rng, n, m, 1.0);
    const auto h = assemble_hessian(coeff, truncation);
    const oracle::SimpsonHessian ref(coeff, truncation);
    double err = 0.0;
    for (std::size_t i = 0; i < h.q.dim(); ++i)
      for (std::size_t j = 0; j < h.q.dim(); ++j) err = std::max(err, std::abs(h.q(i, j) - ref.entry(i, j)));
    worst = std::max(worst, err);
    t.check(ref.dim() == h.q.dim() && err <= 1e-9, [&] { return "coefficient " + std::to_string(k) + ": max error " + str(err); });
  }
  return t.outcome("20 coefficients, worst entry error " + str(worst));
}

// Extreme eigenvalues over a fine t grid, computed without eig_range.
std::pair<double, double> oracle_range(const TimePeriodicCoeff& c) {
  double lo = 1e300, hi = -1e300;
  for (int s = 0; s < 4096; ++s) {
    const auto e = eigenvalues(c.evaluate(2.0 * std::numbers::pi * s / 4096));
    lo = std::min(lo, e.front());
    hi = std::max(hi, e.back());
  }
  return {lo, hi};
}

long long oracle_delta(double mu, double nu) {
  long long count = 0;
  for (long long i = static_cast<long long>(std::floor(std::min(mu, nu))) - 1; i <= std::ceil(std::max(mu, nu)) + 1; ++i) {
    if (mu <= nu && mu <= i && i < nu) ++count;
    if (nu < mu && nu <= i && i < mu) --count;
  }
  return count;
}

Outcome criterion_sandwich() {
  Rng rng(808);
  Tally t;
  std::uniform_real_distribution<double> shift(0.5, 3.5);
  const auto off_integer = [](double x) { return std::abs(x - std::round(x)) > 1e-3; };
  int families = 0;
  while (families < 50) {
    const std::size_t n = families % 5 == 4 ? 2 : 1;
    const std::size_t m = pick_dim(rng, 0, 2);
    const auto start = random_coeff(rng, n, m, 0.3);
    auto end_mean = random_symmetric(rng, 2 * n, 0.3) + SymMatrix::identity(2 * n) * shift(rng);
    std::vector<SymMatrix> ec, es;
    for (std::size_t j = 0; j < m; ++j) {
      ec.push_back(random_symmetric(rng, 2 * n, 0.3));
      es.push_back(random_symmetric(rng, 2 * n, 0.3));
    }
    const TimePeriodicCoeff end(end_mean, ec, es);
    const auto [a0, b0] = oracle_range(start);
    const auto [a1, b1] = oracle_range(end);
    if (!(b0 < a1) || !off_integer(a0) || !off_integer(b0) || !off_integer(a1) || !off_integer(b1)) continue;
    ++families;
    const HamiltonianPath path = families % 2 == 0 ? HamiltonianPath::segment(0.0, 1.0, start, end)
                                                    : HamiltonianPath::segment(0.0, 1.0, end, start);
    const auto r = coefficient_bounds(path);
    const bool forward = families % 2 == 0;
    const long long two_n = 2 * static_cast<long long>(n);
    // Reversing the family negates sf and swaps the roles of the endpoints.
    const long long low = forward ? two_n * oracle_delta(b0, a1) : -two_n * oracle_delta(a0, b1);
    const long long high = forward ? two_n * oracle_delta(a0, b1) : -two_n * oracle_delta(b0, a1);
    if (!r.galerkin) {
      t.check(false, [&] { return "family " + std::to_string(families) + ": no Galerkin result"; });
      continue;
    }
    const int sf = r.galerkin->sf;
    t.check(low <= sf && sf <= high, [&] {
      return "family " + std::to_string(families) + ": sf " + std::to_string(sf) + " outside [" + std::to_string(low) + ", " + std::to_string(high) + "]";
    });
    t.check(r.bound_case == (forward ? BoundCase::increasing : BoundCase::decreasing) && r.sandwich_holds == true,
            [&] { return "family " + std::to_string(families) + ": report case or sandwich flag"; });
  }

  // Worked family.
  const TimePeriodicCoeff w0(SymMatrix(2), {}, {SymMatrix::identity(2) * 0.2});
  const TimePeriodicCoeff w1(SymMatrix::identity(2) * 2.5, {}, {SymMatrix::identity(2) * 0.2});
  const auto worked = HamiltonianPath::segment(0.0, 1.0, w0, w1);
  const auto r = coefficient_bounds(worked);
  t.check(r.lower_bound == 2 && oracle_delta(0.2, 2.3) == 2, [&] { return "worked family bound " + std::to_string(r.lower_bound); });
  int params = 0;
  if (r.galerkin) {
    const auto report = analyze_path(galerkin_path(worked, r.galerkin->truncation));
    for (const auto& c : report.crossings) params += c.local_sf != 0;
  }
  t.check(params >= 2, [&] { return "worked family: " + std::to_string(params) + " Galerkin crossing parameters"; });
  return t.outcome("50 families plus the worked family (bound " + std::to_string(r.lower_bound) + ", " +
                   std::to_string(params) + " crossing parameters)");
}

Outcome criterion_sweep_components() {
  Tally t;
  const auto family = [](double s, double x) { return SymMatrix::diagonal({2 * s - 1, 2 * x - 1}); };
  const auto map = sweep2d(family, 21, 21, {0.1, 0.1});
  t.check(map.region_count == 4, [&] { return std::to_string(map.region_count) + " regions"; });
  t.check(map.loop_defects.empty(), [&] { return std::to_string(map.loop_defects.size()) + " loop defects"; });
  const int mu_base = 2;
  std::set<int> indices;
  for (std::size_t i = 0; i < 21; ++i)
    for (std::size_t j = 0; j < 21; ++j) {
      const double s = i / 20.0, x = j / 20.0;
      const bool singular = i == 10 || j == 10;
      t.check(map.singular_mask[map.node(i, j)] == singular, [&] { return "mask at " + std::to_string(i) + "," + std::to_string(j); });
      if (singular) continue;
      const int expected = mu_base - static_cast<int>(2 * s - 1 < 0) - static_cast<int>(2 * x - 1 < 0);
      const auto& got = map.index[map.node(i, j)];
      t.check(got == expected, [&] { return "index at " + std::to_string(i) + "," + std::to_string(j); });
      if (got) indices.insert(*got);
    }
  t.check(indices == std::set<int>{0, 1, 2}, [&] { return "index set"; });

  Rng rng(909);
  int paths = 0;
  while (paths < 100) {
    const std::size_t dim = pick_dim(rng, 2, 6);
    const SymMatrix a = random_invertible(rng, dim, 0.1);
    const SymMatrix b = random_invertible(rng, dim, 0.1);
    const int oracle_sf = morse(a) - morse(b);
    if (oracle_sf == 0) continue;
    ++paths;
    const OperatorPath path = paths % 2 == 0 ? OperatorPath::segment(0.0, 1.0, a, b)
                                             : bent_path(a, b, 0.4 * random_symmetric(rng, dim));
    const auto trace = trace_components(path);
    const int m = std::max(trace.m, 1);
    const int bound = (std::abs(trace.total_sf) + m - 1) / m + 1;
    t.check(trace.total_sf == oracle_sf && trace.distinct_count >= bound, [&] {
      return "path " + std::to_string(paths) + ": sf " + std::to_string(trace.total_sf) + ", distinct " +
             std::to_string(trace.distinct_count) + ", bound " + std::to_string(bound);
    });
  }
  return t.outcome("21x21 quadrant sweep (" + std::to_string(map.region_count) + " regions, " +
                   std::to_string(map.loop_defects.size()) + " defects), 100 traced paths");
}

Outcome criterion_golden() {
  Tally t;
  for (const auto& g : golden::cases()) {
    const std::string config = std::string(SFBIF_CONFIG_DIR) + "/" + g.config;
    const auto first = golden::run_cli(g.command, config);
    const auto second = golden::run_cli(g.command, config);
    const std::string expected = golden::read_text(std::string(SFBIF_GOLDEN_DIR) + "/" + g.golden);
    t.check(first.exit_code == 0, [&] { return std::string(g.golden) + " exit " + std::to_string(first.exit_code); });
    t.check(first.report == second.report, [&] { return std::string(g.golden) + " differs between runs"; });
    t.check(!expected.empty() && first.report == expected, [&] { return std::string(g.golden) + " differs from golden"; });
  }
  return t.outcome("3 shipped configs");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "axiom suite", criterion_axioms},
      {2, "positivity and comparison", criterion_positivity_comparison},
      {3, "kernel bound and additivity", criterion_kernel_bound},
      {4, "crossing forms", criterion_crossing_forms},
      {5, "Krasnoselskii crossings", criterion_krasnoselskii},
      {6, "Hamiltonian index", criterion_hamiltonian_index},
      {7, "index difference vs Galerkin flow", criterion_index_difference},
      {8, "Galerkin assembly oracle", criterion_assembly_oracle},
      {9, "coefficient sandwich", criterion_sandwich},
      {10, "sweep and component counting", criterion_sweep_components},
      {11, "CLI golden reports", criterion_golden},
  };
  int failed = 0;
  const auto begin = std::chrono::steady_clock::now();
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s: %s (%s) [%.1f s]\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
  std::printf("%d of 11 criteria passed in %.1f s\n", 11 - failed, total);
  return failed == 0 ? 0 : 1;
}
