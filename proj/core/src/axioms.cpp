#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>

#include "sfbif/errors.hpp"
#include "sfbif/random.hpp"
#include "sfbif/sfpath.hpp"

namespace sfbif {

namespace {

std::string json_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string json_matrix(const SymMatrix& s) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < s.dim(); ++i) {
    out << (i ? "," : "") << '[';
    for (std::size_t j = 0; j < s.dim(); ++j) out << (j ? "," : "") << json_number(s(i, j));
    out << ']';
  }
  out << ']';
  return out.str();
}

int crossing_sum(const OperatorPath& path, const ScanOptions& options) {
  const auto scan = locate_crossings(path, options);
  return std::accumulate(scan.crossings.begin(), scan.crossings.end(), 0,
                         [](int acc, const Crossing& c) { return acc + c.local_sf; });
}

class AxiomRunner {
 public:
  AxiomRunner(std::uint64_t seed, const AxiomOptions& options)
      : rng_(seed), options_(options) {
    scan_.n_grid = options.n_grid;
  }

  AxiomReport run(int trials) {
    AxiomReport report;
    report.trials = trials;
    const char* names[] = {"normalization", "morse_index",  "direct_sum", "homotopy",
                           "concatenation", "monotonicity", "reversal"};
    for (const char* name : names) report.checks.push_back({name, 0, 0});

    for (int trial = 0; trial < trials && report.passed; ++trial) {
      for (std::size_t k = 0; k < report.checks.size() && report.passed; ++k) {
        std::string instance;
        const bool ok = check(k, instance);
        ++report.checks[k].trials;
        if (!ok) {
          ++report.checks[k].failures;
          report.passed = false;
          report.counterexample = "{\"check\":\"" + report.checks[k].name +
                                  "\",\"trial\":" + std::to_string(trial) + "," + instance + "}";
        }
      }
    }
    return report;
  }

 private:
  std::size_t random_dim() {
    std::uniform_int_distribution<std::size_t> d(options_.min_dim, options_.max_dim);
    return d(rng_);
  }

  bool check(std::size_t which, std::string& instance) {
    switch (which) {
      case 0: return normalization(instance);
      case 1: return morse_index(instance);
      case 2: return direct_sum_check(instance);
      case 3: return homotopy(instance);
      case 4: return concatenation(instance);
      case 5: return monotonicity(instance);
      default: return reversal(instance);
    }
  }

  // C(l)^T D C(l) with C(l) = Id + l N and ||N||_F < 1 never loses rank.
  bool normalization(std::string& instance) {
    const std::size_t n = random_dim();
    const SymMatrix d = random_invertible(rng_, n, 0.5);
    Matrix perturb = random_matrix(rng_, n, n);
    double norm = 0.0;
    for (double x : perturb.data()) norm += x * x;
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) perturb(i, j) *= 0.9 / norm;
    }
    const auto path = OperatorPath::analytic(0.0, 1.0, n, [d, perturb, n](double l) {
      Matrix c = Matrix::identity(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) c(i, j) += l * perturb(i, j);
      }
      return congruence(d, c);
    });
    const auto scan = locate_crossings(path, scan_);
    const int sf = extended_sf(path).total_sf;
    instance = "\"D\":" + json_matrix(d) + ",\"sf\":" + std::to_string(sf) +
               ",\"crossings\":" + std::to_string(scan.crossings.size());
    return sf == 0 && scan.crossings.empty();
  }

  bool morse_index(std::string& instance) {
    const std::size_t n = random_dim();
    const SymMatrix a = random_invertible(rng_, n);
    const SymMatrix b = random_invertible(rng_, n);
    const auto path = OperatorPath::segment(0.0, 1.0, a, b);
    const int expected = inertia(a).morse_index() - inertia(b).morse_index();
    const int sf = extended_sf(path).total_sf;
    const int by_crossings = crossing_sum(path, scan_);
    instance = "\"start\":" + json_matrix(a) + ",\"end\":" + json_matrix(b) +
               ",\"expected\":" + std::to_string(expected) + ",\"sf\":" + std::to_string(sf) +
               ",\"crossing_sum\":" + std::to_string(by_crossings);
    return sf == expected && by_crossings == expected;
  }

  bool direct_sum_check(std::string& instance) {
    const std::size_t n1 = random_dim();
    const std::size_t n2 = random_dim();
    const auto p = OperatorPath::segment(0.0, 1.0, random_invertible(rng_, n1),
                                         random_invertible(rng_, n1));
    const auto q = OperatorPath::segment(0.0, 1.0, random_invertible(rng_, n2),
                                         random_invertible(rng_, n2));
    const auto sum = direct_sum(p, q);
    const int sp = crossing_sum(p, scan_);
    const int sq = crossing_sum(q, scan_);
    const int ss = crossing_sum(sum, scan_);
    const int ext = extended_sf(sum).total_sf;
    instance = "\"p_start\":" + json_matrix(p.start()) + ",\"p_end\":" + json_matrix(p.end()) +
               ",\"q_start\":" + json_matrix(q.start()) + ",\"q_end\":" + json_matrix(q.end()) +
               ",\"sf_p\":" + std::to_string(sp) + ",\"sf_q\":" + std::to_string(sq) +
               ",\"sf_sum\":" + std::to_string(ss);
    return ss == sp + sq && ext == ss;
  }

  bool homotopy(std::string& instance) {
    const std::size_t n = random_dim();
    const SymMatrix a = random_invertible(rng_, n);
    const SymMatrix b = random_invertible(rng_, n);
    const SymMatrix bend = random_symmetric(rng_, n, 2.0);
    const int slices = std::max(options_.homotopy_slices, 2);
    std::optional<int> reference;
    std::string values;
    bool ok = true;
    for (int k = 0; k < slices; ++k) {
      const double s = static_cast<double>(k) / (slices - 1);
      const auto path = OperatorPath::analytic(0.0, 1.0, n, [a, b, bend, s](double l) {
        return (1.0 - l) * a + l * b + (4.0 * s * l * (1.0 - l)) * bend;
      });
      const int sf = crossing_sum(path, scan_);
      values += (k ? "," : "") + std::to_string(sf);
      if (!reference) reference = sf;
      ok = ok && sf == *reference;
    }
    ok = ok && *reference == extended_sf(OperatorPath::segment(0.0, 1.0, a, b)).total_sf;
    instance = "\"start\":" + json_matrix(a) + ",\"end\":" + json_matrix(b) +
               ",\"bend\":" + json_matrix(bend) + ",\"sf_per_slice\":[" + values + "]";
    return ok;
  }

  // Half of the instances put an exact kernel at the junction.
  bool concatenation(std::string& instance) {
    const std::size_t n = random_dim();
    std::uniform_real_distribution<double> where(0.2, 0.8);
    const double c = where(rng_);
    SymMatrix at_junction = random_symmetric(rng_, n);
    if (std::bernoulli_distribution(0.5)(rng_)) {
      auto eig = eigensym(at_junction);
      std::size_t closest = 0;
      for (std::size_t k = 1; k < n; ++k) {
        if (std::abs(eig.values[k]) < std::abs(eig.values[closest])) closest = k;
      }
      eig.values[closest] = 0.0;
      at_junction = congruence(SymMatrix::diagonal(eig.values), eig.vectors.transposed());
    }
    const SymMatrix slope = random_symmetric(rng_, n, 3.0);
    const auto path = OperatorPath::analytic(
        0.0, 1.0, n, [at_junction, slope, c](double l) { return at_junction + (l - c) * slope; });
    const int whole = crossing_sum(path, scan_);
    const int left = crossing_sum(path.restricted(0.0, c), scan_);
    const int right = crossing_sum(path.restricted(c, 1.0), scan_);
    const int ext_whole = extended_sf(path).total_sf;
    const int ext_split =
        extended_sf(path.restricted(0.0, c)).total_sf + extended_sf(path.restricted(c, 1.0)).total_sf;
    instance = "\"junction\":" + json_matrix(at_junction) + ",\"slope\":" + json_matrix(slope) +
               ",\"c\":" + json_number(c) + ",\"sf_whole\":" + std::to_string(whole) +
               ",\"sf_left\":" + std::to_string(left) + ",\"sf_right\":" + std::to_string(right);
    return whole == left + right && ext_whole == ext_split && whole == ext_whole;
  }

  bool monotonicity(std::string& instance) {
    const std::size_t n = random_dim();
    std::uniform_int_distribution<std::size_t> rank_dist(0, n);
    const std::size_t rank = rank_dist(rng_);
    const SymMatrix base = random_symmetric(rng_, n);
    const SymMatrix slope = random_psd(rng_, n, rank);
    const auto path = OperatorPath::affine(0.0, 1.0, base, slope);
    const int sf = extended_sf(path).total_sf;
    const int by_crossings = crossing_sum(path, scan_);
    const bool monotone = is_nondecreasing(path, 16);
    instance = "\"base\":" + json_matrix(base) + ",\"slope\":" + json_matrix(slope) +
               ",\"sf\":" + std::to_string(sf) + ",\"crossing_sum\":" + std::to_string(by_crossings);
    bool ok = monotone && sf >= 0 && by_crossings == sf;
    if (rank == 0) ok = ok && sf == 0;
    return ok;
  }

  bool reversal(std::string& instance) {
    const std::size_t n = random_dim();
    const auto path = OperatorPath::analytic(
        0.0, 1.0, n,
        [a = random_invertible(rng_, n), b = random_invertible(rng_, n),
         bend = random_symmetric(rng_, n)](double l) {
          return (1.0 - l) * a + l * b + (l * (1.0 - l)) * bend;
        });
    const int forward = crossing_sum(path, scan_);
    const int backward = crossing_sum(reverse(path), scan_);
    instance = "\"start\":" + json_matrix(path.start()) + ",\"end\":" + json_matrix(path.end()) +
               ",\"sf_forward\":" + std::to_string(forward) +
               ",\"sf_reversed\":" + std::to_string(backward);
    return backward == -forward && forward == extended_sf(path).total_sf;
  }

  Rng rng_;
  AxiomOptions options_;
  ScanOptions scan_;
};

}  // namespace

AxiomReport verify_axioms(std::uint64_t seed, int trials, const AxiomOptions& options) {
  if (trials < 1) throw DomainError("verify_axioms: trials must be >= 1");
  if (options.min_dim < 1 || options.min_dim > options.max_dim) {
    throw DomainError("verify_axioms: invalid dimension range");
  }
  AxiomReport report = AxiomRunner(seed, options).run(trials);
  report.seed = seed;
  return report;
}

}  // namespace sfbif
