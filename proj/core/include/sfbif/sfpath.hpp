#pragma once

// Paths of symmetric matrices and their spectral flow.
//
// Sign convention: sf(L) = mu(L_a) - mu(L_b), i.e. eigenvalues moving from
// negative to positive count +1. Endpoint kernels are pushed to the positive
// side by a small shift +delta * Id (the extended spectral flow).

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sfbif/symlin.hpp"

namespace sfbif {

/// A continuous family lambda -> SymMatrix over [a, b]. Either a grid of
/// samples (entrywise affine in between) or an evaluation rule. Immutable and
/// cheap to copy.
class OperatorPath {
 public:
  using Rule = std::function<SymMatrix(double)>;

  /// Grid source. Lambdas strictly increasing, at least two, equal dims.
  /// A two-sample grid is affine and therefore flagged smooth.
  static OperatorPath from_samples(std::vector<double> lambdas, std::vector<SymMatrix> matrices);
  static OperatorPath analytic(double a, double b, std::size_t dim, Rule rule, bool smooth = true);
  /// lambda -> base + lambda * slope on [a, b].
  static OperatorPath affine(double a, double b, SymMatrix base, SymMatrix slope);
  /// Straight segment from `start` (at a) to `end` (at b).
  static OperatorPath segment(double a, double b, SymMatrix start, SymMatrix end);
  static OperatorPath constant(double a, double b, SymMatrix value);

  double lower() const;
  double upper() const;
  std::size_t dim() const;
  bool smooth() const;
  bool is_grid() const;
  /// Sample parameters of a grid source (empty for analytic paths).
  std::span<const double> grid() const;
  /// True when the path is affine between consecutive knots.
  bool piecewise_affine() const;
  /// Breakpoints of a piecewise affine path, both ends included; empty
  /// otherwise.
  std::span<const double> knots() const;

  /// Throws DomainError when lambda lies outside [a, b].
  SymMatrix evaluate(double lambda) const;
  SymMatrix start() const { return evaluate(lower()); }
  SymMatrix end() const { return evaluate(upper()); }

  /// The same family restricted to [c, d] ⊂ [a, b].
  OperatorPath restricted(double c, double d) const;

 private:
  struct Impl;
  explicit OperatorPath(std::shared_ptr<const Impl> impl);
  OperatorPath with_knots(std::vector<double> knots) const;
  friend OperatorPath concat(const OperatorPath& p, const OperatorPath& q);
  friend OperatorPath reverse(const OperatorPath& p);
  friend OperatorPath direct_sum(const OperatorPath& p, const OperatorPath& q);
  std::shared_ptr<const Impl> impl_;
};

/// p on [a, c] followed by q on [c, b]; requires p.upper() == q.lower() and
/// matching junction values (1e-12 relative).
OperatorPath concat(const OperatorPath& p, const OperatorPath& q);
/// lambda -> p(a + b - lambda).
OperatorPath reverse(const OperatorPath& p);
/// lambda -> diag(p(lambda), q(lambda)); requires equal domains.
OperatorPath direct_sum(const OperatorPath& p, const OperatorPath& q);

struct ScanOptions {
  std::size_t n_grid = 256;
  /// Relative zero tolerance; the absolute threshold for a matrix S is
  /// zero_tol * max(1, ||S||_F / sqrt(dim)).
  double zero_tol = kDefaultRelativeZeroTol;
  /// Bracket width target; defaults to 1e-8 * (b - a).
  std::optional<double> eps_lambda;
  /// Hard cap on matrix evaluations during refinement.
  std::size_t max_evaluations = 2'000'000;
};

struct Crossing {
  double lambda_est = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int kernel_dim = 0;
  int local_sf = 0;
  std::optional<int> form_signature;
  std::optional<bool> regular;
  bool at_endpoint = false;
  /// False when the kernel persists over a whole grid cell.
  bool isolated = true;
};

struct CrossingScan {
  std::vector<Crossing> crossings;
  std::vector<std::string> notes;
  std::size_t evaluations = 0;
};

struct SpectralFlowResult {
  int total_sf = 0;
  std::vector<Crossing> crossings;
  bool admissible_start = false;
  bool admissible_end = false;
  double shift_delta = 0.0;
  std::size_t grid_points_used = 0;
  std::vector<std::string> notes;
};

/// Endpoint invertibility under the relative zero tolerance.
std::pair<bool, bool> is_admissible(const OperatorPath& path,
                                    double zero_tol = kDefaultRelativeZeroTol);

/// mu(L_a + delta) - mu(L_b + delta); delta = 0 for admissible paths.
/// Crossings are left empty.
SpectralFlowResult extended_sf(const OperatorPath& path,
                               double zero_tol = kDefaultRelativeZeroTol);

/// Uniform grid scan plus certified refinement. Every cell is subdivided
/// until it is proven kernel-free (eigenvalue gap larger than the matrix
/// variation over the cell) or narrower than eps_lambda. Surviving cells are
/// merged into crossings; each crossing gets a bracket from bisection on
/// the Morse index, a kernel dimension and a local spectral flow measured
/// between kernel-free anchor points on either side. Local flows telescope
/// to the extended spectral flow of the whole path.
CrossingScan locate_crossings(const OperatorPath& path, const ScanOptions& options = {});

/// extended_sf plus the located crossings.
SpectralFlowResult spectral_flow(const OperatorPath& path, const ScanOptions& options = {});

struct CrossingForm {
  SymMatrix form;
  int signature = 0;
  bool regular = false;
};

/// Derivative step used when none is supplied: max(1e-5 (b - a), 1e-7).
double default_derivative_step(const OperatorPath& path);

/// Restriction of the central-difference derivative to ker L(lambda0).
/// Throws DomainError("not a crossing") when the kernel is trivial.
CrossingForm crossing_form(const OperatorPath& path, double lambda0,
                           std::optional<double> h = std::nullopt,
                           double zero_tol = kDefaultRelativeZeroTol);

/// Same, with the kernel taken as the `kernel_dim` eigenvectors closest to
/// zero (used at located crossings, where lambda0 is only approximate).
CrossingForm crossing_form_on(const OperatorPath& path, double lambda0, int kernel_dim,
                              std::optional<double> h = std::nullopt);

/// Sum of crossing-form signatures. Throws DomainError when a crossing is
/// not regular or the path is not smooth.
int sf_regular_sum(const OperatorPath& path, std::span<const Crossing> crossings);

/// True iff L(l2) - L(l1) has no eigenvalue below -tol on consecutive grid
/// points.
bool is_nondecreasing(const OperatorPath& path, std::size_t n_grid = 256,
                      double zero_tol = kDefaultRelativeZeroTol);

struct ComparisonReport {
  bool start_ordered = false;  ///< L_a <= M_a
  bool end_ordered = false;    ///< M_b <= L_b
  bool hypothesis = false;
  int sf_l = 0;
  int sf_m = 0;
  /// sf(M) <= sf(L); meaningful only when the hypothesis holds.
  bool conclusion = false;
};

ComparisonReport compare_paths(const OperatorPath& l, const OperatorPath& m,
                               double zero_tol = kDefaultRelativeZeroTol);

struct AxiomCheck {
  std::string name;
  int trials = 0;
  int failures = 0;
};

struct AxiomReport {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<AxiomCheck> checks;
  bool passed = true;
  /// JSON description of the first failing instance, empty when passed.
  std::string counterexample;
};

struct AxiomOptions {
  std::size_t min_dim = 2;
  std::size_t max_dim = 8;
  int homotopy_slices = 10;
  /// Grid used for crossing scans inside the checks.
  std::size_t n_grid = 64;
};

/// Randomized exact-integer checks of the spectral flow properties:
/// normalization, Morse index formula, direct sum, homotopy invariance,
/// concatenation, monotonicity and reversal. Stops at the first failure.
AxiomReport verify_axioms(std::uint64_t seed, int trials, const AxiomOptions& options = {});

}  // namespace sfbif
