#pragma once

// Bifurcation reporting on top of the spectral flow engine.
//
// A crossing with nonzero local spectral flow is a bifurcation point of every
// C^2 family of functionals whose Hessians along the trivial branch form the
// path. Crossings with zero local flow are candidates only.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sfbif/sfpath.hpp"
#include "sfbif/symlin.hpp"

namespace sfbif {

struct BifurcationReport {
  std::vector<Crossing> crossings;
  int total_sf = 0;
  /// Largest kernel dimension among the crossings; 0 without crossings.
  int m = 0;
  /// ceil(|total_sf| / m); 0 without crossings.
  int lower_bound = 0;
  bool admissible_start = false;
  bool admissible_end = false;
  int certified = 0;   ///< crossings with nonzero local flow
  int candidates = 0;  ///< crossings with zero local flow
  std::vector<std::string> notes;
};

BifurcationReport analyze_path(const OperatorPath& path, const ScanOptions& options = {});

struct PathSegment {
  double lo = 0.0;
  double hi = 0.0;
  /// Spectral flow from the start of the path to any point of the segment.
  int cumulative_index = 0;
};

struct PathComponentTrace {
  std::vector<PathSegment> segments;
  int total_sf = 0;
  int m = 0;
  int lower_bound = 0;
  int distinct_count = 0;
  std::vector<std::string> notes;
};

/// Throws NumericalError when crossing brackets overlap.
PathComponentTrace trace_components(const OperatorPath& path, const ScanOptions& options = {});

using Family2D = std::function<SymMatrix(double s, double t)>;

struct LatticeLoop {
  /// Lower-left corner of the elementary cell.
  std::size_t i = 0;
  std::size_t j = 0;
  int sf = 0;
};

/// Nodes (i, j) sit at (s_i, t_j) = (i / (ns - 1), j / (nt - 1)); storage is
/// row-major with i outer.
struct ComponentMap2D {
  std::size_t ns = 0;
  std::size_t nt = 0;
  std::vector<double> s_values;
  std::vector<double> t_values;
  std::pair<std::size_t, std::size_t> base;
  std::vector<bool> singular_mask;
  /// Spectral flow from the base node; empty on singular nodes.
  std::vector<std::optional<int>> index;
  /// 4-connected component label of each non-singular node, -1 on singular ones.
  std::vector<int> region;
  int region_count = 0;
  std::vector<LatticeLoop> loop_defects;
  std::size_t cells_checked = 0;

  std::size_t node(std::size_t i, std::size_t j) const { return i * nt + j; }
};

struct SweepOptions {
  /// Grid used on each lattice edge.
  std::size_t edge_grid = 16;
  double zero_tol = kDefaultRelativeZeroTol;
};

/// Throws DomainError for a singular base node or a lattice smaller than 2x2.
ComponentMap2D sweep2d(const Family2D& family, std::size_t ns, std::size_t nt,
                       std::pair<double, double> base, const SweepOptions& options = {});

struct KrasnoselskiiReport {
  BifurcationReport report;
  /// Distinct eigenvalues of K in (c, d) with multiplicities.
  std::vector<std::pair<double, int>> eigenvalues;
  /// One crossing per eigenvalue, within eps of it, local flow equal to the
  /// multiplicity and a positive definite crossing form.
  bool consistent = false;
};

/// Analyzes lambda -> lambda Id - K on [c, d]. Throws DomainError when c or d
/// is an eigenvalue of K.
KrasnoselskiiReport krasnoselskii(const SymMatrix& k, double c, double d,
                                  const ScanOptions& options = {});

}  // namespace sfbif
