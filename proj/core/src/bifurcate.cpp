#include "sfbif/bifurcate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <set>

#include "sfbif/errors.hpp"

namespace sfbif {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

int ceil_div(int num, int den) { return den == 0 ? 0 : (num + den - 1) / den; }

int max_kernel(const std::vector<Crossing>& crossings) {
  int m = 0;
  for (const auto& c : crossings) m = std::max(m, c.kernel_dim);
  return m;
}

int crossing_sum(const OperatorPath& path, const ScanOptions& options) {
  int total = 0;
  for (const auto& c : locate_crossings(path, options).crossings) total += c.local_sf;
  return total;
}

}  // namespace

BifurcationReport analyze_path(const OperatorPath& path, const ScanOptions& options) {
  const SpectralFlowResult sf = spectral_flow(path, options);
  BifurcationReport r;
  r.crossings = sf.crossings;
  r.total_sf = sf.total_sf;
  r.admissible_start = sf.admissible_start;
  r.admissible_end = sf.admissible_end;
  r.notes = sf.notes;
  r.m = max_kernel(r.crossings);
  r.lower_bound = ceil_div(std::abs(r.total_sf), r.m);
  for (const auto& c : r.crossings) {
    if (c.local_sf != 0) {
      ++r.certified;
    } else {
      ++r.candidates;
      r.notes.push_back("crossing near lambda = " + fmt(c.lambda_est) +
                        " has zero local spectral flow: candidate, no conclusion");
    }
  }
  if (r.total_sf != 0 && r.admissible_start && r.admissible_end) {
    r.notes.push_back("at least 1 bifurcation point in (" + fmt(path.lower()) + ", " +
                      fmt(path.upper()) + "); at least " + std::to_string(r.lower_bound) +
                      " counting stratum dimension m = " + std::to_string(r.m));
  }
  if (!r.crossings.empty()) {
    r.notes.push_back("m is taken over detected crossings only");
  }
  return r;
}

PathComponentTrace trace_components(const OperatorPath& path, const ScanOptions& options) {
  const CrossingScan scan = locate_crossings(path, options);
  PathComponentTrace trace;
  trace.notes = scan.notes;
  for (std::size_t k = 1; k < scan.crossings.size(); ++k) {
    if (scan.crossings[k].lo <= scan.crossings[k - 1].hi) {
      throw NumericalError("trace_components: crossing brackets near lambda = " +
                           fmt(scan.crossings[k].lambda_est) +
                           " overlap; refine the grid or reduce eps_lambda");
    }
  }
  double lo = path.lower();
  int index = 0;
  for (const auto& c : scan.crossings) {
    if (c.lo > lo) trace.segments.push_back({lo, c.lo, index});
    index += c.local_sf;
    lo = c.hi;
  }
  if (lo < path.upper()) trace.segments.push_back({lo, path.upper(), index});
  trace.total_sf = index;
  trace.m = max_kernel(scan.crossings);
  trace.lower_bound = ceil_div(std::abs(trace.total_sf), trace.m);
  std::set<int> distinct;
  for (const auto& s : trace.segments) distinct.insert(s.cumulative_index);
  trace.distinct_count = static_cast<int>(distinct.size());
  trace.notes.push_back("component count assumes the singular set equals the bifurcation set");
  return trace;
}

ComponentMap2D sweep2d(const Family2D& family, std::size_t ns, std::size_t nt,
                       std::pair<double, double> base, const SweepOptions& options) {
  if (ns < 2 || nt < 2) throw DomainError("sweep2d: lattice must be at least 2x2");
  if (!(base.first >= 0.0 && base.first <= 1.0 && base.second >= 0.0 && base.second <= 1.0)) {
    throw DomainError("sweep2d: base point must lie in [0,1]^2");
  }
  ComponentMap2D map;
  map.ns = ns;
  map.nt = nt;
  for (std::size_t i = 0; i < ns; ++i) map.s_values.push_back(static_cast<double>(i) / (ns - 1));
  for (std::size_t j = 0; j < nt; ++j) map.t_values.push_back(static_cast<double>(j) / (nt - 1));
  map.base = {static_cast<std::size_t>(std::lround(base.first * (ns - 1))),
              static_cast<std::size_t>(std::lround(base.second * (nt - 1)))};

  const std::size_t count = ns * nt;
  std::vector<SymMatrix> nodes(count);
  map.singular_mask.assign(count, false);
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t n = map.node(i, j);
      nodes[n] = family(map.s_values[i], map.t_values[j]);
      if (nodes[n].dim() != nodes[0].dim()) throw DomainError("sweep2d: family changes dimension");
      map.singular_mask[n] = inertia(nodes[n], default_zero_tol(nodes[n], options.zero_tol)).zero > 0;
    }
  }
  if (map.singular_mask[map.node(map.base.first, map.base.second)]) {
    throw DomainError("sweep2d: base node (" + fmt(map.s_values[map.base.first]) + ", " +
                      fmt(map.t_values[map.base.second]) + ") is singular");
  }

  // Edge flows along affine segments between node matrices.
  ScanOptions scan;
  scan.n_grid = options.edge_grid;
  scan.zero_tol = options.zero_tol;
  const auto edge_sf = [&](std::size_t from, std::size_t to) {
    return crossing_sum(OperatorPath::segment(0.0, 1.0, nodes[from], nodes[to]), scan);
  };
  std::vector<int> along_s((ns - 1) * nt), along_t(ns * (nt - 1));
  for (std::size_t i = 0; i + 1 < ns; ++i) {
    for (std::size_t j = 0; j < nt; ++j) along_s[i * nt + j] = edge_sf(map.node(i, j), map.node(i + 1, j));
  }
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = 0; j + 1 < nt; ++j) {
      along_t[i * (nt - 1) + j] = edge_sf(map.node(i, j), map.node(i, j + 1));
    }
  }

  // Breadth-first potential over the whole lattice. Flows through singular
  // nodes telescope because every edge uses the same kernel convention.
  std::vector<std::optional<int>> potential(count);
  std::deque<std::pair<std::size_t, std::size_t>> queue{map.base};
  potential[map.node(map.base.first, map.base.second)] = 0;
  while (!queue.empty()) {
    const auto [i, j] = queue.front();
    queue.pop_front();
    const int here = *potential[map.node(i, j)];
    const auto visit = [&](std::size_t ii, std::size_t jj, int flow) {
      auto& p = potential[map.node(ii, jj)];
      if (!p) {
        p = here + flow;
        queue.emplace_back(ii, jj);
      }
    };
    if (i + 1 < ns) visit(i + 1, j, along_s[i * nt + j]);
    if (i > 0) visit(i - 1, j, -along_s[(i - 1) * nt + j]);
    if (j + 1 < nt) visit(i, j + 1, along_t[i * (nt - 1) + j]);
    if (j > 0) visit(i, j - 1, -along_t[i * (nt - 1) + j - 1]);
  }
  map.index.resize(count);
  for (std::size_t n = 0; n < count; ++n) {
    if (!map.singular_mask[n]) map.index[n] = potential[n];
  }

  // Regions: 4-connected components of non-singular nodes.
  map.region.assign(count, -1);
  for (std::size_t start = 0; start < count; ++start) {
    if (map.singular_mask[start] || map.region[start] >= 0) continue;
    const int label = map.region_count++;
    std::deque<std::size_t> fill{start};
    map.region[start] = label;
    while (!fill.empty()) {
      const std::size_t n = fill.front();
      fill.pop_front();
      const std::size_t i = n / nt, j = n % nt;
      const auto push = [&](std::size_t ii, std::size_t jj) {
        const std::size_t m = map.node(ii, jj);
        if (!map.singular_mask[m] && map.region[m] < 0) {
          map.region[m] = label;
          fill.push_back(m);
        }
      };
      if (i + 1 < ns) push(i + 1, j);
      if (i > 0) push(i - 1, j);
      if (j + 1 < nt) push(i, j + 1);
      if (j > 0) push(i, j - 1);
    }
  }

  // Elementary loops: right along s, up along t, back along s, down along t.
  for (std::size_t i = 0; i + 1 < ns; ++i) {
    for (std::size_t j = 0; j + 1 < nt; ++j) {
      if (map.singular_mask[map.node(i, j)] || map.singular_mask[map.node(i + 1, j)] ||
          map.singular_mask[map.node(i, j + 1)] || map.singular_mask[map.node(i + 1, j + 1)]) {
        continue;
      }
      ++map.cells_checked;
      const int loop = along_s[i * nt + j] + along_t[(i + 1) * (nt - 1) + j] -
                       along_s[i * nt + j + 1] - along_t[i * (nt - 1) + j];
      if (loop != 0) map.loop_defects.push_back({i, j, loop});
    }
  }
  return map;
}

KrasnoselskiiReport krasnoselskii(const SymMatrix& k, double c, double d, const ScanOptions& options) {
  if (!(c < d)) throw DomainError("krasnoselskii: need c < d");
  const std::size_t n = k.dim();
  const SymMatrix id = SymMatrix::identity(n);
  for (double end : {c, d}) {
    const SymMatrix at = end * id - k;
    if (inertia(at, default_zero_tol(at, options.zero_tol)).zero > 0) {
      throw DomainError("krasnoselskii: interval endpoint " + fmt(end) + " is in the spectrum of K");
    }
  }
  KrasnoselskiiReport out;
  out.report = analyze_path(OperatorPath::affine(c, d, -k, id), options);

  const double cluster_tol = 1e-8 * std::max(1.0, k.spectral_scale());
  for (double e : eigenvalues(k)) {
    if (e <= c || e >= d) continue;
    if (!out.eigenvalues.empty() && e - out.eigenvalues.back().first <= cluster_tol) {
      ++out.eigenvalues.back().second;
    } else {
      out.eigenvalues.emplace_back(e, 1);
    }
  }
  const double eps = options.eps_lambda.value_or(1e-8 * (d - c));
  const auto& crossings = out.report.crossings;
  bool ok = crossings.size() == out.eigenvalues.size();
  for (std::size_t i = 0; ok && i < crossings.size(); ++i) {
    const auto& x = crossings[i];
    const auto& [value, mult] = out.eigenvalues[i];
    ok = std::abs(x.lambda_est - value) <= eps && x.local_sf == mult && x.kernel_dim == mult &&
         x.form_signature == mult && x.regular == true;
  }
  out.consistent = ok;
  if (!ok) out.report.notes.push_back("crossings do not match the spectrum of K");
  return out;
}

}  // namespace sfbif
