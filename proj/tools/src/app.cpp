#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "sfbif/bifurcate.hpp"
#include "sfbif/cli.hpp"
#include "sfbif/errors.hpp"
#include "sfbif/hamsys.hpp"
#include "sfbif/sfpath.hpp"

namespace sfbif::cli {

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<std::size_t> grid;
};

ScanOptions scan_options(const ScanSettings& s) {
  ScanOptions o;
  o.n_grid = s.grid;
  o.zero_tol = s.zero_tol;
  o.eps_lambda = s.eps_lambda;
  return o;
}

json optional_int(const std::optional<int>& x) { return x ? json(*x) : json(nullptr); }
json optional_bool(const std::optional<bool>& x) { return x ? json(*x) : json(nullptr); }

json crossing_json(const Crossing& c) {
  return {{"lambda_est", c.lambda_est}, {"lo", c.lo},
          {"hi", c.hi},                 {"kernel_dim", c.kernel_dim},
          {"local_sf", c.local_sf},     {"form_signature", optional_int(c.form_signature)},
          {"regular", optional_bool(c.regular)}, {"at_endpoint", c.at_endpoint},
          {"isolated", c.isolated}};
}

json crossings_json(const std::vector<Crossing>& cs) {
  json out = json::array();
  for (const auto& c : cs) out.push_back(crossing_json(c));
  return out;
}

json sf_json(const SpectralFlowResult& r) {
  return {{"total_sf", r.total_sf},
          {"admissible_start", r.admissible_start},
          {"admissible_end", r.admissible_end},
          {"shift_delta", r.shift_delta},
          {"crossings", crossings_json(r.crossings)},
          {"notes", r.notes}};
}

json bifurcation_json(const BifurcationReport& r) {
  return {{"total_sf", r.total_sf},
          {"m", r.m},
          {"lower_bound", r.lower_bound},
          {"admissible_start", r.admissible_start},
          {"admissible_end", r.admissible_end},
          {"certified", r.certified},
          {"candidates", r.candidates},
          {"crossings", crossings_json(r.crossings)},
          {"notes", r.notes}};
}

json components_json(const PathComponentTrace& t) {
  json segments = json::array();
  for (const auto& s : t.segments) {
    segments.push_back({{"lo", s.lo}, {"hi", s.hi}, {"cumulative_index", s.cumulative_index}});
  }
  return {{"segments", segments},
          {"total_sf", t.total_sf},
          {"m", t.m},
          {"lower_bound", t.lower_bound},
          {"distinct_count", t.distinct_count},
          {"notes", t.notes}};
}

json index_json(const IndexResult& r) {
  return {{"index", optional_int(r.value)},
          {"k_max", r.k_max},
          {"signatures", r.signatures},
          {"resonant", r.resonant}};
}

json galerkin_json(const GalerkinSfResult& r) {
  json trace = json::array();
  for (const auto& [n, sf] : r.trace) trace.push_back({{"N", n}, {"sf", sf}});
  return {{"sf", r.sf},
          {"N_used", r.truncation},
          {"trace", trace},
          {"admissible_start", r.admissible_start},
          {"admissible_end", r.admissible_end}};
}

json range_json(const EigRange& r) {
  return {{"alpha", r.alpha}, {"beta", r.beta}, {"spacing", r.spacing}};
}

const char* case_name(BoundCase c) {
  switch (c) {
    case BoundCase::increasing: return "increasing";
    case BoundCase::decreasing: return "decreasing";
    case BoundCase::none: return "none";
  }
  return "none";
}

json bounds_json(const CoefficientBounds& b) {
  return {{"start", range_json(b.start)},
          {"end", range_json(b.end)},
          {"case", case_name(b.bound_case)},
          {"lower_bound", b.lower_bound},
          {"sandwich_low", b.sandwich_low},
          {"sandwich_high", b.sandwich_high},
          {"sandwich_holds", optional_bool(b.sandwich_holds)},
          {"near_integer", b.near_integer},
          {"alt_lower_bound", b.alt_lower_bound},
          {"notes", b.notes}};
}

OperatorPath matrix_path(const MatrixPathConfig& c) {
  if (c.base) return OperatorPath::affine(c.a, c.b, *c.base, *c.slope);
  return OperatorPath::from_samples(c.lambdas, c.matrices);
}

HamiltonianPath hamiltonian_path(const HamiltonianConstConfig& c) {
  std::vector<TimePeriodicCoeff> coeffs;
  for (const auto& m : c.samples) coeffs.emplace_back(m);
  return HamiltonianPath(c.lambdas, std::move(coeffs));
}

HamiltonianPath hamiltonian_path(const HamiltonianPeriodicConfig& c) {
  return HamiltonianPath(c.lambdas, c.samples);
}

[[noreturn]] void unsupported(const std::string& command, ProblemKind kind) {
  throw ConfigError("subcommand '" + command + "' does not accept configs of kind '" +
                    to_string(kind) + "'");
}

struct Outcome {
  json results;
  int exit_code = kExitOk;
  std::optional<OperatorPath> trace;
};

template <class Config>
Outcome hamiltonian_sf(const Config& c, const HamiltonianPath& path, bool bifurcate) {
  Outcome out;
  const GalerkinSfResult g = galerkin_sf(path, c.galerkin.n0, c.galerkin.n_cap, c.scan.zero_tol);
  out.results["galerkin"] = galerkin_json(g);
  const OperatorPath q = galerkin_path(path, g.truncation);
  out.trace = q;
  CoefficientBoundsOptions bo;
  bo.t_samples = c.galerkin.t_samples;
  bo.with_galerkin = false;
  CoefficientBounds bounds = coefficient_bounds(path, bo);
  bounds.sandwich_holds = bounds.sandwich_low <= g.sf && g.sf <= bounds.sandwich_high;
  out.results["bounds"] = bounds_json(bounds);
  if (bifurcate) out.results["report"] = bifurcation_json(analyze_path(q, scan_options(c.scan)));
  return out;
}

Outcome run_sf(const ProblemConfig& config) {
  Outcome out;
  switch (config.kind) {
    case ProblemKind::matrix_path: {
      const auto& c = std::get<MatrixPathConfig>(config.payload);
      const OperatorPath path = matrix_path(c);
      out.results = sf_json(spectral_flow(path, scan_options(c.scan)));
      out.trace = path;
      return out;
    }
    case ProblemKind::hamiltonian_const: {
      const auto& c = std::get<HamiltonianConstConfig>(config.payload);
      if (c.lambdas.empty()) throw ConfigError("sf on hamiltonian_const needs lambdas+samples");
      out = hamiltonian_sf(c, hamiltonian_path(c), false);
      const auto start = hamiltonian_index(c.samples.front());
      const auto end = hamiltonian_index(c.samples.back());
      out.results["index_difference"] =
          (start.value && end.value) ? json(*end.value - *start.value) : json(nullptr);
      return out;
    }
    case ProblemKind::hamiltonian_periodic: {
      const auto& c = std::get<HamiltonianPeriodicConfig>(config.payload);
      return hamiltonian_sf(c, hamiltonian_path(c), false);
    }
    case ProblemKind::krasnoselskii: {
      const auto& c = std::get<KrasnoselskiiConfig>(config.payload);
      const OperatorPath path =
          OperatorPath::affine(c.c, c.d, -c.k, SymMatrix::identity(c.k.dim()));
      out.results = sf_json(spectral_flow(path, scan_options(c.scan)));
      out.trace = path;
      return out;
    }
    default: unsupported("sf", config.kind);
  }
}

Outcome run_index(const ProblemConfig& config) {
  if (config.kind != ProblemKind::hamiltonian_const) unsupported("index", config.kind);
  const auto& c = std::get<HamiltonianConstConfig>(config.payload);
  Outcome out;
  if (c.a_matrix) {
    out.results = index_json(hamiltonian_index(*c.a_matrix));
  }
  if (!c.lambdas.empty()) {
    const auto start = hamiltonian_index(c.samples.front());
    const auto end = hamiltonian_index(c.samples.back());
    out.results["start"] = index_json(start);
    out.results["end"] = index_json(end);
    out.results["difference"] =
        (start.value && end.value) ? json(*end.value - *start.value) : json(nullptr);
  }
  return out;
}

Outcome run_bifurcate(const ProblemConfig& config) {
  Outcome out;
  switch (config.kind) {
    case ProblemKind::matrix_path: {
      const auto& c = std::get<MatrixPathConfig>(config.payload);
      const OperatorPath path = matrix_path(c);
      out.results["report"] = bifurcation_json(analyze_path(path, scan_options(c.scan)));
      out.results["components"] = components_json(trace_components(path, scan_options(c.scan)));
      out.trace = path;
      return out;
    }
    case ProblemKind::hamiltonian_const: {
      const auto& c = std::get<HamiltonianConstConfig>(config.payload);
      if (c.lambdas.empty()) throw ConfigError("bifurcate on hamiltonian_const needs lambdas+samples");
      return hamiltonian_sf(c, hamiltonian_path(c), true);
    }
    case ProblemKind::hamiltonian_periodic: {
      const auto& c = std::get<HamiltonianPeriodicConfig>(config.payload);
      return hamiltonian_sf(c, hamiltonian_path(c), true);
    }
    case ProblemKind::krasnoselskii: {
      const auto& c = std::get<KrasnoselskiiConfig>(config.payload);
      const auto k = krasnoselskii(c.k, c.c, c.d, scan_options(c.scan));
      json eig = json::array();
      for (const auto& [value, mult] : k.eigenvalues) eig.push_back({{"value", value}, {"multiplicity", mult}});
      out.results["report"] = bifurcation_json(k.report);
      out.results["eigenvalues"] = eig;
      out.results["consistent"] = k.consistent;
      out.trace = OperatorPath::affine(c.c, c.d, -c.k, SymMatrix::identity(c.k.dim()));
      return out;
    }
    default: unsupported("bifurcate", config.kind);
  }
}

template <class F>
json lattice_json(const ComponentMap2D& map, F value) {
  json rows = json::array();
  for (std::size_t i = 0; i < map.ns; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < map.nt; ++j) row.push_back(value(map.node(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Outcome run_sweep(const ProblemConfig& config) {
  if (config.kind != ProblemKind::sweep2d) unsupported("sweep", config.kind);
  const auto& c = std::get<SweepConfig>(config.payload);
  SweepOptions options;
  options.edge_grid = c.edge_grid;
  options.zero_tol = c.zero_tol;
  const ComponentMap2D map = sweep2d(
      [&c](double s, double t) { return c.c + s * c.s + t * c.t + (s * t) * c.st; }, c.ns, c.nt,
      {c.base_s, c.base_t}, options);
  Outcome out;
  json defects = json::array();
  for (const auto& d : map.loop_defects) defects.push_back({{"i", d.i}, {"j", d.j}, {"sf", d.sf}});
  std::set<int> distinct;
  for (const auto& x : map.index) {
    if (x) distinct.insert(*x);
  }
  out.results = {
      {"lattice", {map.ns, map.nt}},
      {"base", {map.base.first, map.base.second}},
      {"s_values", map.s_values},
      {"t_values", map.t_values},
      {"singular_mask", lattice_json(map, [&](std::size_t n) { return map.singular_mask[n] ? 1 : 0; })},
      {"index", lattice_json(map, [&](std::size_t n) { return optional_int(map.index[n]); })},
      {"region", lattice_json(map, [&](std::size_t n) { return map.region[n]; })},
      {"region_count", map.region_count},
      {"distinct_indices", distinct},
      {"loop_defects", defects},
      {"cells_checked", map.cells_checked}};
  return out;
}

Outcome run_verify(const ProblemConfig& config) {
  if (config.kind != ProblemKind::verify) unsupported("verify", config.kind);
  const auto& c = std::get<VerifyConfig>(config.payload);
  AxiomOptions options;
  options.min_dim = c.min_dim;
  options.max_dim = c.max_dim;
  options.homotopy_slices = c.homotopy_slices;
  options.n_grid = c.grid;
  const AxiomReport r = verify_axioms(c.seed, c.trials, options);
  Outcome out;
  json checks = json::array();
  for (const auto& k : r.checks) {
    checks.push_back({{"name", k.name}, {"trials", k.trials}, {"failures", k.failures}});
  }
  out.results = {{"seed", r.seed},
                 {"trials", r.trials},
                 {"passed", r.passed},
                 {"checks", checks},
                 {"counterexample", r.counterexample.empty() ? json(nullptr) : json::parse(r.counterexample)}};
  out.exit_code = r.passed ? kExitOk : kExitNumerical;
  return out;
}

void apply_grid(ProblemConfig& config, std::size_t grid) {
  std::visit(
      [grid](auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SweepConfig>) {
          p.edge_grid = grid;
        } else if constexpr (std::is_same_v<T, VerifyConfig>) {
          p.grid = grid;
        } else {
          p.scan.grid = grid;
        }
      },
      config.payload);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

}  // namespace

std::optional<OperatorPath> trace_path(const ProblemConfig& config, int truncation) {
  switch (config.kind) {
    case ProblemKind::matrix_path: return matrix_path(std::get<MatrixPathConfig>(config.payload));
    case ProblemKind::krasnoselskii: {
      const auto& c = std::get<KrasnoselskiiConfig>(config.payload);
      return OperatorPath::affine(c.c, c.d, -c.k, SymMatrix::identity(c.k.dim()));
    }
    case ProblemKind::hamiltonian_const: {
      const auto& c = std::get<HamiltonianConstConfig>(config.payload);
      if (c.lambdas.empty()) return std::nullopt;
      return galerkin_path(hamiltonian_path(c), truncation);
    }
    case ProblemKind::hamiltonian_periodic:
      return galerkin_path(hamiltonian_path(std::get<HamiltonianPeriodicConfig>(config.payload)),
                           truncation);
    default: return std::nullopt;
  }
}

std::string trace_csv(const OperatorPath& path, std::size_t points) {
  if (points < 2) points = 2;
  std::string out = "lambda";
  for (std::size_t k = 1; k <= path.dim(); ++k) out += ",eig_" + std::to_string(k);
  out += '\n';
  char buf[40];
  const double a = path.lower(), b = path.upper();
  for (std::size_t i = 0; i < points; ++i) {
    const double lambda =
        i + 1 == points ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1);
    std::snprintf(buf, sizeof(buf), "%.17g", lambda);
    out += buf;
    for (double e : eigenvalues(path.evaluate(lambda))) {
      std::snprintf(buf, sizeof(buf), ",%.17g", e);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Spectral flow and bifurcation analysis of symmetric operator paths", kToolName};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1, 1);

  std::string config_path, out_path, trace_path_arg;
  std::uint64_t seed = 0;
  int trials = 0;
  std::size_t grid = 0;
  struct Sub {
    const char* name;
    const char* help;
  };
  const Sub subs[] = {{"sf", "spectral flow of a path"},
                      {"index", "Hamiltonian index i(A)"},
                      {"bifurcate", "bifurcation report and component trace"},
                      {"sweep", "2-D component index map"},
                      {"verify", "randomized axiom checks"}};
  std::vector<CLI::App*> commands;
  std::vector<CLI::Option*> seed_opts, trials_opts, grid_opts;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config_path, "problem config (JSON)");
    sub->add_option("--out", out_path, "write the report here instead of stdout");
    sub->add_option("--trace", trace_path_arg, "write a CSV of sorted eigenvalues along the path");
    seed_opts.push_back(sub->add_option("--seed", seed, "random seed (verify)"));
    trials_opts.push_back(sub->add_option("--trials", trials, "trials per check (verify)")->check(CLI::PositiveNumber));
    grid_opts.push_back(sub->add_option("--grid", grid, "lambda grid size")->check(CLI::Range(2, 1 << 24)));
    commands.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  std::size_t which = 0;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    if (commands[k]->parsed()) which = k;
  }
  const std::string command = subs[which].name;
  Overrides flags;
  if (seed_opts[which]->count()) flags.seed = seed;
  if (trials_opts[which]->count()) flags.trials = trials;
  if (grid_opts[which]->count()) flags.grid = grid;

  const auto start = std::chrono::steady_clock::now();
  try {
    ProblemConfig config;
    if (!config_path.empty()) {
      config = parse_config(read_file(config_path));
    } else if (command != "verify") {
      throw ConfigError("subcommand '" + command + "' requires --config");
    }
    for (const auto& w : config.warnings) std::cerr << "warning: " << w << "\n";
    if (flags.grid) apply_grid(config, *flags.grid);
    if (auto* v = std::get_if<VerifyConfig>(&config.payload)) {
      if (flags.seed) v->seed = *flags.seed;
      if (flags.trials) v->trials = *flags.trials;
    }

    Outcome outcome;
    if (command == "sf") outcome = run_sf(config);
    else if (command == "index") outcome = run_index(config);
    else if (command == "bifurcate") outcome = run_bifurcate(config);
    else if (command == "sweep") outcome = run_sweep(config);
    else outcome = run_verify(config);

    if (!trace_path_arg.empty()) {
      if (!outcome.trace) throw ConfigError("--trace is not available for this subcommand and kind");
      const std::size_t points = flags.grid.value_or(256);
      write_file(trace_path_arg, trace_csv(*outcome.trace, points));
    }

    json report;
    report["tool"] = kToolName;
    report["version"] = kToolVersion;
    report["command"] = command;
    report["kind"] = to_string(config.kind);
    report["config_hash"] = config_hash(config);
    report["warnings"] = config.warnings;
    report["results"] = std::move(outcome.results);
    report["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
      std::cout << text;
    } else {
      write_file(out_path, text);
    }
    if (outcome.exit_code == kExitNumerical) std::cerr << "error: axiom check failed\n";
    return outcome.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace sfbif::cli
