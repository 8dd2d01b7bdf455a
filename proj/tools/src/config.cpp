#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "sfbif/cli.hpp"

namespace sfbif::cli {

using nlohmann::json;

const char* to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::matrix_path: return "matrix_path";
    case ProblemKind::hamiltonian_const: return "hamiltonian_const";
    case ProblemKind::hamiltonian_periodic: return "hamiltonian_periodic";
    case ProblemKind::sweep2d: return "sweep2d";
    case ProblemKind::krasnoselskii: return "krasnoselskii";
    case ProblemKind::verify: return "verify";
  }
  return "unknown";
}

namespace {

constexpr double kSymmetryTol = 1e-9;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config error at '" + where + "': " + what);
}

// Object view that tracks consumed keys so leftovers can be rejected.
class Object {
 public:
  Object(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) fail(where(key), "missing required key");
    return j_.at(key);
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) fail(where(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where(key), "expected a finite number");
    return x;
  }

  double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key, long long min_value) {
    const json& v = at(key);
    if (!v.is_number_integer()) fail(where(key), "expected an integer");
    const long long x = v.get<long long>();
    if (x < min_value) fail(where(key), "must be >= " + std::to_string(min_value));
    return x;
  }

  long long integer_or(const std::string& key, long long min_value, long long fallback) {
    return has(key) ? integer(key, min_value) : fallback;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) fail(where(key), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

SymMatrix parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of rows");
  const std::size_t n = j.size();
  std::vector<double> entries(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = j[i];
    if (!row.is_array() || row.size() != n) {
      fail(where, "matrix must be square; row " + std::to_string(i) + " has " +
                      std::to_string(row.is_array() ? row.size() : 0) + " entries, expected " +
                      std::to_string(n));
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (!row[k].is_number()) {
        fail(where, "entry (" + std::to_string(i) + "," + std::to_string(k) + ") is not a number");
      }
      entries[i * n + k] = row[k].get<double>();
      if (!std::isfinite(entries[i * n + k])) {
        fail(where, "entry (" + std::to_string(i) + "," + std::to_string(k) + ") is not finite");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const double x = entries[i * n + k];
      const double y = entries[k * n + i];
      if (std::abs(x - y) > kSymmetryTol) {
        fail(where, "matrix is not symmetric: entry (" + std::to_string(i) + "," + std::to_string(k) +
                        ") = " + num(x) + " but entry (" + std::to_string(k) + "," +
                        std::to_string(i) + ") = " + num(y));
      }
    }
  }
  return SymMatrix(n, std::move(entries));
}

std::vector<SymMatrix> parse_matrix_list(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of matrices");
  std::vector<SymMatrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(parse_matrix(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<double> parse_grid(Object& o, const std::string& key) {
  const json& j = o.at(key);
  if (!j.is_array() || j.size() < 2) fail(o.where(key), "expected an array of at least two numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(o.where(key) + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(j[i].get<double>());
    if (i > 0 && !(out[i] > out[i - 1])) fail(o.where(key), "must be strictly increasing");
  }
  return out;
}

std::pair<double, double> parse_pair(Object& o, const std::string& key) {
  const json& j = o.at(key);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    fail(o.where(key), "expected [lower, upper]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

void require_same_dim(const std::vector<SymMatrix>& ms, const std::string& where) {
  for (std::size_t i = 1; i < ms.size(); ++i) {
    if (ms[i].dim() != ms[0].dim()) {
      fail(where + "[" + std::to_string(i) + "]", "dimension " + std::to_string(ms[i].dim()) +
                                                     " differs from " + std::to_string(ms[0].dim()));
    }
  }
}

ScanSettings parse_scan(Object& o, double a, double b) {
  ScanSettings s;
  s.grid = static_cast<std::size_t>(o.integer_or("grid", 2, 256));
  s.zero_tol = o.number_or("zero_tol", kDefaultRelativeZeroTol);
  if (!(s.zero_tol > 0.0)) fail(o.where("zero_tol"), "must be positive");
  s.eps_lambda = o.number_or("eps_lambda", 1e-8 * (b - a));
  if (!(s.eps_lambda > 0.0)) fail(o.where("eps_lambda"), "must be positive");
  return s;
}

GalerkinSettings parse_galerkin(Object& o, std::size_t harmonics, std::vector<std::string>& warnings) {
  GalerkinSettings g;
  if (o.has("N0")) {
    int n0 = static_cast<int>(o.integer("N0", 1));
    if (static_cast<std::size_t>(n0) < harmonics) {
      warnings.push_back("N0 = " + std::to_string(n0) + " is below the coefficient bandwidth M = " +
                         std::to_string(harmonics) + "; raised to M");
      n0 = static_cast<int>(harmonics);
    }
    g.n0 = n0;
  }
  g.n_cap = static_cast<int>(o.integer_or("N_cap", 1, 512));
  if (g.n0 && *g.n0 > g.n_cap) fail(o.where("N0"), "exceeds N_cap");
  g.t_samples = static_cast<std::size_t>(o.integer_or("t_samples", 4, 1024));
  if (g.t_samples < 4 * harmonics + 4) {
    fail(o.where("t_samples"), "must be >= 4M + 4 = " + std::to_string(4 * harmonics + 4));
  }
  return g;
}

void require_even(const SymMatrix& m, const std::string& where) {
  if (m.dim() % 2 != 0) fail(where, "Hamiltonian coefficients need even dimension 2n");
}

MatrixPathConfig parse_matrix_path(Object& o) {
  MatrixPathConfig c;
  const bool sampled = o.has("lambdas") || o.has("matrices");
  const bool affine = o.has("base") || o.has("slope");
  if (sampled == affine) fail("<root>", "matrix_path needs either lambdas+matrices or interval+base+slope");
  if (sampled) {
    c.lambdas = parse_grid(o, "lambdas");
    c.matrices = parse_matrix_list(o.at("matrices"), "matrices");
    if (c.matrices.size() != c.lambdas.size()) fail("matrices", "need one matrix per lambda");
    require_same_dim(c.matrices, "matrices");
    c.a = c.lambdas.front();
    c.b = c.lambdas.back();
  } else {
    std::tie(c.a, c.b) = parse_pair(o, "interval");
    if (!(c.a < c.b)) fail("interval", "need lower < upper");
    c.base = parse_matrix(o.at("base"), "base");
    c.slope = parse_matrix(o.at("slope"), "slope");
    if (c.base->dim() != c.slope->dim()) fail("slope", "dimension differs from base");
  }
  c.scan = parse_scan(o, c.a, c.b);
  return c;
}

HamiltonianConstConfig parse_hamiltonian_const(Object& o, std::vector<std::string>& warnings) {
  HamiltonianConstConfig c;
  if (o.has("A")) {
    c.a_matrix = parse_matrix(o.at("A"), "A");
    require_even(*c.a_matrix, "A");
  }
  const bool path = o.has("lambdas") || o.has("samples");
  if (path) {
    c.lambdas = parse_grid(o, "lambdas");
    c.samples = parse_matrix_list(o.at("samples"), "samples");
    if (c.samples.size() != c.lambdas.size()) fail("samples", "need one matrix per lambda");
    require_same_dim(c.samples, "samples");
    require_even(c.samples.front(), "samples[0]");
  }
  if (!c.a_matrix && !path) fail("<root>", "hamiltonian_const needs A or lambdas+samples");
  const double a = path ? c.lambdas.front() : 0.0;
  const double b = path ? c.lambdas.back() : 1.0;
  c.galerkin = parse_galerkin(o, 0, warnings);
  c.scan = parse_scan(o, a, b);
  return c;
}

TimePeriodicCoeff parse_coeff(const json& j, const std::string& where) {
  Object o(j, where);
  const SymMatrix a0 = parse_matrix(o.at("A0"), o.where("A0"));
  require_even(a0, o.where("A0"));
  std::vector<SymMatrix> cos_terms, sin_terms;
  if (o.has("cos")) cos_terms = parse_matrix_list(o.at("cos"), o.where("cos"));
  if (o.has("sin")) sin_terms = parse_matrix_list(o.at("sin"), o.where("sin"));
  o.finish();
  for (const auto* terms : {&cos_terms, &sin_terms}) {
    for (const auto& m : *terms) {
      if (m.dim() != a0.dim()) fail(where, "harmonic dimension differs from A0");
    }
  }
  return TimePeriodicCoeff(a0, std::move(cos_terms), std::move(sin_terms));
}

HamiltonianPeriodicConfig parse_hamiltonian_periodic(Object& o, std::vector<std::string>& warnings) {
  HamiltonianPeriodicConfig c;
  c.lambdas = parse_grid(o, "lambdas");
  const json& samples = o.at("samples");
  if (!samples.is_array() || samples.size() != c.lambdas.size()) {
    fail("samples", "need one coefficient object per lambda");
  }
  std::size_t harmonics = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    c.samples.push_back(parse_coeff(samples[i], "samples[" + std::to_string(i) + "]"));
    if (c.samples.back().dim() != c.samples.front().dim()) {
      fail("samples[" + std::to_string(i) + "]", "dimension differs from samples[0]");
    }
    harmonics = std::max(harmonics, c.samples.back().harmonics());
  }
  for (auto& s : c.samples) s = s.padded(harmonics);
  c.galerkin = parse_galerkin(o, harmonics, warnings);
  c.scan = parse_scan(o, c.lambdas.front(), c.lambdas.back());
  return c;
}

SweepConfig parse_sweep(Object& o) {
  SweepConfig c;
  const json& lattice = o.at("lattice");
  if (!lattice.is_array() || lattice.size() != 2 || !lattice[0].is_number_integer() ||
      !lattice[1].is_number_integer() || lattice[0].get<long long>() < 2 ||
      lattice[1].get<long long>() < 2) {
    fail("lattice", "expected [ns, nt] with integers >= 2");
  }
  c.ns = lattice[0].get<std::size_t>();
  c.nt = lattice[1].get<std::size_t>();
  std::tie(c.base_s, c.base_t) = parse_pair(o, "base");
  if (c.base_s < 0.0 || c.base_s > 1.0 || c.base_t < 0.0 || c.base_t > 1.0) {
    fail("base", "must lie in [0,1]^2");
  }
  c.c = parse_matrix(o.at("C"), "C");
  const std::size_t n = c.c.dim();
  const auto optional_term = [&](const char* key) {
    if (!o.has(key)) return SymMatrix(n);
    SymMatrix m = parse_matrix(o.at(key), key);
    if (m.dim() != n) fail(key, "dimension differs from C");
    return m;
  };
  c.s = optional_term("S");
  c.t = optional_term("T");
  c.st = optional_term("ST");
  c.edge_grid = static_cast<std::size_t>(o.integer_or("edge_grid", 2, 16));
  c.zero_tol = o.number_or("zero_tol", kDefaultRelativeZeroTol);
  if (!(c.zero_tol > 0.0)) fail("zero_tol", "must be positive");
  return c;
}

KrasnoselskiiConfig parse_krasnoselskii(Object& o) {
  KrasnoselskiiConfig c;
  c.k = parse_matrix(o.at("K"), "K");
  std::tie(c.c, c.d) = parse_pair(o, "interval");
  if (!(c.c < c.d)) fail("interval", "need lower < upper");
  c.scan = parse_scan(o, c.c, c.d);
  return c;
}

VerifyConfig parse_verify(Object& o) {
  VerifyConfig c;
  c.seed = static_cast<std::uint64_t>(o.integer_or("seed", 0, 7));
  c.trials = static_cast<int>(o.integer_or("trials", 1, 500));
  c.grid = static_cast<std::size_t>(o.integer_or("grid", 2, 64));
  c.min_dim = static_cast<std::size_t>(o.integer_or("min_dim", 1, 2));
  c.max_dim = static_cast<std::size_t>(o.integer_or("max_dim", 1, 8));
  if (c.min_dim > c.max_dim) fail("max_dim", "must be >= min_dim");
  c.homotopy_slices = static_cast<int>(o.integer_or("homotopy_slices", 2, 10));
  return c;
}

json matrix_json(const SymMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrix_list_json(const std::vector<SymMatrix>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(matrix_json(m));
  return out;
}

void put_scan(json& j, const ScanSettings& s) {
  j["grid"] = s.grid;
  j["zero_tol"] = s.zero_tol;
  j["eps_lambda"] = s.eps_lambda;
}

void put_galerkin(json& j, const GalerkinSettings& g) {
  if (g.n0) j["N0"] = *g.n0;
  j["N_cap"] = g.n_cap;
  j["t_samples"] = g.t_samples;
}

json coeff_json(const TimePeriodicCoeff& c) {
  json j;
  j["A0"] = matrix_json(c.mean());
  json cos_terms = json::array(), sin_terms = json::array();
  for (std::size_t m = 1; m <= c.harmonics(); ++m) {
    cos_terms.push_back(matrix_json(c.cos_term(m)));
    sin_terms.push_back(matrix_json(c.sin_term(m)));
  }
  j["cos"] = std::move(cos_terms);
  j["sin"] = std::move(sin_terms);
  return j;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

ProblemConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    std::string what = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at ...: " prefix.
    const auto colon = what.find(": ");
    if (colon != std::string::npos) what = what.substr(colon + 2);
    throw ConfigError("config parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ": " + what);
  }
  Object o(root, "");
  const json& kind = o.at("kind");
  if (!kind.is_string()) fail("kind", "expected a string");
  const std::string k = kind.get<std::string>();

  ProblemConfig config;
  if (k == "matrix_path") {
    config.kind = ProblemKind::matrix_path;
    config.payload = parse_matrix_path(o);
  } else if (k == "hamiltonian_const") {
    config.kind = ProblemKind::hamiltonian_const;
    config.payload = parse_hamiltonian_const(o, config.warnings);
  } else if (k == "hamiltonian_periodic") {
    config.kind = ProblemKind::hamiltonian_periodic;
    config.payload = parse_hamiltonian_periodic(o, config.warnings);
  } else if (k == "sweep2d") {
    config.kind = ProblemKind::sweep2d;
    config.payload = parse_sweep(o);
  } else if (k == "krasnoselskii") {
    config.kind = ProblemKind::krasnoselskii;
    config.payload = parse_krasnoselskii(o);
  } else if (k == "verify") {
    config.kind = ProblemKind::verify;
    config.payload = parse_verify(o);
  } else {
    fail("kind", "unknown kind '" + k +
                     "' (expected matrix_path, hamiltonian_const, hamiltonian_periodic, sweep2d, "
                     "krasnoselskii or verify)");
  }
  o.finish();
  return config;
}

json to_json(const ProblemConfig& config) {
  json j;
  j["kind"] = to_string(config.kind);
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, MatrixPathConfig>) {
          if (p.base) {
            j["interval"] = {p.a, p.b};
            j["base"] = matrix_json(*p.base);
            j["slope"] = matrix_json(*p.slope);
          } else {
            j["lambdas"] = p.lambdas;
            j["matrices"] = matrix_list_json(p.matrices);
          }
          put_scan(j, p.scan);
        } else if constexpr (std::is_same_v<T, HamiltonianConstConfig>) {
          if (p.a_matrix) j["A"] = matrix_json(*p.a_matrix);
          if (!p.lambdas.empty()) {
            j["lambdas"] = p.lambdas;
            j["samples"] = matrix_list_json(p.samples);
          }
          put_galerkin(j, p.galerkin);
          put_scan(j, p.scan);
        } else if constexpr (std::is_same_v<T, HamiltonianPeriodicConfig>) {
          j["lambdas"] = p.lambdas;
          json samples = json::array();
          for (const auto& s : p.samples) samples.push_back(coeff_json(s));
          j["samples"] = std::move(samples);
          put_galerkin(j, p.galerkin);
          put_scan(j, p.scan);
        } else if constexpr (std::is_same_v<T, SweepConfig>) {
          j["lattice"] = {p.ns, p.nt};
          j["base"] = {p.base_s, p.base_t};
          j["C"] = matrix_json(p.c);
          j["S"] = matrix_json(p.s);
          j["T"] = matrix_json(p.t);
          j["ST"] = matrix_json(p.st);
          j["edge_grid"] = p.edge_grid;
          j["zero_tol"] = p.zero_tol;
        } else if constexpr (std::is_same_v<T, KrasnoselskiiConfig>) {
          j["K"] = matrix_json(p.k);
          j["interval"] = {p.c, p.d};
          put_scan(j, p.scan);
        } else {
          j["seed"] = p.seed;
          j["trials"] = p.trials;
          j["grid"] = p.grid;
          j["min_dim"] = p.min_dim;
          j["max_dim"] = p.max_dim;
          j["homotopy_slices"] = p.homotopy_slices;
        }
      },
      config.payload);
  return j;
}

std::string serialize_config(const ProblemConfig& config) { return to_json(config).dump(2) + "\n"; }

std::string config_hash(const ProblemConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_json(config).dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace sfbif::cli
