#pragma once

// Command-line front end: strict JSON problem configs, JSON reports, CSV
// eigenvalue traces.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sfbif/hamsys.hpp"
#include "sfbif/symlin.hpp"

namespace sfbif::cli {

inline constexpr const char* kToolName = "sfbif";
inline constexpr const char* kToolVersion = "0.1.0";

/// Malformed or schema-invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ProblemKind { matrix_path, hamiltonian_const, hamiltonian_periodic, sweep2d, krasnoselskii, verify };

const char* to_string(ProblemKind kind);

struct ScanSettings {
  std::size_t grid = 256;
  double zero_tol = kDefaultRelativeZeroTol;
  /// Filled with 1e-8 (b - a) when absent from the file.
  double eps_lambda = 0.0;
  friend bool operator==(const ScanSettings&, const ScanSettings&) = default;
};

/// Either sampled (`lambdas` + `matrices`, piecewise affine) or affine
/// (`base` + lambda `slope` on `interval`).
struct MatrixPathConfig {
  double a = 0.0;
  double b = 1.0;
  std::vector<double> lambdas;
  std::vector<SymMatrix> matrices;
  std::optional<SymMatrix> base;
  std::optional<SymMatrix> slope;
  ScanSettings scan;
  friend bool operator==(const MatrixPathConfig&, const MatrixPathConfig&) = default;
};

struct GalerkinSettings {
  std::optional<int> n0;
  int n_cap = 512;
  std::size_t t_samples = 1024;
  friend bool operator==(const GalerkinSettings&, const GalerkinSettings&) = default;
};

/// Constant-in-time coefficients: a single matrix `A` (index only) and/or a
/// lambda path of matrices.
struct HamiltonianConstConfig {
  std::optional<SymMatrix> a_matrix;
  std::vector<double> lambdas;
  std::vector<SymMatrix> samples;
  GalerkinSettings galerkin;
  ScanSettings scan;
  friend bool operator==(const HamiltonianConstConfig&, const HamiltonianConstConfig&) = default;
};

struct HamiltonianPeriodicConfig {
  std::vector<double> lambdas;
  std::vector<TimePeriodicCoeff> samples;
  GalerkinSettings galerkin;
  ScanSettings scan;
  friend bool operator==(const HamiltonianPeriodicConfig&, const HamiltonianPeriodicConfig&) = default;
};

/// family(s, t) = C + s S + t T + s t ST on [0,1]^2.
struct SweepConfig {
  std::size_t ns = 21;
  std::size_t nt = 21;
  double base_s = 0.0;
  double base_t = 0.0;
  SymMatrix c;
  SymMatrix s;
  SymMatrix t;
  SymMatrix st;
  std::size_t edge_grid = 16;
  double zero_tol = kDefaultRelativeZeroTol;
  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct KrasnoselskiiConfig {
  SymMatrix k;
  double c = 0.0;
  double d = 1.0;
  ScanSettings scan;
  friend bool operator==(const KrasnoselskiiConfig&, const KrasnoselskiiConfig&) = default;
};

struct VerifyConfig {
  std::uint64_t seed = 7;
  int trials = 500;
  std::size_t grid = 64;
  std::size_t min_dim = 2;
  std::size_t max_dim = 8;
  int homotopy_slices = 10;
  friend bool operator==(const VerifyConfig&, const VerifyConfig&) = default;
};

using Payload = std::variant<MatrixPathConfig, HamiltonianConstConfig, HamiltonianPeriodicConfig,
                             SweepConfig, KrasnoselskiiConfig, VerifyConfig>;

struct ProblemConfig {
  ProblemKind kind = ProblemKind::verify;
  Payload payload = VerifyConfig{};
  /// Adjustments made while filling defaults; not part of the config value.
  std::vector<std::string> warnings;

  friend bool operator==(const ProblemConfig& x, const ProblemConfig& y) {
    return x.kind == y.kind && x.payload == y.payload;
  }
};

/// Strict parse: unknown keys are rejected, defaults are filled, matrices
/// must be square and symmetric within 1e-9. Errors carry line and column
/// for syntax problems and a JSON path for schema problems.
ProblemConfig parse_config(const std::string& text);

/// Canonical serialization with every default written out.
nlohmann::json to_json(const ProblemConfig& config);
std::string serialize_config(const ProblemConfig& config);

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string config_hash(const ProblemConfig& config);

/// Lambda-path view of a config for --trace output; empty for kinds without
/// a single path.
std::optional<OperatorPath> trace_path(const ProblemConfig& config, int truncation);

/// CSV with header `lambda,eig_1,...,eig_d`, ascending eigenvalues, %.17g.
std::string trace_csv(const OperatorPath& path, std::size_t points);

/// Entry point; returns the process exit code (0 ok, 2 config error,
/// 3 numerical failure).
int run(int argc, const char* const* argv);

}  // namespace sfbif::cli
