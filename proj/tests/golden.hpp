#pragma once

// Golden-report helpers shared by the unit and acceptance tests.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "sfbif/cli.hpp"

namespace golden {

struct Case {
  const char* command;
  const char* config;  ///< file name under SFBIF_CONFIG_DIR
  const char* golden;  ///< file name under SFBIF_GOLDEN_DIR
};

inline const std::vector<Case>& cases() {
  static const std::vector<Case> list = {
      {"sf", "path_diag.json", "sf_path_diag.json"},
      {"bifurcate", "hamiltonian_worked.json", "bifurcate_hamiltonian_worked.json"},
      {"sweep", "sweep_quadrants.json", "sweep_sweep_quadrants.json"},
  };
  return list;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// The wall-clock field is the only nondeterministic part of a report.
inline std::string strip_timestamp(const std::string& report) {
  static const std::regex field(R"("wall_time_s": [-+0-9.eE]+)");
  return std::regex_replace(report, field, "\"wall_time_s\": 0");
}

struct RunResult {
  int exit_code = -1;
  std::string report;
};

/// Runs the CLI in-process with --out to a temporary file.
inline RunResult run_cli(const std::string& command, const std::string& config_path) {
  const auto out = std::filesystem::temp_directory_path() /
                   ("sfbif_golden_" + command + "_" + std::filesystem::path(config_path).stem().string() + ".json");
  const std::string out_str = out.string();
  const char* argv[] = {"sfbif", command.c_str(), "--config", config_path.c_str(), "--out", out_str.c_str()};
  RunResult r;
  r.exit_code = sfbif::cli::run(6, argv);
  r.report = strip_timestamp(read_text(out));
  std::filesystem::remove(out);
  return r;
}

}  // namespace golden
