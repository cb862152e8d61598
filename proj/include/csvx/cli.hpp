#pragma once

// Run configuration and the four subcommands behind tools/csvx.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "csvx/algebra.hpp"
#include "csvx/solver.hpp"
#include "csvx/torus.hpp"

namespace csvx::cli {

enum ExitCode : int {
  kPass = 0,
  kFailure = 1,
  kNonexistent = 2,
  kParseError = 64,
  kIoError = 74,
};

struct RunConfig {
  Vec2 e1{1.0, 0.0}, e2{0.0, 1.0};
  int n1 = 128, n2 = 128;
  /// When set, `coupling` holds the preset's entries.
  std::optional<GaugePreset> preset = GaugePreset::A2;
  std::array<double, 4> coupling{2.0, 1.0, 1.0, 2.0};
  std::vector<Vortex> z1, z2;
  /// Exactly one of lambda and kappa.
  std::optional<double> lambda, kappa;
  double v = 1.0;
  SolveOptions solver;
  /// Lambda list for sweep.
  std::vector<double> sweep;
  bool second_solution = false;
  bool write_csv = false;
  std::string output = "out";

  CouplingMatrix coupling_matrix() const;
  PhysicalParams params() const;
  double resolved_lambda() const { return params().lambda; }
  VortexNumbers vortex_numbers() const;
  TorusLattice lattice() const { return {e1, e2}; }

  /// Throws Error(Parse) naming the first invalid field.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

/// Throws Error(Parse) on malformed or invalid input.
RunConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);
/// Error(Io) if the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

struct Overrides {
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  int workers = 1;
};

/// Applies --out / --seed on top of the file.
RunConfig apply(RunConfig c, const Overrides& o);

int cmd_solve(const RunConfig& c, std::ostream& out);
int cmd_sweep(const RunConfig& c, int workers, std::ostream& out);
int cmd_threshold(const RunConfig& c, std::ostream& out);
/// Loads v1/v2 dumps (default: <output>/v1.csvx and v2.csvx) and re-verifies.
int cmd_verify(const RunConfig& c, const std::filesystem::path& v1,
               const std::filesystem::path& v2, std::ostream& out);

/// Parses argv, dispatches, and maps errors to exit codes.
int run(int argc, char** argv);

}  // namespace csvx::cli
