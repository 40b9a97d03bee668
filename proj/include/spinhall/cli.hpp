#pragma once

#include "spinhall/transport.hpp"

#include <string>
#include <vector>

namespace spinhall::cli {

struct GridConfig {
  double p_max = 3.0;
  int points_per_axis = 41;  // odd, >= 3, symmetric about 0
};

struct OutputConfig {
  std::string path = "-";  // "-" = stdout
  std::string format = "csv";
};

struct RunConfig {
  Model model = Model::KM_SO;
  Basis basis = Basis::FW;
  bool basis_set = false;  // when false, defaults per model (FW / Psi)
  ModelParams params;
  GridConfig grid;
  QuadratureConfig quad;
  OutputConfig output;
  bool allow_out_of_regime = false;

  void validate() const;  // throws MalformedConfig / RegimeViolation
};

/// Parse a JSON config file into a RunConfig (defaults filled). Command-line
/// flags are applied on top by run_command.
RunConfig load_config(const std::string& path);

/// Exit codes: 0 success, 2 configuration error, 3 numerical-tolerance
/// failure. Subcommands: spectrum | curvature | chern | conductivity |
/// trajectory | check.
int run_command(const std::vector<std::string>& argv);

}  // namespace spinhall::cli
