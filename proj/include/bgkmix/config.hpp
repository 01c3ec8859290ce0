#pragma once

#include <string>
#include <vector>

#include "estimates.hpp"
#include "solver.hpp"

namespace bgkmix {

/// Everything a CLI run needs. Built by parse_config; all parameters validated.
struct RunConfig {
  SimulationSettings sim;
  SuiteConfig suite;
  bool has_initial = false;

  // [params] alternatives kept for echoing
  bool delta_from_lambda = false;
  double lambda_u = 0.0;
  bool gamma_from_c = false;
  double c = 0.0;

  // [compare]
  std::vector<double> compare_dts{0.04, 0.02, 0.01};
  double ode_dt = 0.001;

  // [output] file names, relative to the --out directory
  std::string diagnostics_file = "diagnostics.csv";
  std::string estimates_file = "estimates.csv";
  std::string envelopes_file = "envelopes.csv";
  std::string macro_file = "macroscopic.csv";
};

/// Parses the sectioned key = value format (see README). Unknown keys, malformed values,
/// mutually exclusive keys and inadmissible parameters raise ConfigError / AdmissibilityError
/// naming the key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical text of a configuration with every default filled in.
std::string echo_config(const RunConfig& config);

/// Mean density of a species' initial data (spatial modulation averages out).
double initial_mean_density(const SpeciesInitial& init);

} // namespace bgkmix
