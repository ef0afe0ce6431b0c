#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sigloc/weak.hpp"

namespace sigloc {

/// Run configuration shared by the CLI subcommands.
///
/// Grammar: INI-style sections with scalar keys and bracketed arrays.
///   # comment            (also ';')
///   [model]
///   family = chiral1d    # qwz2d | stacked_qwz3d | chiral1d | stacked_chiral2d
///   m = 0.5
///   t_perp = 0.0
///   disorder = 0.0
///   flux = 0/1           # rational p/q
///   [dirac]
///   n = 1                # pairing directions; default: family strong count
///   rho = 40.5
///   mu = 0.5             # doubling parameter (with shifted = false)
///   shifted = true       # positions x + 1/2 (false: x, requires mu > 0)
///   [localizer]
///   kappa = auto         # number or "auto"
///   practical = false
///   [run]
///   seed = 0
///   samples = 1
///   volumes = [4, 8, 16]
///   boundary = periodic  # periodic | dirichlet (the transverse cube)
///   workers = 1
///   [oracle]
///   grid = 40
///   [sweep]
///   kappas = [0.0125, 0.025, 0.05]   # empty: auto base x {1,2,4}
///   rhos = [20.5, 40.5]
///   [output]
///   path = out.csv
///   format = csv         # csv | json
///   [tolerances]
///   zero_tol = 1e-8      # override for inertia counting
///
/// Unknown sections or keys are rejected; all errors are reported together.
struct RunConfig {
  ModelSpec model;
  int n = -1;
  double rho = 0;
  std::optional<double> kappa;  // empty = auto
  bool practical = false;
  bool shifted = true;
  double mu = 0;
  std::vector<int> volumes = {4, 8, 16};
  Boundary volume_boundary = Boundary::Periodic;
  int samples = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  int oracle_grid = 40;
  std::vector<double> sweep_kappas;
  std::vector<double> sweep_rhos;
  std::string out_path;
  std::string format = "csv";
  std::optional<double> zero_tol;

  WeakRunConfig weak_config() const;
};

struct ParseOutcome {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;  // every problem found, not just the first
  bool ok() const { return errors.empty() && config.has_value(); }
};

ParseOutcome parse_config(const std::string& text);
ParseOutcome parse_config_file(const std::string& path);

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::vector<std::string>& errors);
  std::vector<std::string> errors;
};

}  // namespace sigloc
