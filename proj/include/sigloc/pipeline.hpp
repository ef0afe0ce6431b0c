#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sigloc/inertia.hpp"
#include "sigloc/localizer.hpp"
#include "sigloc/models.hpp"

namespace sigloc {

/// End-to-end strong index pairing: model -> Dirac -> reduced localizer ->
/// half-signature, with the momentum-space oracle alongside for clean
/// models.
struct IndexRunConfig {
  ModelSpec model;
  int n = -1;                   // defaults to the model dimension
  double rho = 20.5;
  std::optional<double> kappa;  // empty: automatic
  bool practical = false;       // accept (kappa, rho) on a measured gap > g/4
  bool shifted = true;          // false: unshifted positions, requires mu > 0
  double mu = 0;                // doubling parameter
  int oracle_grid = 40;
  std::optional<double> zero_tol;  // default g/4
  std::uint64_t seed = 0;
  int sample = 0;
};

struct IndexRunResult {
  Parity parity = Parity::Odd;
  double rho = 0, kappa = 0;
  LocalizerParams params;
  AdmissibilityVerdict verdict;
  double measured_gap = 0;
  bool gap_pass = false;        // > g/2
  bool practical_pass = false;  // > g/4
  InertiaTriple by_eigen;
  std::optional<InertiaTriple> by_ldl;  // empty on pivot breakdown
  std::int64_t signature = 0;
  double pairing = 0;  // +sig/2 (odd), -sig/2 (even)
  std::optional<int> oracle;
  bool oracle_match = false;
  Eigen::Index dim = 0;
  std::vector<std::pair<double, double>> kappa_trials;  // (kappa, min |eig|)
};

IndexRunResult run_index_pairing(const IndexRunConfig& config);

/// Signature constancy over a (kappa, rho) grid.
struct SweepCell {
  double kappa = 0, rho = 0;
  bool admissible = false;
  bool practical_pass = false;
  double measured_gap = 0;
  std::int64_t signature = 0;
};
struct SweepResult {
  std::vector<SweepCell> cells;
  bool constant = false;
  std::int64_t signature = 0;  // the common value when constant
};
SweepResult run_sweep(const IndexRunConfig& base,
                      const std::vector<double>& kappas,
                      const std::vector<double>& rhos);

/// Builds the reduced localizer for explicit parameters (no oracle, no
/// automatic kappa); shared by the sweep and the tests.
LocalizerBundle build_reduced_localizer(const IndexRunConfig& config,
                                        double kappa, double rho,
                                        LocalizerParams* params_out = nullptr);

}  // namespace sigloc
