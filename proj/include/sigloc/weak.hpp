#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigloc/inertia.hpp"
#include "sigloc/localizer.hpp"
#include "sigloc/models.hpp"

namespace sigloc {

/// Run description for the trace-per-volume signature on the cylinder
/// B_rho^n x V_ell. The first n axes carry the Dirac pairing (Dirichlet
/// ball); the remaining d-n axes form the cube V_ell.
struct WeakRunConfig {
  ModelSpec model;
  int weak_directions = 1;  // n < d; parity must match the family
  double rho = 10.5;        // half-integer grid
  double kappa = 0;         // <= 0 requests automatic (practical) choice
  bool practical = true;
  std::vector<int> volumes = {4, 8, 16};
  Boundary volume_boundary = Boundary::Periodic;
  int samples = 1;
  std::uint64_t seed = 0;
  double exclusion_gap_fraction = 0.125;  // exclude below g_clean/8
  double max_excluded_fraction = 0.2;

  void validate() const;
};

struct WeakSampleRow {
  int ell = 0;
  int sample = 0;
  InertiaTriple inertia;
  std::int64_t ball_sites = 0;
  std::int64_t volume_sites = 0;   // |V_ell| = ell^(d-n)
  double scaled_signature = 0;     // (n+ - n-) / |V_ell|
  double gap_margin = 0;           // min |eig|
  bool excluded = false;
};

struct WeakVolumeStats {
  int ell = 0;
  double mean = 0;       // of scaled signatures over included samples
  double std_error = 0;
  int included = 0;
  int excluded = 0;
};

struct WeakResult {
  Parity parity = Parity::Odd;
  double kappa = 0, rho = 0, g_clean = 0;
  AdmissibilityVerdict verdict;
  std::vector<WeakSampleRow> rows;
  std::vector<WeakVolumeStats> per_volume;
  double invariant_estimate = 0;  // (+1/2 odd, -1/2 even) x mean at largest ell
  std::int64_t rounded_invariant = 0;
  double distance_to_integer = 0;
};

/// Localizer for one (volume, disorder sample) cell of the run grid.
LocalizerBundle weak_localizer(const WeakRunConfig& config, int ell,
                               int sample, double kappa_override = 0);

/// The full run: per-(ell, sample) inertia, per-volume statistics, and the
/// rounded invariant. Deterministic for a fixed config and seed; the
/// (ell, sample) grid is evaluated by `workers` threads with an
/// order-independent merge.
WeakResult trace_per_volume_signature(const WeakRunConfig& config,
                                      int workers = 1);

std::string weak_result_csv(const WeakResult& result);
std::string weak_result_json(const WeakRunConfig& config,
                             const WeakResult& result);

}  // namespace sigloc
