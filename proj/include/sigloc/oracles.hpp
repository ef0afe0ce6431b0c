#pragma once

#include "sigloc/bloch.hpp"
#include "sigloc/models.hpp"

namespace sigloc {

/// Chern number of the occupied (negative-energy) bands via U(1) link
/// variables on an N_k x N_k grid. The plaquette orientation is fixed so
/// the value matches the index pairing computed from the localizer with the
/// generator ordering (sigma_1, sigma_2); it is the negative of the
/// curvature integral in the (k1, k2) orientation. Computed at N_k and
/// 2 N_k; throws if the integers disagree or the symbol gap closes on the
/// grid.
int fhs_chern(const BlochMap& bloch, int grid = 40);

/// Winding of det a(k) around the discretized circle, (1/2 pi) sum of
/// principal log increments, with the same refinement check.
int winding_number(const BlochMap& bloch, int grid = 40);

/// Weak invariant of a clean stacked model: the in-plane invariant of the
/// sub-symbol at fixed transverse momentum, checked to be independent of
/// the transverse momentum on a grid.
int weak_invariant_oracle(const ModelSpec& spec, int grid = 40,
                          int transverse_grid = 16);

}  // namespace sigloc
