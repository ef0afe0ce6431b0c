#pragma once

#include <cstdint>
#include <string>

#include "sigloc/bloch.hpp"
#include "sigloc/lattice.hpp"

namespace sigloc {

enum class ModelFamily { Qwz2d, StackedQwz3d, Chiral1d, StackedChiral2d };

ModelFamily family_from_string(const std::string& s);
std::string to_string(ModelFamily f);

/// Two-band tight-binding families.
///
///   qwz2d            h(k) = sin k1 s1 + sin k2 s2 + (m + cos k1 + cos k2) s3
///   stacked_qwz3d    qwz2d in (k1,k2) plus t_perp cos k3 s3
///   chiral1d         a(k) = m + e^{i k}
///   stacked_chiral2d a(k) = m + e^{i k1} + t_perp e^{i k2}
///
/// Chiral families have h = [[0, a^*], [a, 0]] in the orbital grading, with
/// orbital 0 the a-domain. Disorder: on-site potential for the even
/// families; a -> a (1 + diag(eps)) for the chiral ones, which keeps the
/// block form and leaves a invertible for small W. An optional rational
/// flux p/q threads the (axis 0, axis 1) plaquettes as Peierls phases in
/// the axis-1 hops.
struct ModelSpec {
  ModelFamily family = ModelFamily::Chiral1d;
  double m = 0.5;
  double t_perp = 0.0;
  double disorder = 0.0;  // W >= 0
  int flux_p = 0;         // flux = flux_p / flux_q per plaquette
  int flux_q = 1;

  int dimension() const;
  int fiber() const { return 2; }
  bool chiral() const {
    return family == ModelFamily::Chiral1d ||
           family == ModelFamily::StackedChiral2d;
  }
  /// Natural pairing-direction count: all axes for the flat families, the
  /// in-plane axes for the stacked ones.
  int strong_axes() const;
  int weak_axes() const { return chiral() ? 1 : 2; }
  double flux() const { return static_cast<double>(flux_p) / flux_q; }
};

OperatorMatrix build_hamiltonian(const ModelSpec& spec, const GeometryPtr& geom,
                                 std::uint64_t seed = 0,
                                 std::uint64_t sample_index = 0);

/// Extracts a from h = [[0, a^*], [a, 0]] (exact block form required);
/// throws if a is singular below `singular_tol` (relative). A negative
/// tolerance skips the invertibility check: the Dirichlet-ball compression
/// of a topologically nontrivial block carries exponentially small edge
/// singular values even when the bulk block is invertible.
OperatorMatrix chiral_block(const OperatorMatrix& h,
                            double singular_tol = 1e-10);

/// Momentum-space symbol of the clean model (disorder must be zero; flux
/// must be zero).
BlochMap bloch_map(const ModelSpec& spec);

/// Spectral gap min_k min |eig h(k)| and norm max_k |h(k)| of the clean
/// counterpart of the spec (disorder and flux dropped), on a grid
/// containing the high-symmetry points (exact minimizers for these
/// families).
double clean_gap(const ModelSpec& spec, int grid = 256);
double clean_norm(const ModelSpec& spec, int grid = 256);

/// Smallest singular value of a (dense).
double min_singular_value(const OperatorMatrix& a);

}  // namespace sigloc
