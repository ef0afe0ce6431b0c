#pragma once

#include <optional>

#include "sigloc/dirac.hpp"
#include "sigloc/lattice.hpp"

namespace sigloc {

enum class Parity { Even, Odd };

/// kappa <= g^3 / (12 |[D,h]| |h|) and rho > 2 g / kappa. The practical
/// verdict additionally accepts a pair whenever the measured localizer gap
/// clears g/4 (set by gap_check, reported separately).
struct AdmissibilityVerdict {
  double g = 0, norm_comm = 0, norm_h = 0, kappa = 0, rho = 0;
  double kappa_threshold = 0;  // g^3 / (12 |[D,h]| |h|)
  double rho_threshold = 0;    // 2 g / kappa
  bool admissible = false;
  std::optional<bool> practical;  // measured gap > g/4, once measured
};

AdmissibilityVerdict admissibility(double g, double norm_comm, double norm_h,
                                   double kappa, double rho);

struct GapCheck {
  double min_abs_eig = 0;
  bool pass = false;  // min |eig| > g/2
};

/// min |eigenvalue| of the reduced localizer against the g/2 bound.
GapCheck gap_check(const OperatorMatrix& l_reduced, double g);
GapCheck gap_check(const Eigen::VectorXd& eigenvalues, double g);

/// Measured Hamiltonian data entering the admissibility thresholds.
struct LocalizerParams {
  double g = 0;          // spectral gap of h
  double norm_h = 0;     // |h|
  double norm_comm = 0;  // |[D, h]|
};

struct LocalizerBundle {
  Parity parity = Parity::Odd;
  double kappa = 0;
  double rho = 0;
  LocalizerParams params;
  OperatorMatrix reduced;                 // L_{kappa,rho}, Hermitian
  std::optional<OperatorMatrix> full;     // kept when the volume exceeds the ball
  AdmissibilityVerdict verdict;
  std::optional<double> measured_gap;

  Eigen::Index dim() const { return reduced.dim(); }
};

/// Odd localizer L = [[kappa D, a], [a^*, -kappa D]] compressed to the ball,
/// with a lifted over the bundle's Clifford (and doubling) fiber. The outer
/// two-level index is the block grading: diag(1,-1) anticommutes with the
/// off-diagonal part and commutes with diag(D, -D).
LocalizerBundle odd_localizer(const OperatorMatrix& a, const DiracBundle& dirac,
                              double kappa, const LocalizerParams& params = {},
                              bool keep_full = false);

/// Even localizer L = kappa D + h gamma compressed to the ball; in the
/// grading of gamma this is [[h, kappa D_0^*], [kappa D_0, -h]].
LocalizerBundle even_localizer(const OperatorMatrix& h,
                               const DiracBundle& dirac, double kappa,
                               const LocalizerParams& params = {},
                               bool keep_full = false);

/// Entrywise compression to the bundle's ball indices.
OperatorMatrix compress_to_ball(const SparseCx& full, const DiracBundle& dirac);

}  // namespace sigloc
