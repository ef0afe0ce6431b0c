#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "sigloc/inertia.hpp"

namespace sigloc {

/// Sampled Hermitian path on [0, 1]. When `generator` is unset, refinement
/// interpolates linearly between neighboring samples (straight-line
/// segments).
struct FlowPath {
  std::vector<Eigen::MatrixXcd> samples;
  std::vector<double> grid;  // strictly increasing, same length
  std::function<Eigen::MatrixXcd(double)> generator;

  Eigen::MatrixXcd at(double t) const;
  void validate() const;
};

/// ec(P, Q) = tr((1-P) ^ Q) - tr((1-Q) ^ P), computed from the kernel of
/// (1-P) - Q; equals rank Q - rank P in finite dimension. Inputs must be
/// Hermitian idempotents within `proj_tol`.
long essential_codimension(const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& q,
                           double proj_tol = 1e-10);

struct FlowResult {
  long flow = 0;                 // sum of ec over consecutive samples
  long crossing_diagnostic = 0;  // signed crossings on the refined grid
  int refinements = 0;
  bool agree = false;
};

/// Spectral flow of a sampled Hermitian path with the kernel-inclusive
/// convention p = chi(T >= 0). Interior samples with eigenvalues inside
/// 1e-10 |T| of zero trigger grid bisection (depth <= 20) for the crossing
/// diagnostic.
FlowResult spectral_flow(const FlowPath& path, double zero_tol_rel = 1e-10);

struct SigFlowReport {
  long sf = 0;
  double half_sig_diff = 0;       // (Sig T1 - Sig T0) / 2
  double kernel_correction = 0;   // (tr P Ker T1 - tr P Ker T0) / 2
  bool equal = false;
};

/// SF(P T_t P + 1 - P) against (Sig(T1) - Sig(T0))/2 plus the kernel
/// correction; all samples must satisfy T = P T P.
SigFlowReport sig_flow_identity(const FlowPath& path, const Eigen::MatrixXcd& p,
                                double zero_tol_rel = 1e-10);

}  // namespace sigloc
