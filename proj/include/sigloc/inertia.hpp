#pragma once

#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "sigloc/lattice.hpp"

namespace sigloc {

enum class InertiaMethod { Eigencount, Factorization };

struct InertiaTriple {
  std::int64_t n_plus = 0;
  std::int64_t n_zero = 0;
  std::int64_t n_minus = 0;
  double zero_tol = 0;
  InertiaMethod method = InertiaMethod::Eigencount;

  std::int64_t signature() const { return n_plus - n_minus; }
  std::int64_t total() const { return n_plus + n_zero + n_minus; }
};

/// Near-singular pivot during factorization; callers fall back to the
/// eigenvalue count.
struct PivotBreakdown : ComputeError {
  using ComputeError::ComputeError;
};

double default_zero_tol(double norm, Eigen::Index dim);

/// Inertia by counting eigenvalues against +-zero_tol. zero_tol < 0 selects
/// the default rule max(1e-8 * |H|, dim * eps * |H|).
InertiaTriple inertia_eigen(const Eigen::MatrixXcd& h, double zero_tol = -1);
InertiaTriple inertia_eigen(const OperatorMatrix& h, double zero_tol = -1);

/// Inertia from a Hermitian indefinite LDL^* factorization (Bunch-Kaufman
/// with rook pivoting, threshold 0.64). Requires a spectral gap; a pivot
/// below `pivot_tol` (relative) throws PivotBreakdown. Sparse inputs above
/// the densification cutoff use an ordering-pivoted sparse LDL^* instead
/// (no 2x2 pivots), with the same breakdown guard.
InertiaTriple inertia_ldl(const Eigen::MatrixXcd& h, double pivot_tol = 1e-12);
InertiaTriple inertia_ldl(const OperatorMatrix& h, double pivot_tol = 1e-12);
InertiaTriple inertia_ldl(const SparseCx& h, double pivot_tol = 1e-12);

/// Inertia with automatic fallback: factorization first, eigenvalue count on
/// pivot breakdown.
InertiaTriple inertia_auto(const OperatorMatrix& h, double zero_tol = -1);

/// Sig(A^* T A) == Sig(T) for invertible A (both sides via eigenvalue
/// counts; tolerance on the congruence side is scaled by cond(A)^2).
struct SylvesterReport {
  std::int64_t sig_t = 0;
  std::int64_t sig_congruence = 0;
  double cond_a = 0;
  bool equal = false;
};
SylvesterReport sylvester_check(const Eigen::MatrixXcd& t,
                                const Eigen::MatrixXcd& a,
                                double zero_tol = -1);

}  // namespace sigloc
