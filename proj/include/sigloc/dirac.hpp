#pragma once

#include <vector>

#include "sigloc/lattice.hpp"

namespace sigloc {

/// Hermitian unitary generators of the complex Clifford algebra, pairwise
/// anticommuting, with a grading for even n. Representation dimension is
/// 2^floor(n/2): n=1 -> (1); n=2 -> (sx, sy), grading sz; n=3 -> (sx, sy,
/// sz); n=4 -> 4x4 generators with grading. Entries are in {0, +-1, +-i}.
struct CliffordSet {
  int n = 0;
  std::vector<Eigen::MatrixXcd> sigma;
  Eigen::MatrixXcd grading;  // even n only
  bool even = false;
  int rep_dim = 1;
};

CliffordSet clifford(int n);

/// Position-space Dirac operator D = sum_k sigma_k (x) (1/2 + X_k) over the
/// first n axes of a geometry, plus the ball projection. Basis per site:
/// (clifford index, orbital), clifford-major; the sparse operators below
/// act on sites x clifford x fiber. A doubled bundle replaces D by the
/// invertible D_mu = [[D, mu], [mu, -D]] on an outer two-level factor and
/// the pairing lifts a to diag(a, 1).
struct DiracBundle {
  CliffordSet cliff;
  GeometryPtr geom;   // fiber = orbital count the bundle pairs with
  double rho = 0;
  bool shifted = true;   // positions are x + 1/2 (x when false)
  bool doubled = false;
  double mu = 0;

  SparseCx D;                    // Hermitian, on the full bundle basis
  std::vector<char> ball_mask;   // per site, chi(D^2 <= rho^2)

  bool even() const { return cliff.even && !doubled; }
  int dup_factor() const { return doubled ? 2 : 1; }
  /// clifford x orbital fiber per site (without the doubling factor).
  int site_fiber() const { return cliff.rep_dim * geom->fiber(); }
  Eigen::Index base_dim() const {
    return static_cast<Eigen::Index>(geom->site_count()) * site_fiber();
  }
  Eigen::Index bundle_dim() const { return dup_factor() * base_dim(); }

  /// Diagonal of the grading gamma (x) 1 on the bundle basis (even only).
  Eigen::VectorXd grading_diagonal() const;
  /// 0/1 diagonal of P_rho on the bundle basis.
  Eigen::VectorXd projection_diagonal() const;
  /// Selected bundle indices (ball sites, all fiber components).
  std::vector<Eigen::Index> reduced_indices() const;
};

DiracBundle build_dirac(int n, const GeometryPtr& geom, double rho,
                        bool shifted = true);

/// Doubling: D_mu = [[D, mu], [mu, -D]], invertible with min singular value
/// >= mu; index pairings are unchanged.
DiracBundle doubled(const DiracBundle& bundle, double mu);

/// 1_lift (x) a on the bundle basis: clifford fiber acts trivially; for a
/// doubled bundle the result is diag(lift(a), 1).
SparseCx lift_pairing_element(const DiracBundle& bundle,
                              const OperatorMatrix& a);

}  // namespace sigloc
