#include "sigloc/localizer.hpp"

#include <cmath>

#include "sigloc/dense.hpp"

namespace sigloc {

AdmissibilityVerdict admissibility(double g, double norm_comm, double norm_h,
                                   double kappa, double rho) {
  if (g <= 0 || norm_comm <= 0 || norm_h <= 0 || kappa <= 0 || rho <= 0)
    throw std::invalid_argument("admissibility: inputs must be positive");
  AdmissibilityVerdict v;
  v.g = g;
  v.norm_comm = norm_comm;
  v.norm_h = norm_h;
  v.kappa = kappa;
  v.rho = rho;
  v.kappa_threshold = g * g * g / (12.0 * norm_comm * norm_h);
  v.rho_threshold = 2.0 * g / kappa;
  v.admissible = kappa <= v.kappa_threshold && rho > v.rho_threshold;
  return v;
}

GapCheck gap_check(const Eigen::VectorXd& eigenvalues, double g) {
  GapCheck gc;
  gc.min_abs_eig = eigenvalues.cwiseAbs().minCoeff();
  gc.pass = gc.min_abs_eig > g / 2;
  return gc;
}

GapCheck gap_check(const OperatorMatrix& l_reduced, double g) {
  if (!is_hermitian(l_reduced.mat))
    throw std::invalid_argument("gap_check: localizer is not Hermitian");
  return gap_check(hermitian_eigenvalues(l_reduced.dense()), g);
}

OperatorMatrix compress_to_ball(const SparseCx& full,
                                const DiracBundle& dirac) {
  const std::vector<Eigen::Index> keep = dirac.reduced_indices();
  std::vector<Eigen::Index> where(full.rows(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) where[keep[i]] = i;
  std::vector<Triplet> trips;
  for (int k = 0; k < full.outerSize(); ++k) {
    for (SparseCx::InnerIterator it(full, k); it; ++it) {
      const Eigen::Index r = where[it.row()], c = where[it.col()];
      if (r >= 0 && c >= 0) trips.emplace_back(r, c, it.value());
    }
  }
  SparseCx m(keep.size(), keep.size());
  m.setFromTriplets(trips.begin(), trips.end());
  const int fiber = dirac.dup_factor() * dirac.site_fiber();
  auto geom = dirac.geom->with_fiber(fiber);  // bookkeeping fiber N'
  return {geom, std::move(m), false};
}

namespace {

LocalizerBundle finish(Parity parity, const DiracBundle& dirac, double kappa,
                       const LocalizerParams& params, SparseCx&& full,
                       bool keep_full) {
  LocalizerBundle b;
  b.parity = parity;
  b.kappa = kappa;
  b.rho = dirac.rho;
  b.params = params;
  OperatorMatrix reduced = compress_to_ball(full, dirac);
  reduced.hermitian = true;
  if (!is_hermitian(reduced.mat))
    throw ComputeError("localizer assembly lost Hermiticity");
  b.reduced = std::move(reduced);
  if (keep_full) b.full = OperatorMatrix{nullptr, std::move(full), true};
  if (params.g > 0 && params.norm_h > 0 && params.norm_comm > 0)
    b.verdict =
        admissibility(params.g, params.norm_comm, params.norm_h, kappa, b.rho);
  return b;
}

}  // namespace

LocalizerBundle odd_localizer(const OperatorMatrix& a, const DiracBundle& dirac,
                              double kappa, const LocalizerParams& params,
                              bool keep_full) {
  if (dirac.even())
    throw std::invalid_argument("odd_localizer: bundle parity is even");
  if (kappa <= 0) throw std::invalid_argument("odd_localizer: kappa <= 0");
  const SparseCx a_lift = lift_pairing_element(dirac, a);
  const Eigen::Index m = dirac.bundle_dim();
  std::vector<Triplet> trips;
  trips.reserve(2 * (dirac.D.nonZeros() + a_lift.nonZeros()));
  for (int k = 0; k < dirac.D.outerSize(); ++k)
    for (SparseCx::InnerIterator it(dirac.D, k); it; ++it) {
      trips.emplace_back(it.row(), it.col(), kappa * it.value());
      trips.emplace_back(m + it.row(), m + it.col(), -kappa * it.value());
    }
  for (int k = 0; k < a_lift.outerSize(); ++k)
    for (SparseCx::InnerIterator it(a_lift, k); it; ++it) {
      trips.emplace_back(it.row(), m + it.col(), it.value());
      trips.emplace_back(m + it.col(), it.row(), std::conj(it.value()));
    }
  SparseCx full(2 * m, 2 * m);
  full.setFromTriplets(trips.begin(), trips.end());

  // Reduction: ball indices of both outer blocks.
  LocalizerBundle b;
  b.parity = Parity::Odd;
  b.kappa = kappa;
  b.rho = dirac.rho;
  b.params = params;
  std::vector<Eigen::Index> keep = dirac.reduced_indices();
  const std::size_t half = keep.size();
  keep.reserve(2 * half);
  for (std::size_t i = 0; i < half; ++i) keep.push_back(m + keep[i]);
  std::vector<Eigen::Index> where(2 * m, -1);
  for (std::size_t i = 0; i < keep.size(); ++i) where[keep[i]] = i;
  std::vector<Triplet> rt;
  for (int k = 0; k < full.outerSize(); ++k)
    for (SparseCx::InnerIterator it(full, k); it; ++it) {
      const Eigen::Index r = where[it.row()], c = where[it.col()];
      if (r >= 0 && c >= 0) rt.emplace_back(r, c, it.value());
    }
  SparseCx red(keep.size(), keep.size());
  red.setFromTriplets(rt.begin(), rt.end());
  const int fiber = 2 * dirac.dup_factor() * dirac.site_fiber();
  b.reduced = {dirac.geom->with_fiber(fiber), std::move(red), true};
  if (!is_hermitian(b.reduced.mat))
    throw ComputeError("odd localizer assembly lost Hermiticity");
  if (keep_full) b.full = OperatorMatrix{nullptr, std::move(full), true};
  if (params.g > 0 && params.norm_h > 0 && params.norm_comm > 0)
    b.verdict =
        admissibility(params.g, params.norm_comm, params.norm_h, kappa, b.rho);
  return b;
}

LocalizerBundle even_localizer(const OperatorMatrix& h,
                               const DiracBundle& dirac, double kappa,
                               const LocalizerParams& params, bool keep_full) {
  if (!dirac.even())
    throw std::invalid_argument("even_localizer: bundle parity is odd");
  if (kappa <= 0) throw std::invalid_argument("even_localizer: kappa <= 0");
  if (!is_hermitian(h.mat))
    throw std::invalid_argument("even_localizer: h is not Hermitian");
  const SparseCx h_lift = lift_pairing_element(dirac, h);
  const Eigen::VectorXd gamma = dirac.grading_diagonal();
  std::vector<Triplet> trips;
  trips.reserve(dirac.D.nonZeros() + h_lift.nonZeros());
  for (int k = 0; k < dirac.D.outerSize(); ++k)
    for (SparseCx::InnerIterator it(dirac.D, k); it; ++it)
      trips.emplace_back(it.row(), it.col(), kappa * it.value());
  // h gamma with [gamma, h] = 0: gamma acts by the row's grading sign.
  for (int k = 0; k < h_lift.outerSize(); ++k)
    for (SparseCx::InnerIterator it(h_lift, k); it; ++it)
      trips.emplace_back(it.row(), it.col(), gamma[it.row()] * it.value());
  SparseCx full(dirac.bundle_dim(), dirac.bundle_dim());
  full.setFromTriplets(trips.begin(), trips.end());
  return finish(Parity::Even, dirac, kappa, params, std::move(full), keep_full);
}

}  // namespace sigloc
