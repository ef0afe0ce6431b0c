#include "sigloc/oracles.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "sigloc/dense.hpp"

namespace sigloc {

namespace {

constexpr double kGridGapTol = 1e-8;

int chern_once(const BlochMap& bloch, int nk) {
  if (bloch.torus_dim != 2)
    throw std::invalid_argument("fhs_chern: needs a 2-torus symbol");
  const double two_pi = 2 * std::numbers::pi;
  const int nb = bloch.fiber;

  // Occupied-frame per grid point.
  std::vector<Eigen::MatrixXcd> frame(static_cast<std::size_t>(nk) * nk);
  int occ = -1;
  for (int i = 0; i < nk; ++i) {
    for (int j = 0; j < nk; ++j) {
      Eigen::VectorXd k(2);
      k << two_pi * i / nk, two_pi * j / nk;
      auto [ev, vec] = hermitian_eigensystem(bloch.symbol(k));
      int neg = 0;
      for (Eigen::Index b = 0; b < ev.size(); ++b) {
        if (std::abs(ev[b]) < kGridGapTol)
          throw ComputeError("fhs_chern: symbol gap closes on the grid");
        if (ev[b] < 0) ++neg;
      }
      if (occ < 0) occ = neg;
      if (neg != occ)
        throw ComputeError("fhs_chern: occupied band count varies");
      frame[static_cast<std::size_t>(i) * nk + j] = vec.leftCols(neg);
    }
  }
  if (occ == 0 || occ == nb) return 0;

  auto link = [&](int i1, int j1, int i2, int j2) {
    const Eigen::MatrixXcd& a = frame[static_cast<std::size_t>(i1) * nk + j1];
    const Eigen::MatrixXcd& b = frame[static_cast<std::size_t>(i2) * nk + j2];
    return (a.adjoint() * b).determinant();
  };

  // Plaquette orientation matching the localizer pairing: traverse axis 2
  // first (the reverse of the (k1, k2) curvature orientation).
  double total = 0;
  for (int i = 0; i < nk; ++i) {
    for (int j = 0; j < nk; ++j) {
      const int ip = (i + 1) % nk, jp = (j + 1) % nk;
      const cplx w = link(i, j, i, jp) * link(i, jp, ip, jp) *
                     link(ip, jp, ip, j) * link(ip, j, i, j);
      total += std::arg(w);
    }
  }
  const double c = total / two_pi;
  const long r = std::lround(c);
  if (std::abs(c - r) > 1e-6)
    throw ComputeError("fhs_chern: curvature sum is not an integer");
  return static_cast<int>(r);
}

int winding_once(const BlochMap& bloch, int nk) {
  if (!bloch.chiral_block)
    throw std::invalid_argument("winding_number: symbol has no chiral block");
  const double two_pi = 2 * std::numbers::pi;
  std::vector<cplx> dets(nk);
  for (int j = 0; j < nk; ++j) {
    Eigen::VectorXd k(1);
    k << two_pi * j / nk;
    const Eigen::MatrixXcd a = bloch.chiral_block(k);
    dets[j] = a.determinant();
    if (std::abs(dets[j]) < kGridGapTol)
      throw ComputeError("winding_number: a(k) is singular on the grid");
  }
  double total = 0;
  for (int j = 0; j < nk; ++j)
    total += std::arg(dets[(j + 1) % nk] / dets[j]);
  const double w = total / two_pi;
  const long r = std::lround(w);
  if (std::abs(w - r) > 1e-6)
    throw ComputeError("winding_number: increments do not close to an integer");
  return static_cast<int>(r);
}

// Sub-symbol of a stacked model at fixed transverse momentum.
BlochMap slice_map(const BlochMap& full, int in_plane_dims, double k_perp) {
  BlochMap s;
  s.torus_dim = in_plane_dims;
  s.fiber = full.fiber;
  auto lift = [in_plane_dims, k_perp](const Eigen::VectorXd& k) {
    Eigen::VectorXd kk(in_plane_dims + 1);
    kk.head(in_plane_dims) = k;
    kk[in_plane_dims] = k_perp;
    return kk;
  };
  auto sym = full.symbol;
  s.symbol = [sym, lift](const Eigen::VectorXd& k) { return sym(lift(k)); };
  if (full.chiral_block) {
    auto blk = full.chiral_block;
    s.chiral_block = [blk, lift](const Eigen::VectorXd& k) {
      return blk(lift(k));
    };
  }
  return s;
}

}  // namespace

int fhs_chern(const BlochMap& bloch, int grid) {
  const int c1 = chern_once(bloch, grid);
  const int c2 = chern_once(bloch, 2 * grid);
  if (c1 != c2)
    throw ComputeError("fhs_chern: value not stable under grid refinement");
  return c1;
}

int winding_number(const BlochMap& bloch, int grid) {
  const int w1 = winding_once(bloch, grid);
  const int w2 = winding_once(bloch, 2 * grid);
  if (w1 != w2)
    throw ComputeError("winding_number: value not stable under refinement");
  return w1;
}

int weak_invariant_oracle(const ModelSpec& spec, int grid,
                          int transverse_grid) {
  if (spec.disorder != 0)
    throw std::invalid_argument("weak_invariant_oracle: clean models only");
  if (spec.family != ModelFamily::StackedQwz3d &&
      spec.family != ModelFamily::StackedChiral2d)
    throw std::invalid_argument("weak_invariant_oracle: stacked models only");
  const BlochMap full = bloch_map(spec);
  const int n = spec.weak_axes();
  const double two_pi = 2 * std::numbers::pi;
  int common = 0;
  bool first = true;
  for (int t = 0; t < transverse_grid; ++t) {
    const BlochMap s = slice_map(full, n, two_pi * t / transverse_grid);
    const int v = spec.chiral() ? winding_number(s, grid) : fhs_chern(s, grid);
    if (first) {
      common = v;
      first = false;
    } else if (v != common) {
      throw ComputeError(
          "weak_invariant_oracle: invariant depends on transverse momentum");
    }
  }
  return common;
}

}  // namespace sigloc
