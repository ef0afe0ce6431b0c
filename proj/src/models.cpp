#include "sigloc/models.hpp"

#include <cmath>
#include <numbers>

#include "sigloc/dense.hpp"

namespace sigloc {

namespace {

constexpr double kCriticalGapTol = 1e-6;

Eigen::Matrix2cd pauli2(int k) {
  Eigen::Matrix2cd m;
  switch (k) {
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

struct Hop {
  Coord r{};             // displacement; the adjoint hop is implied
  Eigen::Matrix2cd amp;  // <x+r| h |x> on the orbital fiber
};

// Onsite term plus one-sided hop list; h = M0 + sum_r (S_r amp_r + h.c.)
struct HopTable {
  Eigen::Matrix2cd onsite;
  std::vector<Hop> hops;
};

HopTable family_hops(const ModelSpec& spec) {
  HopTable t;
  t.onsite.setZero();
  const Eigen::Matrix2cd s1 = pauli2(1), s2 = pauli2(2), s3 = pauli2(3);
  switch (spec.family) {
    case ModelFamily::Qwz2d:
    case ModelFamily::StackedQwz3d: {
      t.onsite = spec.m * s3;
      Hop h1;  // +e1: (i/2) s1 + (1/2) s3  ->  sin k1 s1 + cos k1 s3
      h1.r[0] = 1;
      h1.amp = cplx(0, 0.5) * s1 + 0.5 * s3;
      Hop h2;
      h2.r[1] = 1;
      h2.amp = cplx(0, 0.5) * s2 + 0.5 * s3;
      t.hops = {h1, h2};
      if (spec.family == ModelFamily::StackedQwz3d) {
        Hop h3;  // t_perp cos k3 s3
        h3.r[2] = 1;
        h3.amp = (spec.t_perp / 2) * s3;
        t.hops.push_back(h3);
      }
      break;
    }
    case ModelFamily::Chiral1d:
    case ModelFamily::StackedChiral2d: {
      // h = [[0, a^*], [a, 0]]; a(k) = m + e^{ik1} (+ t_perp e^{ik2}):
      // the e^{ik} term is the hop with displacement -e, stored here as the
      // adjoint (+e) hop entering the upper-right block.
      t.onsite << 0, spec.m, spec.m, 0;
      Hop h1;
      h1.r[0] = 1;
      h1.amp << 0, 1, 0, 0;
      t.hops = {h1};
      if (spec.family == ModelFamily::StackedChiral2d) {
        Hop h2;
        h2.r[1] = 1;
        h2.amp << 0, spec.t_perp, 0, 0;
        t.hops.push_back(h2);
      }
      break;
    }
  }
  return t;
}

void add_block(std::vector<Triplet>& trips, Eigen::Index row_site,
               Eigen::Index col_site, const Eigen::Matrix2cd& amp, int fib) {
  for (int i = 0; i < fib; ++i)
    for (int j = 0; j < fib; ++j)
      if (amp(i, j) != cplx(0, 0))
        trips.emplace_back(row_site * fib + i, col_site * fib + j, amp(i, j));
}

}  // namespace

ModelFamily family_from_string(const std::string& s) {
  if (s == "qwz2d") return ModelFamily::Qwz2d;
  if (s == "stacked_qwz3d") return ModelFamily::StackedQwz3d;
  if (s == "chiral1d") return ModelFamily::Chiral1d;
  if (s == "stacked_chiral2d") return ModelFamily::StackedChiral2d;
  throw std::invalid_argument("unknown model family: " + s);
}

std::string to_string(ModelFamily f) {
  switch (f) {
    case ModelFamily::Qwz2d: return "qwz2d";
    case ModelFamily::StackedQwz3d: return "stacked_qwz3d";
    case ModelFamily::Chiral1d: return "chiral1d";
    case ModelFamily::StackedChiral2d: return "stacked_chiral2d";
  }
  return "?";
}

int ModelSpec::dimension() const {
  switch (family) {
    case ModelFamily::Qwz2d: return 2;
    case ModelFamily::StackedQwz3d: return 3;
    case ModelFamily::Chiral1d: return 1;
    case ModelFamily::StackedChiral2d: return 2;
  }
  return 0;
}

int ModelSpec::strong_axes() const {
  switch (family) {
    case ModelFamily::Qwz2d: return 2;
    case ModelFamily::StackedQwz3d: return 2;
    case ModelFamily::Chiral1d: return 1;
    case ModelFamily::StackedChiral2d: return 1;
  }
  return 0;
}

OperatorMatrix build_hamiltonian(const ModelSpec& spec, const GeometryPtr& geom,
                                 std::uint64_t seed,
                                 std::uint64_t sample_index) {
  if (geom->dimension() != spec.dimension())
    throw std::invalid_argument("build_hamiltonian: geometry dimension "
                                "does not match family");
  if (geom->fiber() != spec.fiber())
    throw std::invalid_argument("build_hamiltonian: fiber mismatch");
  if (spec.disorder < 0)
    throw std::invalid_argument("disorder strength must be >= 0");
  if (spec.flux_q < 1 || (spec.flux_p != 0 && spec.dimension() < 2))
    throw std::invalid_argument("flux requires q >= 1 and d >= 2");
  if (spec.flux_p != 0 && geom->dimension() >= 2 &&
      geom->boundary(0) == Boundary::Periodic &&
      (geom->cube_side() * spec.flux_p) % spec.flux_q != 0)
    throw std::invalid_argument(
        "flux: periodic volume must close the magnetic unit cell");
  {
    const double g0 = clean_gap(spec);
    if (g0 < kCriticalGapTol)
      throw ComputeError(
          "model parameters sit at a gap closing; move off the critical "
          "values (gap " + std::to_string(g0) + ")");
  }

  const int fib = geom->fiber();
  const HopTable table = family_hops(spec);
  std::vector<Triplet> trips;
  const double two_pi = 2 * std::numbers::pi;

  for (std::size_t s = 0; s < geom->site_count(); ++s) {
    add_block(trips, static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s),
              table.onsite, fib);
    for (const Hop& hop : table.hops) {
      Coord wraps{};
      const auto target = geom->hop(s, hop.r, &wraps);
      if (!target) continue;
      Eigen::Matrix2cd amp = hop.amp;
      if (spec.flux_p != 0 && hop.r[1] != 0) {
        // Landau gauge: axis-1 hops pick up exp(2 pi i flux x0 r1); a
        // periodic wrap keeps the phase of the unwrapped path.
        const double x0 = geom->coordinate(s, 0);
        amp *= std::exp(cplx(0, two_pi * spec.flux() * x0 * hop.r[1]));
      }
      add_block(trips, static_cast<Eigen::Index>(*target),
                static_cast<Eigen::Index>(s), amp, fib);
      add_block(trips, static_cast<Eigen::Index>(s),
                static_cast<Eigen::Index>(*target), amp.adjoint(), fib);
    }
  }
  SparseCx h(geom->basis_size(), geom->basis_size());
  h.setFromTriplets(trips.begin(), trips.end());

  if (spec.disorder > 0) {
    if (spec.chiral()) {
      // a -> a (1 + diag(eps)), one eps per site.
      std::vector<double> eps(geom->site_count());
      for (std::size_t s = 0; s < geom->site_count(); ++s)
        eps[s] = spec.disorder * (counter_uniform(seed, sample_index, s) - 0.5);
      // Right-multiplying a by (1 + eps) scales the columns of the a-block
      // (rows orbital 1, cols orbital 0) and symmetrically the a^* block.
      SparseCx scaled = h;
      for (int k = 0; k < scaled.outerSize(); ++k) {
        for (SparseCx::InnerIterator it(scaled, k); it; ++it) {
          const Eigen::Index o_row = it.row() % fib;
          const Eigen::Index o_col = it.col() % fib;
          if (o_row == 1 && o_col == 0) {
            it.valueRef() *= 1.0 + eps[it.col() / fib];
          } else if (o_row == 0 && o_col == 1) {
            it.valueRef() *= 1.0 + eps[it.row() / fib];
          }
        }
      }
      h = std::move(scaled);
    } else {
      h = h + disorder_potential(geom, spec.disorder, seed, sample_index).mat;
    }
  }
  return {geom, std::move(h), true};
}

OperatorMatrix chiral_block(const OperatorMatrix& h, double singular_tol) {
  const int fib = h.geom->fiber();
  if (fib % 2 != 0)
    throw std::invalid_argument("chiral_block: fiber is not even");
  const int half = fib / 2;
  auto geom_a = h.geom->with_fiber(half);
  std::vector<Triplet> trips;
  for (int k = 0; k < h.mat.outerSize(); ++k) {
    for (SparseCx::InnerIterator it(h.mat, k); it; ++it) {
      const Eigen::Index s_row = it.row() / fib, o_row = it.row() % fib;
      const Eigen::Index s_col = it.col() / fib, o_col = it.col() % fib;
      const bool row_hi = o_row >= half, col_hi = o_col >= half;
      if (row_hi == col_hi && it.value() != cplx(0, 0))
        throw std::invalid_argument(
            "chiral_block: operator has diagonal blocks; not chiral");
      if (row_hi && !col_hi)  // the a block
        trips.emplace_back(s_row * half + (o_row - half), s_col * half + o_col,
                           it.value());
    }
  }
  SparseCx a(geom_a->basis_size(), geom_a->basis_size());
  a.setFromTriplets(trips.begin(), trips.end());
  OperatorMatrix out{geom_a, std::move(a), false};
  if (singular_tol >= 0) {
    const double smin = min_singular_value(out);
    const double smax = operator_norm(out);
    if (smin <= singular_tol * std::max(1.0, smax))
      throw ComputeError("chiral_block: block is singular (min sv " +
                         std::to_string(smin) + ")");
  }
  return out;
}

BlochMap bloch_map(const ModelSpec& spec) {
  if (spec.disorder != 0)
    throw std::invalid_argument("bloch_map: disordered model has no symbol");
  if (spec.flux_p != 0)
    throw std::invalid_argument("bloch_map: flux threaded model has no "
                                "translation-invariant symbol");
  const HopTable table = family_hops(spec);
  const int d = spec.dimension();
  BlochMap bm;
  bm.torus_dim = d;
  bm.fiber = spec.fiber();
  bm.symbol = [table, d](const Eigen::VectorXd& k) {
    Eigen::MatrixXcd h = table.onsite;
    for (const Hop& hop : table.hops) {
      double phase = 0;
      for (int i = 0; i < d; ++i) phase -= k[i] * hop.r[i];
      const cplx e = std::exp(cplx(0, phase));
      h += e * hop.amp + std::conj(e) * hop.amp.adjoint();
    }
    return h;
  };
  if (spec.chiral()) {
    auto sym = bm.symbol;
    bm.chiral_block = [sym](const Eigen::VectorXd& k) {
      const Eigen::MatrixXcd h = sym(k);
      const int half = static_cast<int>(h.rows()) / 2;
      return Eigen::MatrixXcd(h.bottomLeftCorner(half, half));
    };
  }
  return bm;
}

double clean_gap(const ModelSpec& spec, int grid) {
  ModelSpec clean = spec;
  clean.disorder = 0;
  clean.flux_p = 0;
  clean.flux_q = 1;
  if (clean.dimension() >= 3) grid = std::min(grid, 64);
  const BlochMap bm = bloch_map(clean);
  const int d = bm.torus_dim;
  const double two_pi = 2 * std::numbers::pi;
  std::vector<int> idx(d, 0);
  Eigen::VectorXd k(d);
  double gap = std::numeric_limits<double>::infinity();
  while (true) {
    for (int i = 0; i < d; ++i) k[i] = two_pi * idx[i] / grid;
    const Eigen::VectorXd ev = hermitian_eigenvalues(bm.symbol(k));
    gap = std::min(gap, ev.cwiseAbs().minCoeff());
    int axis = d - 1;
    while (axis >= 0 && ++idx[axis] >= grid) idx[axis--] = 0;
    if (axis < 0) break;
  }
  return gap;
}

double clean_norm(const ModelSpec& spec, int grid) {
  ModelSpec clean = spec;
  clean.disorder = 0;
  clean.flux_p = 0;
  clean.flux_q = 1;
  if (clean.dimension() >= 3) grid = std::min(grid, 64);
  const BlochMap bm = bloch_map(clean);
  const int d = bm.torus_dim;
  const double two_pi = 2 * std::numbers::pi;
  std::vector<int> idx(d, 0);
  Eigen::VectorXd k(d);
  double nrm = 0;
  while (true) {
    for (int i = 0; i < d; ++i) k[i] = two_pi * idx[i] / grid;
    const Eigen::VectorXd ev = hermitian_eigenvalues(bm.symbol(k));
    nrm = std::max(nrm, ev.cwiseAbs().maxCoeff());
    int axis = d - 1;
    while (axis >= 0 && ++idx[axis] >= grid) idx[axis--] = 0;
    if (axis < 0) break;
  }
  return nrm;
}

double min_singular_value(const OperatorMatrix& a) {
  const Eigen::MatrixXcd d = a.dense();
  const Eigen::MatrixXcd g = d.adjoint() * d;
  const Eigen::VectorXd w = hermitian_eigenvalues(g);
  return std::sqrt(std::max(0.0, w.minCoeff()));
}

}  // namespace sigloc
