#include "sigloc/dirac.hpp"

#include <cmath>

namespace sigloc {

namespace {

Eigen::MatrixXcd pauli(int k) {
  Eigen::MatrixXcd m(2, 2);
  switch (k) {
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

}  // namespace

CliffordSet clifford(int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("clifford: n out of range [1,4]");
  CliffordSet c;
  c.n = n;
  c.even = (n % 2 == 0);
  switch (n) {
    case 1:
      c.rep_dim = 1;
      c.sigma = {Eigen::MatrixXcd::Identity(1, 1)};
      break;
    case 2:
      c.rep_dim = 2;
      c.sigma = {pauli(1), pauli(2)};
      c.grading = pauli(3);
      break;
    case 3:
      c.rep_dim = 2;
      c.sigma = {pauli(1), pauli(2), pauli(3)};
      break;
    case 4: {
      c.rep_dim = 4;
      const Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
      Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(2, 2);
      auto offdiag = [&](const Eigen::MatrixXcd& b) {
        Eigen::MatrixXcd m(4, 4);
        m << zero, b.adjoint(), b, zero;
        return m;
      };
      c.sigma = {offdiag(pauli(1)), offdiag(pauli(2)), offdiag(pauli(3)),
                 offdiag(cplx(0, 1) * id2)};
      c.grading = Eigen::MatrixXcd::Zero(4, 4);
      c.grading.topLeftCorner(2, 2) = id2;
      c.grading.bottomRightCorner(2, 2) = -id2;
      break;
    }
  }
  return c;
}

DiracBundle build_dirac(int n, const GeometryPtr& geom, double rho,
                        bool shifted) {
  if (n < 1 || n > geom->dimension())
    throw std::invalid_argument("build_dirac: geometry lacks pairing axes");
  if (geom->ball_axes() > 0 && geom->ball_axes() != n)
    throw std::invalid_argument(
        "build_dirac: pairing axes must match the geometry's ball axes");
  if (geom->ball_axes() > 0 && std::abs(geom->radius() - rho) > 1e-12)
    throw std::invalid_argument("build_dirac: rho does not match geometry");

  DiracBundle b;
  b.cliff = clifford(n);
  b.geom = geom;
  b.rho = rho;
  b.shifted = shifted;
  const int C = b.cliff.rep_dim;
  const int N = geom->fiber();
  const int fib = C * N;
  const double shift = shifted ? 0.5 : 0.0;

  std::vector<Triplet> trips;
  for (std::size_t s = 0; s < geom->site_count(); ++s) {
    for (int k = 0; k < n; ++k) {
      const double pos = geom->coordinate(s, k) + shift;
      const auto& sig = b.cliff.sigma[k];
      for (int c1 = 0; c1 < C; ++c1) {
        for (int c2 = 0; c2 < C; ++c2) {
          const cplx v = sig(c1, c2) * pos;
          if (v == cplx(0, 0)) continue;
          for (int o = 0; o < N; ++o) {
            const auto row = static_cast<Eigen::Index>(s) * fib + c1 * N + o;
            const auto col = static_cast<Eigen::Index>(s) * fib + c2 * N + o;
            trips.emplace_back(row, col, v);
          }
        }
      }
    }
  }
  SparseCx d(b.base_dim(), b.base_dim());
  d.setFromTriplets(trips.begin(), trips.end());
  b.D = std::move(d);

  b.ball_mask.resize(geom->site_count());
  for (std::size_t s = 0; s < geom->site_count(); ++s) {
    // 4 * sum pos_k^2 against 4 rho^2, integer-exact on the half-integer grid.
    long long lhs4 = 0;
    for (int k = 0; k < n; ++k) {
      const long long t = 2LL * geom->coordinate(s, k) + (shifted ? 1 : 0);
      lhs4 += t * t;
    }
    b.ball_mask[s] = ball_contains_scaled(lhs4, rho) ? 1 : 0;
  }
  return b;
}

DiracBundle doubled(const DiracBundle& bundle, double mu) {
  if (mu <= 0) throw std::invalid_argument("doubled: mu must be positive");
  if (bundle.doubled) throw std::invalid_argument("doubled: already doubled");
  DiracBundle b = bundle;
  b.doubled = true;
  b.mu = mu;
  const Eigen::Index m = bundle.base_dim();
  std::vector<Triplet> trips;
  trips.reserve(2 * bundle.D.nonZeros() + 2 * m);
  for (int k = 0; k < bundle.D.outerSize(); ++k) {
    for (SparseCx::InnerIterator it(bundle.D, k); it; ++it) {
      trips.emplace_back(it.row(), it.col(), it.value());
      trips.emplace_back(m + it.row(), m + it.col(), -it.value());
    }
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    trips.emplace_back(i, m + i, mu);
    trips.emplace_back(m + i, i, mu);
  }
  SparseCx d(2 * m, 2 * m);
  d.setFromTriplets(trips.begin(), trips.end());
  b.D = std::move(d);
  // chi(D_mu^2 <= rho^2): per-site radius picks up mu^2.
  for (std::size_t s = 0; s < b.geom->site_count(); ++s) {
    double r2 = mu * mu;
    for (int k = 0; k < b.cliff.n; ++k) {
      const double p = b.geom->coordinate(s, k) + (b.shifted ? 0.5 : 0.0);
      r2 += p * p;
    }
    b.ball_mask[s] = (r2 <= b.rho * b.rho + 1e-12) ? 1 : 0;
  }
  return b;
}

Eigen::VectorXd DiracBundle::grading_diagonal() const {
  if (!even()) throw std::invalid_argument("grading on a non-even bundle");
  const int C = cliff.rep_dim;
  const int N = geom->fiber();
  Eigen::VectorXd g(bundle_dim());
  for (std::size_t s = 0; s < geom->site_count(); ++s)
    for (int c = 0; c < C; ++c)
      for (int o = 0; o < N; ++o)
        g[static_cast<Eigen::Index>(s) * C * N + c * N + o] =
            cliff.grading(c, c).real();
  return g;
}

Eigen::VectorXd DiracBundle::projection_diagonal() const {
  Eigen::VectorXd p(bundle_dim());
  const Eigen::Index fib = site_fiber();
  const Eigen::Index m = base_dim();
  for (int dup = 0; dup < dup_factor(); ++dup)
    for (std::size_t s = 0; s < geom->site_count(); ++s)
      for (Eigen::Index f = 0; f < fib; ++f)
        p[dup * m + static_cast<Eigen::Index>(s) * fib + f] =
            ball_mask[s] ? 1.0 : 0.0;
  return p;
}

std::vector<Eigen::Index> DiracBundle::reduced_indices() const {
  std::vector<Eigen::Index> idx;
  const Eigen::Index fib = site_fiber();
  const Eigen::Index m = base_dim();
  for (int dup = 0; dup < dup_factor(); ++dup)
    for (std::size_t s = 0; s < geom->site_count(); ++s)
      if (ball_mask[s])
        for (Eigen::Index f = 0; f < fib; ++f)
          idx.push_back(dup * m + static_cast<Eigen::Index>(s) * fib + f);
  return idx;
}

SparseCx lift_pairing_element(const DiracBundle& bundle,
                              const OperatorMatrix& a) {
  if (!a.geom->same_sites(*bundle.geom))
    throw std::invalid_argument("lift: geometry mismatch");
  if (a.geom->fiber() != bundle.geom->fiber())
    throw std::invalid_argument("lift: fiber mismatch");
  const int C = bundle.cliff.rep_dim;
  const int N = bundle.geom->fiber();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(a.mat.nonZeros()) * C + 16);
  for (int k = 0; k < a.mat.outerSize(); ++k) {
    for (SparseCx::InnerIterator it(a.mat, k); it; ++it) {
      const Eigen::Index s_row = it.row() / N, o_row = it.row() % N;
      const Eigen::Index s_col = it.col() / N, o_col = it.col() % N;
      for (int c = 0; c < C; ++c) {
        trips.emplace_back(s_row * C * N + c * N + o_row,
                           s_col * C * N + c * N + o_col, it.value());
      }
    }
  }
  const Eigen::Index m = bundle.base_dim();
  if (!bundle.doubled) {
    SparseCx lifted(m, m);
    lifted.setFromTriplets(trips.begin(), trips.end());
    return lifted;
  }
  // diag(lift(a), 1): the unitization lift keeping the class of a.
  for (Eigen::Index i = 0; i < m; ++i) trips.emplace_back(m + i, m + i, 1.0);
  SparseCx lifted(2 * m, 2 * m);
  lifted.setFromTriplets(trips.begin(), trips.end());
  return lifted;
}

}  // namespace sigloc
