#include "sigloc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sigloc/dense.hpp"

namespace sigloc {

namespace {

std::uint64_t pack_coord(const Coord& c) {
  std::uint64_t key = 0;
  for (int i = 0; i < kMaxDim; ++i) {
    key = (key << 16) | static_cast<std::uint16_t>(c[i] + 16384);
  }
  return key;
}

// 4*sum (x_i + 1/2)^2 as an integer.
long long scaled_ball_radius2(const Coord& c, int n) {
  long long s = 0;
  for (int i = 0; i < n; ++i) {
    long long t = 2LL * c[i] + 1;
    s += t * t;
  }
  return s;
}

bool ball_contains(const Coord& c, int n, double rho) {
  return ball_contains_scaled(scaled_ball_radius2(c, n), rho);
}

std::vector<int> cube_coords(int side) {
  std::vector<int> xs(side);
  const int lo = -(side / 2);
  for (int i = 0; i < side; ++i) xs[i] = lo + i;
  return xs;
}

}  // namespace

void LatticeGeometry::build_index() {
  std::sort(sites_.begin(), sites_.end());
  rank_of_.reserve(sites_.size());
  for (std::size_t r = 0; r < sites_.size(); ++r) {
    rank_of_.emplace(pack_coord(sites_[r]), r);
  }
  if (sites_.empty()) throw std::invalid_argument("geometry has no sites");
}

std::shared_ptr<const LatticeGeometry> LatticeGeometry::ball(int n, double rho,
                                                             int fiber) {
  if (n < 1 || n > kMaxDim) throw std::invalid_argument("ball dimension out of range");
  if (rho <= 0) throw std::invalid_argument("ball radius must be positive");
  if (fiber < 1) throw std::invalid_argument("fiber must be positive");
  auto g = std::shared_ptr<LatticeGeometry>(new LatticeGeometry());
  g->kind_ = SiteSetKind::Ball;
  g->dim_ = n;
  g->ball_axes_ = n;
  g->rho_ = rho;
  g->fiber_ = fiber;
  g->boundary_.assign(n, Boundary::Dirichlet);
  const int reach = static_cast<int>(std::ceil(rho)) + 1;
  Coord c{};
  std::vector<Coord> out;
  // Enumerate the bounding box; membership decides.
  std::vector<int> idx(n, -reach);
  while (true) {
    for (int i = 0; i < n; ++i) c[i] = idx[i];
    if (ball_contains(c, n, rho)) out.push_back(c);
    int axis = n - 1;
    while (axis >= 0 && ++idx[axis] > reach) idx[axis--] = -reach;
    if (axis < 0) break;
  }
  g->sites_ = std::move(out);
  g->build_index();
  return g;
}

std::shared_ptr<const LatticeGeometry> LatticeGeometry::cube(int d, int side,
                                                             Boundary boundary,
                                                             int fiber) {
  if (d < 1 || d > kMaxDim) throw std::invalid_argument("cube dimension out of range");
  if (side < 1) throw std::invalid_argument("cube side must be positive");
  if (fiber < 1) throw std::invalid_argument("fiber must be positive");
  auto g = std::shared_ptr<LatticeGeometry>(new LatticeGeometry());
  g->kind_ = SiteSetKind::Cube;
  g->dim_ = d;
  g->ball_axes_ = 0;
  g->side_ = side;
  g->fiber_ = fiber;
  g->boundary_.assign(d, boundary);
  const auto xs = cube_coords(side);
  Coord c{};
  std::vector<int> idx(d, 0);
  while (true) {
    for (int i = 0; i < d; ++i) c[i] = xs[idx[i]];
    g->sites_.push_back(c);
    int axis = d - 1;
    while (axis >= 0 && ++idx[axis] >= side) idx[axis--] = 0;
    if (axis < 0) break;
  }
  g->build_index();
  return g;
}

std::shared_ptr<const LatticeGeometry> LatticeGeometry::cylinder(
    int n, double rho, int d, int side, Boundary cube_boundary, int fiber) {
  if (n < 1 || n >= d || d > kMaxDim)
    throw std::invalid_argument("cylinder needs 1 <= n < d <= 4");
  auto b = ball(n, rho, 1);
  auto g = std::shared_ptr<LatticeGeometry>(new LatticeGeometry());
  g->kind_ = SiteSetKind::Product;
  g->dim_ = d;
  g->ball_axes_ = n;
  g->rho_ = rho;
  g->side_ = side;
  g->fiber_ = fiber;
  g->boundary_.assign(n, Boundary::Dirichlet);
  for (int i = n; i < d; ++i) g->boundary_.push_back(cube_boundary);
  const auto xs = cube_coords(side);
  const int dc = d - n;
  std::vector<int> idx(dc, 0);
  for (const Coord& bc : b->sites()) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      Coord c = bc;
      for (int i = 0; i < dc; ++i) c[n + i] = xs[idx[i]];
      g->sites_.push_back(c);
      int axis = dc - 1;
      while (axis >= 0 && ++idx[axis] >= side) idx[axis--] = 0;
      if (axis < 0) break;
    }
  }
  g->build_index();
  return g;
}

Boundary LatticeGeometry::boundary(int axis) const {
  if (axis < 0 || axis >= dim_) throw std::invalid_argument("axis out of range");
  return boundary_[axis];
}

std::optional<std::size_t> LatticeGeometry::site_rank(const Coord& c) const {
  auto it = rank_of_.find(pack_coord(c));
  if (it == rank_of_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> LatticeGeometry::hop(std::size_t rank,
                                                const Coord& displacement,
                                                Coord* wraps) const {
  Coord c = sites_[rank];
  if (wraps) wraps->fill(0);
  for (int axis = 0; axis < dim_; ++axis) {
    c[axis] += displacement[axis];
    if (displacement[axis] != 0 && boundary_[axis] == Boundary::Periodic) {
      const int lo = -(side_ / 2);
      const int hi = lo + side_ - 1;
      int w = 0;
      while (c[axis] > hi) { c[axis] -= side_; ++w; }
      while (c[axis] < lo) { c[axis] += side_; --w; }
      if (wraps) (*wraps)[axis] = w;
    }
  }
  return site_rank(c);
}

std::shared_ptr<const LatticeGeometry> LatticeGeometry::with_fiber(
    int fiber) const {
  if (fiber < 1) throw std::invalid_argument("fiber must be positive");
  auto g = std::shared_ptr<LatticeGeometry>(new LatticeGeometry(*this));
  g->fiber_ = fiber;
  return g;
}

bool LatticeGeometry::same_sites(const LatticeGeometry& other) const {
  return dim_ == other.dim_ && sites_ == other.sites_;
}

std::string LatticeGeometry::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case SiteSetKind::Ball: os << "ball(n=" << dim_ << ",rho=" << rho_ << ")"; break;
    case SiteSetKind::Cube: os << "cube(d=" << dim_ << ",side=" << side_ << ")"; break;
    case SiteSetKind::Product:
      os << "ball(n=" << ball_axes_ << ",rho=" << rho_ << ")xcube(d="
         << dim_ - ball_axes_ << ",side=" << side_ << ")";
      break;
  }
  os << ":fiber=" << fiber_ << ":site-lex,orbital-minor";
  return os.str();
}

OperatorMatrix identity_operator(const GeometryPtr& geom) {
  SparseCx m(geom->basis_size(), geom->basis_size());
  m.setIdentity();
  return {geom, std::move(m), true};
}

OperatorMatrix position_operator(const GeometryPtr& geom, int axis) {
  if (axis < 0 || axis >= geom->dimension())
    throw std::invalid_argument("position axis out of range");
  const int fib = geom->fiber();
  std::vector<Triplet> trips;
  trips.reserve(geom->basis_size());
  for (std::size_t r = 0; r < geom->site_count(); ++r) {
    const double v = geom->coordinate(r, axis) + 0.5;
    for (int o = 0; o < fib; ++o) {
      const auto i = static_cast<Eigen::Index>(geom->index(r, o));
      trips.emplace_back(i, i, v);
    }
  }
  SparseCx m(geom->basis_size(), geom->basis_size());
  m.setFromTriplets(trips.begin(), trips.end());
  return {geom, std::move(m), true};
}

OperatorMatrix shift_operator(const GeometryPtr& geom, int axis,
                              Boundary boundary) {
  if (axis < 0 || axis >= geom->dimension())
    throw std::invalid_argument("shift axis out of range");
  if (boundary == Boundary::Periodic && axis < geom->ball_axes())
    throw std::invalid_argument("periodic shift requested on a ball axis");
  if (boundary == Boundary::Periodic &&
      geom->boundary(axis) != Boundary::Periodic)
    throw std::invalid_argument("periodic shift on a non-periodic axis");
  const int fib = geom->fiber();
  Coord disp{};
  disp[axis] = 1;
  std::vector<Triplet> trips;
  for (std::size_t r = 0; r < geom->site_count(); ++r) {
    std::optional<std::size_t> t;
    if (boundary == Boundary::Periodic) {
      t = geom->hop(r, disp);
    } else {
      // Dirichlet: unwrapped target only.
      Coord c = geom->site(r);
      c[axis] += 1;
      t = geom->site_rank(c);
    }
    if (!t) continue;
    for (int o = 0; o < fib; ++o) {
      trips.emplace_back(static_cast<Eigen::Index>(geom->index(*t, o)),
                         static_cast<Eigen::Index>(geom->index(r, o)), 1.0);
    }
  }
  SparseCx m(geom->basis_size(), geom->basis_size());
  m.setFromTriplets(trips.begin(), trips.end());
  return {geom, std::move(m), false};
}

bool ball_contains_scaled(long long lhs4, double rho) {
  const double two_rho = 2.0 * rho;
  const double nearest = std::round(two_rho);
  if (std::abs(two_rho - nearest) < 1e-9) {
    // Half-integer (or integer) radius: exact integer comparison.
    const long long rhs = static_cast<long long>(nearest) *
                          static_cast<long long>(nearest);
    return lhs4 <= rhs;
  }
  return static_cast<double>(lhs4) <= 4.0 * rho * rho;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t sample,
                       std::uint64_t index) {
  const std::uint64_t mixed =
      splitmix64(splitmix64(splitmix64(seed) ^ sample) ^ index);
  return static_cast<double>(mixed >> 11) * 0x1.0p-53;
}

OperatorMatrix disorder_potential(const GeometryPtr& geom, double strength,
                                  std::uint64_t seed,
                                  std::uint64_t sample_index) {
  if (strength < 0) throw std::invalid_argument("disorder strength must be >= 0");
  SparseCx m(geom->basis_size(), geom->basis_size());
  if (strength == 0) return {geom, std::move(m), true};
  std::vector<Triplet> trips;
  trips.reserve(geom->basis_size());
  for (std::size_t i = 0; i < geom->basis_size(); ++i) {
    const double u = counter_uniform(seed, sample_index, i);
    trips.emplace_back(static_cast<Eigen::Index>(i),
                       static_cast<Eigen::Index>(i), strength * (u - 0.5));
  }
  m.setFromTriplets(trips.begin(), trips.end());
  return {geom, std::move(m), true};
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (a.dim() != b.dim())
    throw std::invalid_argument("commutator: dimension mismatch");
  if (a.geom && b.geom && !a.geom->same_sites(*b.geom))
    throw std::invalid_argument("commutator: geometry mismatch");
  SparseCx m = (a.mat * b.mat - b.mat * a.mat).pruned(0.0);
  return {a.geom, std::move(m), false};
}

bool is_hermitian(const SparseCx& m) {
  SparseCx d = m - SparseCx(m.adjoint());
  for (int k = 0; k < d.outerSize(); ++k) {
    for (SparseCx::InnerIterator it(d, k); it; ++it) {
      if (it.value() != cplx(0, 0)) return false;
    }
  }
  return true;
}

double operator_norm(const SparseCx& m, double rel_tol) {
  return largest_singular_value(m, rel_tol);
}

double operator_norm(const OperatorMatrix& m, double rel_tol) {
  return largest_singular_value(m.mat, rel_tol);
}

double spectral_gap(const OperatorMatrix& h, double zero_tol) {
  if (!is_hermitian(h.mat))
    throw std::invalid_argument("spectral_gap: operator is not Hermitian");
  const Eigen::VectorXd ev = hermitian_eigenvalues(h.dense());
  const double g = ev.cwiseAbs().minCoeff();
  if (g <= zero_tol)
    throw ComputeError("spectral_gap: operator is not invertible (gap " +
                       std::to_string(g) + ")");
  return g;
}

}  // namespace sigloc
