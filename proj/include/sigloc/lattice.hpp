#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace sigloc {

using cplx = std::complex<double>;
using SparseCx = Eigen::SparseMatrix<cplx>;
using Triplet = Eigen::Triplet<cplx>;

constexpr int kMaxDim = 4;
using Coord = std::array<int, kMaxDim>;

enum class Boundary { Periodic, Dirichlet };

enum class SiteSetKind { Ball, Cube, Product };

/// Finite set of integer lattice sites with a frozen basis ordering.
///
/// Site sets are balls B_rho^n = {x : sum_i (x_i + 1/2)^2 <= rho^2}, cubes
/// V_ell with centered coordinates, or the product ball x cube (ball axes
/// first). Sites are sorted lexicographically by coordinate; the basis index
/// of (site, orbital) is site_rank * fiber + orbital (orbital varies
/// fastest). Ball membership is decided on integers, 4*sum (x_i+1/2)^2 =
/// sum (2x_i+1)^2, so half-integer radii have no floating-point boundary
/// ambiguity. Ball axes are always Dirichlet.
class LatticeGeometry {
 public:
  static std::shared_ptr<const LatticeGeometry> ball(int n, double rho,
                                                     int fiber);
  static std::shared_ptr<const LatticeGeometry> cube(int d, int side,
                                                     Boundary boundary,
                                                     int fiber);
  /// product(ball(n, rho), cube(d - n, side)); ball axes come first.
  static std::shared_ptr<const LatticeGeometry> cylinder(int n, double rho,
                                                         int d, int side,
                                                         Boundary cube_boundary,
                                                         int fiber);

  SiteSetKind kind() const { return kind_; }
  int dimension() const { return dim_; }
  int ball_axes() const { return ball_axes_; }
  double radius() const { return rho_; }
  int cube_side() const { return side_; }
  int fiber() const { return fiber_; }
  Boundary boundary(int axis) const;

  std::size_t site_count() const { return sites_.size(); }
  std::size_t basis_size() const { return sites_.size() * fiber_; }
  const std::vector<Coord>& sites() const { return sites_; }
  const Coord& site(std::size_t rank) const { return sites_[rank]; }
  std::optional<std::size_t> site_rank(const Coord& c) const;
  std::size_t index(std::size_t rank, int orbital) const {
    return rank * fiber_ + orbital;
  }

  /// Coordinate along an axis (integers; positions are coordinate + 1/2).
  int coordinate(std::size_t rank, int axis) const {
    return sites_[rank][axis];
  }

  /// Target site of a hop by `displacement`, honoring the axis boundaries.
  /// Periodic axes wrap; Dirichlet axes (and all ball axes) drop targets
  /// outside the set. `wraps`, when given, receives the number of periodic
  /// wraps per axis (for Peierls phases across the seam).
  std::optional<std::size_t> hop(std::size_t rank, const Coord& displacement,
                                 Coord* wraps = nullptr) const;

  /// Same site set and ordering with a different per-site fiber.
  std::shared_ptr<const LatticeGeometry> with_fiber(int fiber) const;

  bool same_sites(const LatticeGeometry& other) const;
  std::string describe() const;

 private:
  LatticeGeometry() = default;
  void build_index();

  SiteSetKind kind_ = SiteSetKind::Cube;
  int dim_ = 0;
  int ball_axes_ = 0;
  double rho_ = 0;
  int side_ = 0;
  int fiber_ = 1;
  std::vector<Boundary> boundary_;
  std::vector<Coord> sites_;
  std::unordered_map<std::uint64_t, std::size_t> rank_of_;
};

using GeometryPtr = std::shared_ptr<const LatticeGeometry>;

/// Sparse complex matrix over a geometry's frozen basis.
struct OperatorMatrix {
  GeometryPtr geom;
  SparseCx mat;
  bool hermitian = false;

  Eigen::Index dim() const { return mat.rows(); }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(mat); }
};

OperatorMatrix identity_operator(const GeometryPtr& geom);

/// Diagonal position operator x_axis + 1/2, identity on the fiber.
OperatorMatrix position_operator(const GeometryPtr& geom, int axis);

/// Unit hop along +e_axis. Periodic: cyclic (unitary). Dirichlet: partial
/// isometry dropping out-of-volume targets. Periodic is rejected on ball
/// axes.
OperatorMatrix shift_operator(const GeometryPtr& geom, int axis,
                              Boundary boundary);

/// Diagonal potential with i.i.d. uniform entries on [-W/2, W/2], one per
/// basis element, generated by a counter RNG keyed on
/// (seed, sample_index, basis index). Reproducible and order-independent.
OperatorMatrix disorder_potential(const GeometryPtr& geom, double strength,
                                  std::uint64_t seed,
                                  std::uint64_t sample_index);

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

/// Largest singular value, relative tolerance 1e-10. Power iteration on
/// M^* M with a dense solve below dimension 600.
double operator_norm(const OperatorMatrix& m, double rel_tol = 1e-10);
double operator_norm(const SparseCx& m, double rel_tol = 1e-10);

/// min |eigenvalue| of a Hermitian h; throws if h is not invertible
/// (smallest |eigenvalue| below `zero_tol`).
double spectral_gap(const OperatorMatrix& h, double zero_tol = 1e-12);

/// Entrywise check M == M^* (exact).
bool is_hermitian(const SparseCx& m);

/// Counter RNG: splitmix64 finalizer chain, uniform double in [0, 1).
std::uint64_t splitmix64(std::uint64_t x);
double counter_uniform(std::uint64_t seed, std::uint64_t sample,
                       std::uint64_t index);

/// Ball membership from the scaled integer radius: lhs4 = 4 sum (x_i+1/2)^2
/// = sum (2x_i+1)^2 against 4 rho^2, integer-exact when 2 rho is integral.
bool ball_contains_scaled(long long lhs4, double rho);

struct ComputeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sigloc
