#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "sigloc/lattice.hpp"
#include "test_helpers.hpp"

using namespace sigloc;

TEST_CASE("1d ball rho=1.5: sites and position diagonal") {
  auto g = LatticeGeometry::ball(1, 1.5, 1);
  REQUIRE(g->site_count() == 4);
  std::set<int> xs;
  for (const auto& c : g->sites()) xs.insert(c[0]);
  CHECK(xs == std::set<int>{-2, -1, 0, 1});
  OperatorMatrix x = position_operator(g, 0);
  Eigen::VectorXcd d = x.dense().diagonal();
  // lex order: -2, -1, 0, 1
  CHECK(d(0) == cplx(-1.5));
  CHECK(d(1) == cplx(-0.5));
  CHECK(d(2) == cplx(0.5));
  CHECK(d(3) == cplx(1.5));
}

TEST_CASE("position diagonal entries are nonzero half-integers") {
  for (double rho : {1.5, 4.5, 10.5}) {
    auto g = LatticeGeometry::ball(1, rho, 2);
    Eigen::VectorXcd d = position_operator(g, 0).dense().diagonal();
    double min_abs = 1e9;
    for (Eigen::Index i = 0; i < d.size(); ++i)
      min_abs = std::min(min_abs, std::abs(d(i)));
    CHECK(min_abs == 0.5);
  }
}

TEST_CASE("2d ball rho=1.2: membership from the shifted centers") {
  auto g = LatticeGeometry::ball(2, 1.2, 1);
  REQUIRE(g->site_count() == 4);
  std::set<std::pair<int, int>> sites;
  for (const auto& c : g->sites()) sites.insert({c[0], c[1]});
  std::set<std::pair<int, int>> expect{{0, 0}, {-1, 0}, {0, -1}, {-1, -1}};
  CHECK(sites == expect);
  // axis-1 position values per site (the multiset {0.5, -0.5, 0.5, -0.5}).
  Eigen::VectorXcd d = position_operator(g, 0).dense().diagonal();
  int plus = 0, minus = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) == cplx(0.5)) ++plus;
    if (d(i) == cplx(-0.5)) ++minus;
  }
  CHECK(plus == 2);
  CHECK(minus == 2);
}

TEST_CASE("ball counts match brute-force enumeration") {
  for (double rho : {1.5, 10.5, 40.5}) {
    auto g = LatticeGeometry::ball(1, rho, 1);
    std::size_t count = 0;
    for (int x = -200; x <= 200; ++x) {
      const long long lhs = (2LL * x + 1) * (2LL * x + 1);
      const long long rhs = llround(2 * rho) * llround(2 * rho);
      if (lhs <= rhs) ++count;
    }
    CHECK(g->site_count() == count);
  }
}

TEST_CASE("cyclic shift on a periodic cube: S^3 = 1 and unitary") {
  auto g = LatticeGeometry::cube(1, 3, Boundary::Periodic, 1);
  OperatorMatrix s = shift_operator(g, 0, Boundary::Periodic);
  Eigen::MatrixXcd sd = s.dense();
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(3, 3);
  CHECK((sd * sd.adjoint() - id).cwiseAbs().maxCoeff() == 0);
  CHECK((sd.adjoint() * sd - id).cwiseAbs().maxCoeff() == 0);
  CHECK((sd * sd * sd - id).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("dirichlet shift is nilpotent: S^3 = 0 on a 3-cube") {
  auto g = LatticeGeometry::cube(1, 3, Boundary::Dirichlet, 1);
  Eigen::MatrixXcd sd = shift_operator(g, 0, Boundary::Dirichlet).dense();
  CHECK((sd * sd * sd).cwiseAbs().maxCoeff() == 0);
  // S*S and SS* are diagonal projections.
  Eigen::MatrixXcd p1 = sd.adjoint() * sd;
  Eigen::MatrixXcd p2 = sd * sd.adjoint();
  CHECK((p1 * p1 - p1).cwiseAbs().maxCoeff() == 0);
  CHECK((p2 * p2 - p2).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("periodic shift rejected on ball axes") {
  auto g = LatticeGeometry::ball(1, 2.5, 1);
  CHECK_THROWS_AS(shift_operator(g, 0, Boundary::Periodic),
                  std::invalid_argument);
}

TEST_CASE("disorder: zero strength, determinism, and mean bound") {
  auto g = LatticeGeometry::cube(2, 100, Boundary::Periodic, 1);  // 1e4 sites
  CHECK(disorder_potential(g, 0.0, 1, 2).mat.nonZeros() == 0);
  OperatorMatrix v1 = disorder_potential(g, 1.0, 7, 5);
  OperatorMatrix v2 = disorder_potential(g, 1.0, 7, 5);
  CHECK((v1.dense() - v2.dense()).cwiseAbs().maxCoeff() == 0);
  // Law of large numbers bound: |mean| <= 3 sd/sqrt(n), sd = 1/sqrt(12).
  const double mean = v1.dense().diagonal().real().mean();
  CHECK(std::abs(mean) <= 3.0 / std::sqrt(12.0) / 100.0);
}

TEST_CASE("commutators and norms") {
  auto g = LatticeGeometry::ball(2, 3.5, 1);
  OperatorMatrix x1 = position_operator(g, 0);
  OperatorMatrix x2 = position_operator(g, 1);
  CHECK(commutator(x1, x2).mat.nonZeros() == 0);
  CHECK(operator_norm(identity_operator(g)) == doctest::Approx(1.0));
  // position and disorder commute (both diagonal)
  OperatorMatrix w = disorder_potential(g, 0.7, 1, 1);
  CHECK(commutator(x1, w).mat.nonZeros() == 0);
}

TEST_CASE("spectral gap of a diagonal") {
  auto g = LatticeGeometry::cube(1, 2, Boundary::Dirichlet, 1);
  OperatorMatrix m = identity_operator(g);
  m.mat.coeffRef(0, 0) = 2.0;
  m.mat.coeffRef(1, 1) = -3.0;
  CHECK(spectral_gap(m) == doctest::Approx(2.0));
  m.mat.coeffRef(0, 0) = 0.0;
  CHECK_THROWS_AS(spectral_gap(m), ComputeError);
}

TEST_CASE("submultiplicative norm on random operators") {
  std::mt19937_64 rng(11);
  auto g = LatticeGeometry::cube(1, 12, Boundary::Dirichlet, 1);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXcd a = sigloc::testing::random_matrix(rng, 12);
    Eigen::MatrixXcd b = sigloc::testing::random_matrix(rng, 12);
    OperatorMatrix oa{g, a.sparseView(), false};
    OperatorMatrix ob{g, b.sparseView(), false};
    OperatorMatrix ab{g, (a * b).sparseView(), false};
    CHECK(operator_norm(ab) <=
          operator_norm(oa) * operator_norm(ob) * (1 + 1e-9));
  }
}

TEST_CASE("power-method norm agrees with the dense value") {
  std::mt19937_64 rng(13);
  // Force the iterative path with a block-diagonal sparse matrix above the
  // dense cutoff.
  const int blocks = 300, bs = 8;  // dim 2400
  std::vector<Triplet> trips;
  double expected = 0;
  for (int b = 0; b < blocks; ++b) {
    Eigen::MatrixXcd m = sigloc::testing::random_matrix(rng, bs);
    expected = std::max(expected, largest_singular_value(m));
    for (int i = 0; i < bs; ++i)
      for (int j = 0; j < bs; ++j)
        trips.emplace_back(b * bs + i, b * bs + j, m(i, j));
  }
  SparseCx big(blocks * bs, blocks * bs);
  big.setFromTriplets(trips.begin(), trips.end());
  CHECK(operator_norm(big) == doctest::Approx(expected).epsilon(1e-7));
}
