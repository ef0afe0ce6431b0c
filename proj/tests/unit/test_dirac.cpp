#include <doctest.h>

#include <cmath>

#include "sigloc/dense.hpp"
#include "sigloc/dirac.hpp"

using namespace sigloc;

TEST_CASE("clifford relations for n = 1..4") {
  for (int n = 1; n <= 4; ++n) {
    CliffordSet c = clifford(n);
    CHECK(c.rep_dim == (n <= 1 ? 1 : (n <= 3 ? 2 : 4)));
    const Eigen::MatrixXcd id =
        Eigen::MatrixXcd::Identity(c.rep_dim, c.rep_dim);
    for (std::size_t i = 0; i < c.sigma.size(); ++i) {
      CHECK((c.sigma[i] - c.sigma[i].adjoint()).cwiseAbs().maxCoeff() == 0);
      for (std::size_t j = 0; j < c.sigma.size(); ++j) {
        Eigen::MatrixXcd anti = c.sigma[i] * c.sigma[j] + c.sigma[j] * c.sigma[i];
        Eigen::MatrixXcd expect = (i == j) ? 2.0 * id : 0.0 * id;
        CHECK((anti - expect).cwiseAbs().maxCoeff() == 0);
      }
    }
    if (c.even) {
      CHECK((c.grading * c.grading - id).cwiseAbs().maxCoeff() == 0);
      for (const auto& s : c.sigma)
        CHECK((c.grading * s + s * c.grading).cwiseAbs().maxCoeff() == 0);
    }
  }
}

TEST_CASE("n=2 grading is sigma_z and n=3 product is i") {
  CliffordSet c2 = clifford(2);
  Eigen::MatrixXcd sz(2, 2);
  sz << 1, 0, 0, -1;
  CHECK((c2.grading - sz).cwiseAbs().maxCoeff() == 0);
  CliffordSet c3 = clifford(3);
  Eigen::MatrixXcd prod = c3.sigma[0] * c3.sigma[1] * c3.sigma[2];
  CHECK((prod - cplx(0, 1) * Eigen::MatrixXcd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() == 0);
}

TEST_CASE("n=1 ball rho=1.5: D is the position diagonal") {
  auto g = LatticeGeometry::ball(1, 1.5, 1);
  DiracBundle b = build_dirac(1, g, 1.5);
  Eigen::MatrixXcd d = Eigen::MatrixXcd(b.D);
  Eigen::Vector4d expect(-1.5, -0.5, 0.5, 1.5);
  CHECK((d.diagonal().real() - expect).cwiseAbs().maxCoeff() == 0);
  CHECK(b.reduced_indices().size() == 4);  // P_rho = identity on the ball
}

TEST_CASE("n=2: D^2 is the site radius and min |D| = 1/sqrt(2)") {
  auto g = LatticeGeometry::ball(2, 4.5, 1);
  DiracBundle b = build_dirac(2, g, 4.5);
  Eigen::MatrixXcd d = Eigen::MatrixXcd(b.D);
  Eigen::MatrixXcd d2 = d * d;
  // Off-diagonal part of D^2 vanishes (cross terms anticommute away).
  Eigen::MatrixXcd offdiag = d2 - d2.diagonal().asDiagonal().toDenseMatrix();
  CHECK(offdiag.cwiseAbs().maxCoeff() < 1e-14);
  const double min_d2 = d2.diagonal().real().minCoeff();
  CHECK(min_d2 == doctest::Approx(0.5));  // two half-integers squared
  const double max_d2 = d2.diagonal().real().maxCoeff();
  CHECK(max_d2 <= 4.5 * 4.5);
  // gamma anticommutes with D.
  Eigen::MatrixXcd gamma = b.grading_diagonal().cast<cplx>().asDiagonal();
  CHECK((gamma * d + d * gamma).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("P_rho reduction inside a larger cube matches the ball") {
  // D on a cube strictly containing the ball: P D P singular values lie in
  // [1/2, rho].
  auto cube = LatticeGeometry::cube(2, 13, Boundary::Dirichlet, 1);
  const double rho = 3.5;
  DiracBundle b = build_dirac(2, cube, rho);
  const auto keep = b.reduced_indices();
  auto ball = LatticeGeometry::ball(2, rho, 1);
  CHECK(keep.size() == ball->site_count() * 2);
  Eigen::MatrixXcd d = Eigen::MatrixXcd(b.D);
  Eigen::MatrixXcd reduced(keep.size(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j)
      reduced(i, j) = d(keep[i], keep[j]);
  Eigen::VectorXd ev = hermitian_eigenvalues(reduced);
  CHECK(ev.cwiseAbs().minCoeff() >= 0.5 - 1e-12);
  CHECK(ev.cwiseAbs().maxCoeff() <= rho + 1e-12);
}

TEST_CASE("doubling: block algebra and the minimal singular value") {
  auto g = LatticeGeometry::ball(1, 1.5, 1);
  DiracBundle b = build_dirac(1, g, 1.5);
  CHECK_THROWS_AS(doubled(b, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(doubled(b, -1.0), std::invalid_argument);
  DiracBundle bm = doubled(b, 0.5);
  Eigen::MatrixXcd dm = Eigen::MatrixXcd(bm.D);
  CHECK((dm - dm.adjoint()).cwiseAbs().maxCoeff() == 0);
  // D_mu^* D_mu = (D^2 + mu^2) + (D^2 + mu^2)
  Eigen::MatrixXcd d = Eigen::MatrixXcd(b.D);
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(8, 8);
  expect.topLeftCorner(4, 4) = d * d + 0.25 * Eigen::MatrixXcd::Identity(4, 4);
  expect.bottomRightCorner(4, 4) = expect.topLeftCorner(4, 4);
  CHECK((dm.adjoint() * dm - expect).cwiseAbs().maxCoeff() < 1e-14);
  // Direct eigensolve: min singular value sqrt(0.25 + 0.25).
  Eigen::VectorXd sv = hermitian_eigenvalues(Eigen::MatrixXcd(dm.adjoint() * dm))
                           .cwiseSqrt();
  CHECK(sv.minCoeff() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(sv.minCoeff() >= bm.mu - 1e-12);
}

TEST_CASE("doubling a formally zero D gives singular values mu") {
  // Unshifted positions on the single-site cube: D = 0.
  auto g = LatticeGeometry::cube(1, 1, Boundary::Dirichlet, 1);
  DiracBundle b = build_dirac(1, g, 2.5, /*shifted=*/false);
  CHECK(Eigen::MatrixXcd(b.D).cwiseAbs().maxCoeff() == 0);
  DiracBundle bm = doubled(b, 1.0);
  Eigen::VectorXd ev = hermitian_eigenvalues(Eigen::MatrixXcd(bm.D));
  CHECK(ev.cwiseAbs().minCoeff() == doctest::Approx(1.0));
  CHECK(ev.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("grading commutes with lifted site-diagonal operators") {
  auto g = LatticeGeometry::ball(2, 2.5, 2);
  DiracBundle b = build_dirac(2, g, 2.5);
  OperatorMatrix w = disorder_potential(g, 1.0, 3, 1);
  SparseCx lifted = lift_pairing_element(b, w);
  Eigen::MatrixXcd gam = b.grading_diagonal().cast<cplx>().asDiagonal();
  Eigen::MatrixXcd l = Eigen::MatrixXcd(lifted);
  CHECK((gam * l - l * gam).cwiseAbs().maxCoeff() == 0);
}
