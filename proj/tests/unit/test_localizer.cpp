#include <doctest.h>

#include <cmath>

#include "sigloc/dense.hpp"
#include "sigloc/localizer.hpp"
#include "sigloc/models.hpp"
#include "sigloc/pipeline.hpp"

using namespace sigloc;

namespace {

OperatorMatrix identity_on(const GeometryPtr& g) { return identity_operator(g); }

}  // namespace

TEST_CASE("admissibility thresholds and verdicts") {
  // g=1, |[D,h]|=2, |h|=3 gives kappa* = 1/72 and rho* = 144.
  AdmissibilityVerdict v = admissibility(1, 2, 3, 1.0 / 72, 145);
  CHECK(v.kappa_threshold == doctest::Approx(1.0 / 72).epsilon(1e-15));
  CHECK(v.rho_threshold == doctest::Approx(144.0).epsilon(1e-12));
  CHECK(v.admissible);
  AdmissibilityVerdict too_big = admissibility(1, 2, 3, 1.5 / 72, 145);
  CHECK_FALSE(too_big.admissible);
  AdmissibilityVerdict rho_small = admissibility(1, 2, 3, 1.0 / 72, 144);
  CHECK_FALSE(rho_small.admissible);
  // Scaling h -> 2h, kappa -> 2kappa leaves the verdict unchanged.
  AdmissibilityVerdict scaled = admissibility(2, 4, 6, 2.0 / 72, 145);
  CHECK(scaled.admissible == v.admissible);
  CHECK(scaled.rho_threshold == doctest::Approx(v.rho_threshold));
  CHECK_THROWS_AS(admissibility(0, 1, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("gap_check on a diagonal") {
  Eigen::VectorXd ev(2);
  ev << 1, -1;
  GapCheck gc = gap_check(ev, 1.0);
  CHECK(gc.min_abs_eig == doctest::Approx(1.0));
  CHECK(gc.pass);  // 1 > 0.5
}

TEST_CASE("odd localizer with a = 1: L^2 = (1 + D^2) and the minimum") {
  auto g = LatticeGeometry::ball(1, 1.5, 1);
  DiracBundle d = build_dirac(1, g, 1.5);
  LocalizerBundle b = odd_localizer(identity_on(g), d, 1.0);
  Eigen::MatrixXcd l = b.reduced.dense();
  CHECK((l - l.adjoint()).cwiseAbs().maxCoeff() == 0);
  Eigen::VectorXd ev = hermitian_eigenvalues(Eigen::MatrixXcd(l * l));
  CHECK(ev.minCoeff() == doctest::Approx(1.25));  // 1 + min D^2 = 1 + 0.25
  CHECK(ev.maxCoeff() == doctest::Approx(1.0 + 1.5 * 1.5));
}

TEST_CASE("odd localizer block grading: W h W = -h, W D' = D' W") {
  ModelSpec spec;
  spec.family = ModelFamily::Chiral1d;
  spec.m = 0.5;
  auto g = LatticeGeometry::ball(1, 5.5, 2);
  OperatorMatrix h = build_hamiltonian(spec, g);
  OperatorMatrix a = chiral_block(h);
  DiracBundle d = build_dirac(1, a.geom, 5.5);
  const double kappa = 0.2;
  LocalizerBundle b = odd_localizer(a, d, kappa);
  const Eigen::Index m = b.dim() / 2;
  Eigen::MatrixXcd l = b.reduced.dense();
  Eigen::VectorXcd wdiag(2 * m);
  for (Eigen::Index i = 0; i < 2 * m; ++i) wdiag[i] = i < m ? 1.0 : -1.0;
  Eigen::MatrixXcd w = wdiag.asDiagonal();
  // Split L into kappa D' (diagonal blocks) and the h part (off-diagonal).
  Eigen::MatrixXcd dpart = Eigen::MatrixXcd::Zero(2 * m, 2 * m);
  dpart.topLeftCorner(m, m) = l.topLeftCorner(m, m);
  dpart.bottomRightCorner(m, m) = l.bottomRightCorner(m, m);
  Eigen::MatrixXcd hpart = l - dpart;
  CHECK((w * hpart + hpart * w).cwiseAbs().maxCoeff() == 0);
  CHECK((w * dpart - dpart * w).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("even localizer with h = 1: eigenvalues +-sqrt(kappa^2 d^2 + 1)") {
  auto g = LatticeGeometry::ball(2, 2.5, 1);
  DiracBundle d = build_dirac(2, g, 2.5);
  const double kappa = 0.3;
  LocalizerBundle b = even_localizer(identity_on(g), d, kappa);
  Eigen::VectorXd ev = hermitian_eigenvalues(b.reduced.dense());
  // Expected: for each site radius r^2 = sum (x+1/2)^2, +-sqrt(kappa^2 r^2 + 1).
  std::vector<double> expect;
  for (const auto& c : g->sites()) {
    const double r2 = (c[0] + 0.5) * (c[0] + 0.5) + (c[1] + 0.5) * (c[1] + 0.5);
    expect.push_back(std::sqrt(kappa * kappa * r2 + 1));
    expect.push_back(-std::sqrt(kappa * kappa * r2 + 1));
  }
  std::sort(expect.begin(), expect.end());
  REQUIRE(ev.size() == static_cast<Eigen::Index>(expect.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    CHECK(ev[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("even localizer block form: top-left block is h") {
  ModelSpec spec;
  spec.family = ModelFamily::Qwz2d;
  spec.m = 1.0;
  auto g = LatticeGeometry::ball(2, 3.5, 2);
  OperatorMatrix h = build_hamiltonian(spec, g);
  DiracBundle d = build_dirac(2, g, 3.5);
  LocalizerBundle b = even_localizer(h, d, 0.4);
  // Basis per site: (clifford c, orbital o); gamma = diag(1, -1) on c.
  // Rows with c = 0 and columns with c = 0 reproduce h.
  const Eigen::Index ns = static_cast<Eigen::Index>(g->site_count());
  Eigen::MatrixXcd l = b.reduced.dense();
  Eigen::MatrixXcd top(2 * ns, 2 * ns);
  for (Eigen::Index si = 0; si < ns; ++si)
    for (Eigen::Index sj = 0; sj < ns; ++sj)
      for (int oi = 0; oi < 2; ++oi)
        for (int oj = 0; oj < 2; ++oj)
          top(2 * si + oi, 2 * sj + oj) = l(4 * si + oi, 4 * sj + oj);
  CHECK((top - h.dense()).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("even localizer requires Hermitian h") {
  auto g = LatticeGeometry::ball(2, 1.5, 1);
  DiracBundle d = build_dirac(2, g, 1.5);
  OperatorMatrix bad = identity_on(g);
  bad.mat.coeffRef(0, 1) = cplx(0, 1);  // not Hermitian
  CHECK_THROWS_AS(even_localizer(bad, d, 0.5), std::invalid_argument);
}

TEST_CASE("parity mismatches are rejected") {
  auto g = LatticeGeometry::ball(2, 1.5, 1);
  DiracBundle even_d = build_dirac(2, g, 1.5);
  CHECK_THROWS_AS(odd_localizer(identity_on(g), even_d, 0.5),
                  std::invalid_argument);
  auto g1 = LatticeGeometry::ball(1, 1.5, 1);
  DiracBundle odd_d = build_dirac(1, g1, 1.5);
  CHECK_THROWS_AS(even_localizer(identity_on(g1), odd_d, 0.5),
                  std::invalid_argument);
}

TEST_CASE("scale covariance entrywise and for the signature") {
  ModelSpec spec;
  spec.family = ModelFamily::Chiral1d;
  spec.m = 0.5;
  auto g = LatticeGeometry::ball(1, 8.5, 2);
  OperatorMatrix a = chiral_block(build_hamiltonian(spec, g));
  DiracBundle d = build_dirac(1, a.geom, 8.5);
  LocalizerBundle b1 = odd_localizer(a, d, 0.1);
  for (double lambda : {0.5, 2.0}) {
    OperatorMatrix a2 = a;
    a2.mat = a.mat * lambda;
    LocalizerBundle b2 = odd_localizer(a2, d, lambda * 0.1);
    CHECK((b2.reduced.dense() - lambda * b1.reduced.dense())
              .cwiseAbs()
              .maxCoeff() == 0);
  }
}

TEST_CASE("building on a larger cube and compressing matches the ball build") {
  ModelSpec spec;
  spec.family = ModelFamily::Qwz2d;
  spec.m = 1.0;
  const double rho = 2.5;
  // Direct: Dirichlet ball.
  auto ball = LatticeGeometry::ball(2, rho, 2);
  OperatorMatrix hb = build_hamiltonian(spec, ball);
  DiracBundle db = build_dirac(2, ball, rho);
  LocalizerBundle direct = even_localizer(hb, db, 0.7);
  // Indirect: Dirichlet cube containing the ball, then P_rho compression.
  auto cube = LatticeGeometry::cube(2, 11, Boundary::Dirichlet, 2);
  OperatorMatrix hc = build_hamiltonian(spec, cube);
  DiracBundle dc = build_dirac(2, cube, rho);
  LocalizerBundle indirect = even_localizer(hc, dc, 0.7);
  REQUIRE(direct.dim() == indirect.dim());
  CHECK((direct.reduced.dense() - indirect.reduced.dense())
            .cwiseAbs()
            .maxCoeff() == 0);
}
