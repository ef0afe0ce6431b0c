#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sigloc/dense.hpp"
#include "sigloc/oracles.hpp"
#include "sigloc/weak.hpp"

using namespace sigloc;

namespace {

WeakRunConfig stacked_config(double t_perp, double disorder) {
  WeakRunConfig cfg;
  cfg.model.family = ModelFamily::StackedChiral2d;
  cfg.model.m = 0.5;
  cfg.model.t_perp = t_perp;
  cfg.model.disorder = disorder;
  cfg.weak_directions = 1;
  cfg.rho = 6.5;
  cfg.kappa = 0.15;
  cfg.volumes = {4, 8};
  cfg.samples = 1;
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST_CASE("config validation") {
  WeakRunConfig cfg = stacked_config(0.2, 0.0);
  cfg.weak_directions = 2;  // even count on a chiral family
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = stacked_config(0.2, 0.0);
  cfg.rho = 6.0;  // off the half-integer grid
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = stacked_config(0.2, 0.0);
  cfg.volumes = {8, 4};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("weak localizer dimension bookkeeping") {
  WeakRunConfig cfg = stacked_config(0.2, 0.0);
  cfg.rho = 10.5;
  LocalizerBundle b = weak_localizer(cfg, 8, 0);
  // |B^1_10.5| by enumeration: (2x+1)^2 <= 441.
  int ball = 0;
  for (int x = -50; x <= 50; ++x)
    if ((2 * x + 1) * (2 * x + 1) <= 441) ++ball;
  CHECK(ball == 22);
  // Chiral block carries one orbital; the outer grading doubles it.
  CHECK(b.dim() == ball * 8 * 2);
  // Even families keep the full fiber and the Clifford doubling instead.
  WeakRunConfig ecfg;
  ecfg.model.family = ModelFamily::StackedQwz3d;
  ecfg.model.m = 1.0;
  ecfg.model.t_perp = 0.2;
  ecfg.weak_directions = 2;
  ecfg.rho = 2.5;
  ecfg.kappa = 0.5;
  ecfg.volumes = {3};
  LocalizerBundle eb = weak_localizer(ecfg, 3, 0);
  auto ball2 = LatticeGeometry::ball(2, 2.5, 1);
  CHECK(eb.dim() ==
        static_cast<Eigen::Index>(ball2->site_count()) * 3 * 2 * 2);
}

TEST_CASE("disorder sample changes only the randomized entries") {
  WeakRunConfig cfg = stacked_config(0.2, 0.3);
  LocalizerBundle b1 = weak_localizer(cfg, 4, 0);
  LocalizerBundle b2 = weak_localizer(cfg, 4, 0);
  LocalizerBundle b3 = weak_localizer(cfg, 4, 1);
  CHECK((b1.reduced.dense() - b2.reduced.dense()).cwiseAbs().maxCoeff() == 0);
  CHECK((b1.reduced.dense() - b3.reduced.dense()).cwiseAbs().maxCoeff() > 0);
  // The Dirac part is untouched by the sample index: differences live only
  // in the off-diagonal (Hamiltonian) blocks.
  Eigen::MatrixXcd diff = b1.reduced.dense() - b3.reduced.dense();
  const Eigen::Index half = diff.rows() / 2;
  CHECK(diff.topLeftCorner(half, half).cwiseAbs().maxCoeff() == 0);
  CHECK(diff.bottomRightCorner(half, half).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("decoupled clean stack: localizer spectrum matches the momentum slices") {
  WeakRunConfig cfg = stacked_config(0.2, 0.0);
  const int ell = 4;
  LocalizerBundle b = weak_localizer(cfg, ell, 0);
  Eigen::VectorXd ev = hermitian_eigenvalues(b.reduced.dense());
  // Independent construction: for each transverse momentum the slice is a
  // 1d chain with a(k1) = m + t e^{ik2} + e^{ik1}; assemble its localizer
  // directly and take the union of spectra.
  auto ball = LatticeGeometry::ball(1, cfg.rho, 1);
  const Eigen::Index nb = static_cast<Eigen::Index>(ball->site_count());
  std::vector<double> expect;
  for (int j = 0; j < ell; ++j) {
    const double k2 = 2 * std::numbers::pi * j / ell;
    const cplx mass = cfg.model.m + cfg.model.t_perp * std::exp(cplx(0, k2));
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(nb, nb);
    for (Eigen::Index r = 0; r < nb; ++r) {
      a(r, r) = mass;
      if (r + 1 < nb) a(r, r + 1) = 1.0;  // hop to x-1 in the lex basis
    }
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(nb, nb);
    for (Eigen::Index r = 0; r < nb; ++r)
      d(r, r) = ball->coordinate(r, 0) + 0.5;
    Eigen::MatrixXcd l(2 * nb, 2 * nb);
    l << cfg.kappa * d, a, a.adjoint(), -cfg.kappa * d;
    Eigen::VectorXd sev = hermitian_eigenvalues(l);
    for (Eigen::Index i = 0; i < sev.size(); ++i) expect.push_back(sev[i]);
  }
  std::sort(expect.begin(), expect.end());
  REQUIRE(ev.size() == static_cast<Eigen::Index>(expect.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    CHECK(ev[i] == doctest::Approx(expect[i]).epsilon(1e-9));
}

TEST_CASE("clean decoupled stack: value equals the single-chain signature") {
  WeakRunConfig cfg = stacked_config(0.0, 0.0);
  cfg.volumes = {2, 4};
  WeakResult res = trace_per_volume_signature(cfg);
  // Independent value: the 1d chain localizer on the same ball.
  ModelSpec chain;
  chain.family = ModelFamily::Chiral1d;
  chain.m = 0.5;
  auto g = LatticeGeometry::ball(1, cfg.rho, 2);
  OperatorMatrix a = chiral_block(build_hamiltonian(chain, g));
  DiracBundle dirac = build_dirac(1, a.geom, cfg.rho);
  LocalizerBundle cb = odd_localizer(a, dirac, res.kappa);
  const InertiaTriple t = inertia_eigen(cb.reduced, res.g_clean / 4);
  for (const auto& st : res.per_volume) {
    CHECK(st.mean == doctest::Approx(static_cast<double>(t.signature())));
  }
  CHECK(res.rounded_invariant == 1);
}

TEST_CASE("even stacked family: weak run matches the layer chern number") {
  WeakRunConfig cfg;
  cfg.model.family = ModelFamily::StackedQwz3d;
  cfg.model.m = 1.0;
  cfg.model.t_perp = 0.2;
  cfg.weak_directions = 2;
  cfg.rho = 4.5;
  cfg.volumes = {3};
  cfg.practical = true;
  WeakResult res = trace_per_volume_signature(cfg, 2);
  CHECK(res.parity == Parity::Even);
  const int oracle = weak_invariant_oracle(cfg.model, 16, 8);
  CHECK(res.rounded_invariant == oracle);
  CHECK(res.distance_to_integer == doctest::Approx(0.0));
}

TEST_CASE("deterministic reproducibility of a disordered run") {
  WeakRunConfig cfg = stacked_config(0.2, 0.3);
  cfg.samples = 3;
  WeakResult r1 = trace_per_volume_signature(cfg);
  WeakResult r2 = trace_per_volume_signature(cfg);
  CHECK(weak_result_csv(r1) == weak_result_csv(r2));
  // Worker count must not change the merged result.
  WeakResult r4 = trace_per_volume_signature(cfg, 4);
  CHECK(weak_result_csv(r1) == weak_result_csv(r4));
  CHECK(weak_result_json(cfg, r1) == weak_result_json(cfg, r4));
}

TEST_CASE("csv layout") {
  WeakRunConfig cfg = stacked_config(0.2, 0.0);
  cfg.volumes = {4};
  WeakResult res = trace_per_volume_signature(cfg);
  const std::string csv = weak_result_csv(res);
  CHECK(csv.find("ell,sample,n_plus,n_zero,n_minus,ball_sites,volume_sites,"
                 "scaled_signature,gap_margin,excluded") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);  // header + one row
}
