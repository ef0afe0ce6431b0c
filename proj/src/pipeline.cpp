#include "sigloc/pipeline.hpp"

#include <cmath>

#include "sigloc/dense.hpp"
#include "sigloc/oracles.hpp"

namespace sigloc {

namespace {

int resolved_axes(const IndexRunConfig& cfg) {
  const int n = cfg.n > 0 ? cfg.n : cfg.model.dimension();
  if (n != cfg.model.dimension())
    throw std::invalid_argument(
        "index pairing: the strong route pairs every axis; use the weak "
        "pipeline for n < d");
  if (cfg.model.chiral() != (n % 2 == 1))
    throw std::invalid_argument(
        "index pairing: pairing-direction parity must match the family");
  return n;
}

struct Parts {
  OperatorMatrix h;
  OperatorMatrix target;  // h, or its chiral block
  DiracBundle dirac;
};

Parts build_parts(const IndexRunConfig& cfg, double rho) {
  const int n = resolved_axes(cfg);
  auto geom = LatticeGeometry::ball(n, rho, cfg.model.fiber());
  Parts p{build_hamiltonian(cfg.model, geom, cfg.seed,
                            static_cast<std::uint64_t>(cfg.sample)),
          {}, {}};
  // The ball compression of a may be exponentially near-singular in the
  // nontrivial phase; the bulk gap is checked separately.
  p.target = cfg.model.chiral() ? chiral_block(p.h, -1) : p.h;
  p.dirac = build_dirac(n, p.target.geom, rho, cfg.shifted);
  if (!cfg.shifted || cfg.mu > 0) {
    if (cfg.mu <= 0)
      throw std::invalid_argument(
          "index pairing: unshifted positions require the doubling mu > 0");
    p.dirac = doubled(p.dirac, cfg.mu);
  }
  return p;
}

LocalizerParams measure_params(const IndexRunConfig& cfg, const Parts& parts) {
  LocalizerParams p;
  if (cfg.model.disorder == 0 && cfg.model.flux_p == 0) {
    p.g = clean_gap(cfg.model);
    p.norm_h = clean_norm(cfg.model);
  } else {
    // Bulk values from a periodic volume covering the ball.
    const int side =
        std::max(2 * static_cast<int>(std::ceil(cfg.rho)) + 1, 16);
    auto vol = LatticeGeometry::cube(cfg.model.dimension(), side,
                                     Boundary::Periodic, cfg.model.fiber());
    OperatorMatrix hv = build_hamiltonian(
        cfg.model, vol, cfg.seed, static_cast<std::uint64_t>(cfg.sample));
    const Eigen::VectorXd ev = hermitian_eigenvalues(hv.dense());
    p.g = ev.cwiseAbs().minCoeff();
    p.norm_h = ev.cwiseAbs().maxCoeff();
    if (p.g < 1e-10)
      throw ComputeError(
          "index pairing: Hamiltonian gap closed at these parameters");
  }
  const SparseCx lift = lift_pairing_element(parts.dirac, parts.target);
  const SparseCx comm = parts.dirac.D * lift - lift * parts.dirac.D;
  p.norm_comm = operator_norm(comm);
  return p;
}

LocalizerBundle localizer_of(const IndexRunConfig& cfg, const Parts& parts,
                             double kappa, const LocalizerParams& params) {
  return cfg.model.chiral()
             ? odd_localizer(parts.target, parts.dirac, kappa, params)
             : even_localizer(parts.h, parts.dirac, kappa, params);
}

// Automatic practical kappa: the rho-bound candidate 2g/rho (or the
// admissible threshold when larger) is accepted outright if its localizer
// gap clears g/2; otherwise the octave grid around it is scanned and the
// largest margin above g/4 wins. The chosen candidate's spectrum is handed
// back so the caller does not solve again.
double choose_kappa(const IndexRunConfig& cfg, const Parts& parts,
                    const LocalizerParams& params,
                    std::vector<std::pair<double, double>>* trials,
                    Eigen::VectorXd* spectrum) {
  if (cfg.kappa) return *cfg.kappa;
  const double kappa_star =
      params.g * params.g * params.g / (12 * params.norm_comm * params.norm_h);
  if (!cfg.practical) {
    if (cfg.rho <= 2 * params.g / kappa_star)
      throw ComputeError(
          "automatic kappa: rho violates the admissible bound rho > 2g/kappa; "
          "increase rho or enable the practical mode");
    return kappa_star;
  }
  const double base = std::max(kappa_star, 2 * params.g / cfg.rho);
  double best_kappa = 0, best_margin = -1;
  for (int j : {0, -1, 1, -2, 2}) {
    const double kappa = base * std::ldexp(1.0, j);
    LocalizerBundle b = localizer_of(cfg, parts, kappa, params);
    Eigen::VectorXd ev = hermitian_eigenvalues(b.reduced.dense());
    const double margin = ev.cwiseAbs().minCoeff();
    if (trials) trials->emplace_back(kappa, margin);
    if (margin > params.g / 4 && margin > best_margin) {
      best_margin = margin;
      best_kappa = kappa;
      if (spectrum) *spectrum = std::move(ev);
    }
    if (j == 0 && margin > params.g / 2) break;
  }
  if (best_kappa <= 0)
    throw ComputeError(
        "automatic kappa: no candidate cleared the g/4 localizer gap");
  return best_kappa;
}

}  // namespace

LocalizerBundle build_reduced_localizer(const IndexRunConfig& cfg, double kappa,
                                        double rho,
                                        LocalizerParams* params_out) {
  IndexRunConfig local = cfg;
  local.rho = rho;
  Parts parts = build_parts(local, rho);
  LocalizerParams params = measure_params(local, parts);
  if (params_out) *params_out = params;
  return localizer_of(local, parts, kappa, params);
}

IndexRunResult run_index_pairing(const IndexRunConfig& cfg) {
  IndexRunResult res;
  res.parity = cfg.model.chiral() ? Parity::Odd : Parity::Even;
  res.rho = cfg.rho;

  Parts parts = build_parts(cfg, cfg.rho);
  const LocalizerParams params = measure_params(cfg, parts);
  res.params = params;
  Eigen::VectorXd cached;
  res.kappa = choose_kappa(cfg, parts, params, &res.kappa_trials, &cached);

  LocalizerBundle bundle = localizer_of(cfg, parts, res.kappa, params);
  const Eigen::VectorXd ev = cached.size() > 0
                                 ? cached
                                 : hermitian_eigenvalues(bundle.reduced.dense());
  res.verdict = bundle.verdict;
  res.dim = bundle.dim();
  const GapCheck gc = gap_check(ev, params.g);
  res.measured_gap = gc.min_abs_eig;
  res.gap_pass = gc.pass;
  res.practical_pass = gc.min_abs_eig > params.g / 4;
  res.verdict.practical = res.practical_pass;
  if (res.measured_gap <= 0)
    throw ComputeError("index pairing: localizer is singular");

  const double tol = cfg.zero_tol.value_or(params.g / 4);
  InertiaTriple t;
  t.zero_tol = tol;
  t.method = InertiaMethod::Eigencount;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > tol) ++t.n_plus;
    else if (ev[i] < -tol) ++t.n_minus;
    else ++t.n_zero;
  }
  res.by_eigen = t;
  try {
    res.by_ldl = inertia_ldl(bundle.reduced);
  } catch (const PivotBreakdown&) {
    res.by_ldl = std::nullopt;
  }
  res.signature = t.signature();
  res.pairing = (res.parity == Parity::Odd ? 0.5 : -0.5) *
                static_cast<double>(res.signature);

  if (cfg.model.disorder == 0 && cfg.model.flux_p == 0) {
    const BlochMap bm = bloch_map(cfg.model);
    res.oracle = res.parity == Parity::Odd
                     ? winding_number(bm, cfg.oracle_grid)
                     : fhs_chern(bm, cfg.oracle_grid);
    res.oracle_match =
        std::abs(res.pairing - static_cast<double>(*res.oracle)) < 1e-12;
  }
  return res;
}

SweepResult run_sweep(const IndexRunConfig& base,
                      const std::vector<double>& kappas,
                      const std::vector<double>& rhos) {
  if (kappas.empty() || rhos.empty())
    throw std::invalid_argument("sweep: empty kappa or rho grid");
  SweepResult res;
  bool first = true;
  for (const double rho : rhos) {
    IndexRunConfig local = base;
    local.rho = rho;
    Parts parts = build_parts(local, rho);
    const LocalizerParams params = measure_params(local, parts);
    for (const double kappa : kappas) {
      SweepCell cell;
      cell.kappa = kappa;
      cell.rho = rho;
      LocalizerBundle b = localizer_of(local, parts, kappa, params);
      const Eigen::VectorXd ev = hermitian_eigenvalues(b.reduced.dense());
      cell.measured_gap = ev.cwiseAbs().minCoeff();
      cell.practical_pass = cell.measured_gap > params.g / 4;
      cell.admissible = b.verdict.admissible;
      const double tol = params.g / 4;
      std::int64_t sig = 0;
      for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] > tol) ++sig;
        else if (ev[i] < -tol) --sig;
      }
      cell.signature = sig;
      if (first) {
        res.signature = sig;
        first = false;
        res.constant = true;
      } else if (sig != res.signature) {
        res.constant = false;
      }
      res.cells.push_back(cell);
    }
  }
  return res;
}

}  // namespace sigloc
