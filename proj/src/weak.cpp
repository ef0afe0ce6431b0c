#include "sigloc/weak.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "sigloc/dense.hpp"

namespace sigloc {

namespace {

using json = nlohmann::ordered_json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

LocalizerParams clean_params(const WeakRunConfig& cfg, double* norm_comm_out) {
  LocalizerParams p;
  p.g = clean_gap(cfg.model);
  p.norm_h = clean_norm(cfg.model);
  // |[D,h]| measured on the smallest run volume (Dirichlet ball axes: the
  // commutator of a position with finite-range hopping is bulk-exact there).
  const int ell0 = cfg.volumes.front();
  auto geom = LatticeGeometry::cylinder(cfg.weak_directions, cfg.rho,
                                        cfg.model.dimension(), ell0,
                                        cfg.volume_boundary, cfg.model.fiber());
  OperatorMatrix h = build_hamiltonian(cfg.model, geom);
  const OperatorMatrix target =
      cfg.model.chiral() ? chiral_block(h, -1) : h;
  DiracBundle dirac =
      build_dirac(cfg.weak_directions, target.geom, cfg.rho);
  SparseCx h_lift = lift_pairing_element(dirac, target);
  SparseCx comm = dirac.D * h_lift - h_lift * dirac.D;
  p.norm_comm = operator_norm(comm);
  if (norm_comm_out) *norm_comm_out = p.norm_comm;
  return p;
}

}  // namespace

void WeakRunConfig::validate() const {
  const int d = model.dimension();
  if (weak_directions < 1 || weak_directions >= d)
    throw std::invalid_argument("weak run: need 1 <= n < d");
  const bool odd_family = model.chiral();
  if (odd_family != (weak_directions % 2 == 1))
    throw std::invalid_argument(
        "weak run: pairing-direction parity must match the family");
  const double two_rho = 2 * rho;
  if (std::abs(two_rho - std::round(two_rho)) > 1e-9 ||
      static_cast<long long>(std::llround(two_rho)) % 2 == 0)
    throw std::invalid_argument("weak run: rho must sit on the half-integer grid");
  if (volumes.empty())
    throw std::invalid_argument("weak run: no volumes given");
  for (std::size_t i = 0; i < volumes.size(); ++i) {
    if (volumes[i] < 1) throw std::invalid_argument("weak run: volume < 1");
    if (i > 0 && volumes[i] <= volumes[i - 1])
      throw std::invalid_argument("weak run: volumes must increase");
  }
  if (samples < 1) throw std::invalid_argument("weak run: samples < 1");
}

LocalizerBundle weak_localizer(const WeakRunConfig& cfg, int ell, int sample,
                               double kappa_override) {
  cfg.validate();
  const double kappa = kappa_override > 0 ? kappa_override : cfg.kappa;
  if (kappa <= 0)
    throw std::invalid_argument("weak_localizer: kappa not resolved");
  auto geom = LatticeGeometry::cylinder(cfg.weak_directions, cfg.rho,
                                        cfg.model.dimension(), ell,
                                        cfg.volume_boundary, cfg.model.fiber());
  OperatorMatrix h = build_hamiltonian(cfg.model, geom, cfg.seed,
                                       static_cast<std::uint64_t>(sample));
  LocalizerParams params;
  params.g = clean_gap(cfg.model);
  params.norm_h = clean_norm(cfg.model);
  params.norm_comm = 0;  // filled by the pipeline when needed
  if (cfg.model.chiral()) {
    OperatorMatrix a = chiral_block(h, -1);
    DiracBundle dirac = build_dirac(cfg.weak_directions, a.geom, cfg.rho);
    return odd_localizer(a, dirac, kappa);
  }
  DiracBundle dirac = build_dirac(cfg.weak_directions, h.geom, cfg.rho);
  return even_localizer(h, dirac, kappa);
}

namespace {

double resolve_kappa(const WeakRunConfig& cfg, const LocalizerParams& params) {
  if (cfg.kappa > 0) return cfg.kappa;
  const double kappa_star =
      params.g * params.g * params.g / (12 * params.norm_comm * params.norm_h);
  if (!cfg.practical) {
    if (cfg.rho <= 2 * params.g / kappa_star)
      throw ComputeError(
          "auto kappa: rho too small for the admissible bound; enable the "
          "practical mode or increase rho");
    return kappa_star;
  }
  WeakRunConfig clean = cfg;
  clean.model.disorder = 0;
  const double base = std::max(kappa_star, 2 * params.g / cfg.rho);
  double best_kappa = 0, best_margin = -1;
  for (int j : {0, -1, 1, -2, 2}) {
    const double kappa = base * std::ldexp(1.0, j);
    LocalizerBundle b =
        weak_localizer(clean, clean.volumes.front(), 0, kappa);
    const GapCheck gc = gap_check(b.reduced, params.g);
    if (gc.min_abs_eig > params.g / 4 && gc.min_abs_eig > best_margin) {
      best_margin = gc.min_abs_eig;
      best_kappa = kappa;
    }
    if (j == 0 && gc.min_abs_eig > params.g / 2) break;
  }
  if (best_kappa <= 0)
    throw ComputeError(
        "auto kappa: no candidate produced a localizer gap above g/4");
  return best_kappa;
}

}  // namespace

WeakResult trace_per_volume_signature(const WeakRunConfig& cfg, int workers) {
  cfg.validate();
  WeakResult res;
  res.parity = cfg.model.chiral() ? Parity::Odd : Parity::Even;
  res.rho = cfg.rho;

  LocalizerParams params = clean_params(cfg, nullptr);
  res.g_clean = params.g;
  res.kappa = resolve_kappa(cfg, params);
  res.verdict = admissibility(params.g, params.norm_comm, params.norm_h,
                              res.kappa, cfg.rho);

  const int d = cfg.model.dimension();
  const int transverse = d - cfg.weak_directions;

  struct Cell { int ell; int sample; };
  std::vector<Cell> cells;
  for (int ell : cfg.volumes)
    for (int s = 0; s < cfg.samples; ++s) cells.push_back({ell, s});
  std::vector<WeakSampleRow> rows(cells.size());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string fail_msg;
  std::mutex fail_mutex;
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size() || failed.load()) break;
      try {
        const Cell c = cells[i];
        LocalizerBundle b = weak_localizer(cfg, c.ell, c.sample, res.kappa);
        const Eigen::VectorXd ev = hermitian_eigenvalues(b.reduced.dense());
        WeakSampleRow row;
        row.ell = c.ell;
        row.sample = c.sample;
        row.gap_margin = ev.cwiseAbs().minCoeff();
        const double tol = params.g / 4;
        InertiaTriple t;
        t.zero_tol = tol;
        t.method = InertiaMethod::Eigencount;
        for (Eigen::Index e = 0; e < ev.size(); ++e) {
          if (ev[e] > tol) ++t.n_plus;
          else if (ev[e] < -tol) ++t.n_minus;
          else ++t.n_zero;
        }
        row.inertia = t;
        long long vol = 1;
        for (int a = 0; a < transverse; ++a) vol *= c.ell;
        row.volume_sites = vol;
        row.ball_sites =
            static_cast<std::int64_t>(b.reduced.geom->site_count()) / vol;
        row.scaled_signature =
            static_cast<double>(t.signature()) / static_cast<double>(vol);
        row.excluded =
            row.gap_margin < cfg.exclusion_gap_fraction * params.g ||
            t.n_zero > 0;
        rows[i] = row;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lk(fail_mutex);
        failed.store(true);
        fail_msg = e.what();
      }
    }
  };
  const int nw = std::max(1, workers);
  if (nw == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw ComputeError("weak run failed: " + fail_msg);
  res.rows = std::move(rows);

  int excluded_total = 0;
  for (int ell : cfg.volumes) {
    WeakVolumeStats st;
    st.ell = ell;
    double sum = 0, sumsq = 0;
    for (const auto& r : res.rows) {
      if (r.ell != ell) continue;
      if (r.excluded) { ++st.excluded; continue; }
      sum += r.scaled_signature;
      sumsq += r.scaled_signature * r.scaled_signature;
      ++st.included;
    }
    excluded_total += st.excluded;
    if (st.included == 0)
      throw ComputeError("weak run: every sample excluded at ell=" +
                         std::to_string(ell));
    st.mean = sum / st.included;
    if (st.included > 1) {
      const double var =
          (sumsq - st.included * st.mean * st.mean) / (st.included - 1);
      st.std_error = std::sqrt(std::max(0.0, var) / st.included);
    }
    res.per_volume.push_back(st);
  }
  const double excluded_fraction =
      static_cast<double>(excluded_total) / static_cast<double>(res.rows.size());
  if (excluded_fraction > cfg.max_excluded_fraction)
    throw ComputeError("weak run: excluded fraction " +
                       std::to_string(excluded_fraction) +
                       " exceeds the policy limit");

  const double factor = res.parity == Parity::Odd ? 0.5 : -0.5;
  res.invariant_estimate = factor * res.per_volume.back().mean;
  res.rounded_invariant = std::llround(res.invariant_estimate);
  res.distance_to_integer =
      std::abs(res.invariant_estimate -
               static_cast<double>(res.rounded_invariant));
  return res;
}

std::string weak_result_csv(const WeakResult& result) {
  std::string out =
      "ell,sample,n_plus,n_zero,n_minus,ball_sites,volume_sites,"
      "scaled_signature,gap_margin,excluded\n";
  for (const auto& r : result.rows) {
    out += std::to_string(r.ell) + "," + std::to_string(r.sample) + "," +
           std::to_string(r.inertia.n_plus) + "," +
           std::to_string(r.inertia.n_zero) + "," +
           std::to_string(r.inertia.n_minus) + "," +
           std::to_string(r.ball_sites) + "," +
           std::to_string(r.volume_sites) + "," +
           fmt_double(r.scaled_signature) + "," + fmt_double(r.gap_margin) +
           "," + (r.excluded ? "1" : "0") + "\n";
  }
  return out;
}

std::string weak_result_json(const WeakRunConfig& config,
                             const WeakResult& result) {
  json j;
  j["model"] = {{"family", to_string(config.model.family)},
                {"m", config.model.m},
                {"t_perp", config.model.t_perp},
                {"disorder", config.model.disorder}};
  j["weak_directions"] = config.weak_directions;
  j["rho"] = result.rho;
  j["kappa"] = result.kappa;
  j["boundary"] = config.volume_boundary == Boundary::Periodic ? "periodic"
                                                               : "dirichlet";
  j["seed"] = config.seed;
  j["samples"] = config.samples;
  j["g_clean"] = result.g_clean;
  j["admissibility"] = {{"kappa_threshold", result.verdict.kappa_threshold},
                        {"rho_threshold", result.verdict.rho_threshold},
                        {"admissible", result.verdict.admissible}};
  j["per_volume"] = json::array();
  for (const auto& st : result.per_volume) {
    j["per_volume"].push_back({{"ell", st.ell},
                               {"mean", st.mean},
                               {"std_error", st.std_error},
                               {"included", st.included},
                               {"excluded", st.excluded}});
  }
  j["invariant_estimate"] = result.invariant_estimate;
  j["rounded_invariant"] = result.rounded_invariant;
  j["distance_to_integer"] = result.distance_to_integer;
  j["method"] = "eigencount";
  j["zero_tol"] = result.g_clean / 4;
  return j.dump(2) + "\n";
}

}  // namespace sigloc
