#include "sigloc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigloc/config.hpp"
#include "sigloc/dense.hpp"
#include "sigloc/flow.hpp"
#include "sigloc/matrix_io.hpp"
#include "sigloc/oracles.hpp"
#include "sigloc/pipeline.hpp"
#include "sigloc/weak.hpp"

namespace sigloc::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitCompute = 1;
constexpr int kExitConfig = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  bool practical = false;
  bool verbose = false;
};

RunConfig load_config(const CommonFlags& flags) {
  if (flags.config_path.empty())
    throw ConfigError({"--config PATH is required for this subcommand"});
  ParseOutcome parsed = parse_config_file(flags.config_path);
  if (!parsed.ok()) throw ConfigError(parsed.errors);
  RunConfig cfg = *parsed.config;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.workers) cfg.workers = *flags.workers;
  if (flags.practical) cfg.practical = true;
  if (!flags.out_path.empty()) cfg.out_path = flags.out_path;
  if (!flags.format.empty()) cfg.format = flags.format;
  return cfg;
}

IndexRunConfig index_config(const RunConfig& cfg) {
  IndexRunConfig ic;
  ic.model = cfg.model;
  ic.n = cfg.n;
  ic.rho = cfg.rho;
  ic.kappa = cfg.kappa;
  ic.practical = cfg.practical;
  ic.shifted = cfg.shifted;
  ic.mu = cfg.mu;
  ic.oracle_grid = cfg.oracle_grid;
  ic.zero_tol = cfg.zero_tol;
  ic.seed = cfg.seed;
  return ic;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ComputeError("cannot open " + path + " for writing");
  os << content;
}

json index_json(const IndexRunResult& r) {
  json j;
  j["parity"] = r.parity == Parity::Odd ? "odd" : "even";
  j["dim"] = r.dim;
  j["rho"] = r.rho;
  j["kappa"] = r.kappa;
  j["g"] = r.params.g;
  j["norm_h"] = r.params.norm_h;
  j["norm_comm"] = r.params.norm_comm;
  j["kappa_threshold"] = r.verdict.kappa_threshold;
  j["rho_threshold"] = r.verdict.rho_threshold;
  j["admissible"] = r.verdict.admissible;
  j["measured_gap"] = r.measured_gap;
  j["gap_pass"] = r.gap_pass;
  j["practical_pass"] = r.practical_pass;
  j["inertia_eigencount"] = {{"n_plus", r.by_eigen.n_plus},
                             {"n_zero", r.by_eigen.n_zero},
                             {"n_minus", r.by_eigen.n_minus},
                             {"zero_tol", r.by_eigen.zero_tol}};
  if (r.by_ldl) {
    j["inertia_factorization"] = {{"n_plus", r.by_ldl->n_plus},
                                  {"n_zero", r.by_ldl->n_zero},
                                  {"n_minus", r.by_ldl->n_minus},
                                  {"zero_tol", r.by_ldl->zero_tol}};
  }
  j["signature"] = r.signature;
  j["pairing"] = r.pairing;
  if (r.oracle) {
    j["oracle"] = *r.oracle;
    j["oracle_match"] = r.oracle_match;
  }
  return j;
}

void print_index(std::ostream& out, const IndexRunResult& r, bool verbose) {
  out << "parity              " << (r.parity == Parity::Odd ? "odd" : "even")
      << "\n";
  out << "dimension           " << r.dim << "\n";
  out << "rho                 " << fmt(r.rho) << "\n";
  out << "kappa               " << fmt(r.kappa) << "\n";
  out << "g, |h|, |[D,h]|     " << fmt(r.params.g) << ", "
      << fmt(r.params.norm_h) << ", " << fmt(r.params.norm_comm) << "\n";
  out << "kappa*, rho*        " << fmt(r.verdict.kappa_threshold) << ", "
      << fmt(r.verdict.rho_threshold) << "\n";
  out << "admissible bound    " << (r.verdict.admissible ? "yes" : "no")
      << "\n";
  out << "localizer gap       " << fmt(r.measured_gap) << "  (g/2 bound "
      << (r.gap_pass ? "pass" : "FAIL") << ", practical g/4 "
      << (r.practical_pass ? "pass" : "FAIL") << ")\n";
  out << "inertia eigencount  (" << r.by_eigen.n_plus << ", "
      << r.by_eigen.n_zero << ", " << r.by_eigen.n_minus << ")  zero_tol "
      << fmt(r.by_eigen.zero_tol) << "\n";
  if (r.by_ldl) {
    out << "inertia factorize   (" << r.by_ldl->n_plus << ", "
        << r.by_ldl->n_zero << ", " << r.by_ldl->n_minus << ")  zero_tol "
        << fmt(r.by_ldl->zero_tol) << "\n";
  } else {
    out << "inertia factorize   pivot breakdown (eigencount used)\n";
  }
  out << "signature           " << r.signature << "\n";
  out << "pairing             " << fmt(r.pairing) << "\n";
  if (r.oracle) {
    out << "oracle              " << *r.oracle << "\n";
    out << "pairing == oracle   " << (r.oracle_match ? "yes" : "NO") << "\n";
  }
  if (verbose && !r.kappa_trials.empty()) {
    out << "kappa trials        ";
    for (const auto& [k, m] : r.kappa_trials)
      out << "(" << fmt(k) << ": gap " << fmt(m) << ") ";
    out << "\n";
  }
}

int cmd_model(const CommonFlags& flags, std::ostream& out) {
  RunConfig cfg = load_config(flags);
  const int side = cfg.volumes.empty() ? 8 : cfg.volumes.front();
  auto geom = LatticeGeometry::cube(cfg.model.dimension(), side,
                                    cfg.volume_boundary, cfg.model.fiber());
  OperatorMatrix h = build_hamiltonian(cfg.model, geom, cfg.seed, 0);
  out << "family              " << to_string(cfg.model.family) << "\n";
  out << "geometry            " << geom->describe() << "\n";
  out << "dimension           " << h.dim() << "\n";
  out << "hermitian           " << (is_hermitian(h.mat) ? "yes" : "NO") << "\n";
  if (cfg.model.disorder == 0 && cfg.model.flux_p == 0) {
    out << "clean gap           " << fmt(clean_gap(cfg.model)) << "\n";
    out << "clean norm          " << fmt(clean_norm(cfg.model)) << "\n";
  }
  const Eigen::VectorXd ev = hermitian_eigenvalues(h.dense());
  out << "volume gap          " << fmt(ev.cwiseAbs().minCoeff()) << "\n";
  out << "volume norm         " << fmt(ev.cwiseAbs().maxCoeff()) << "\n";
  if (cfg.model.chiral()) {
    OperatorMatrix a = chiral_block(h);
    out << "chiral block min sv " << fmt(min_singular_value(a)) << "\n";
  }
  return kExitOk;
}

int cmd_localize(const CommonFlags& flags, std::ostream& out) {
  RunConfig cfg = load_config(flags);
  IndexRunConfig ic = index_config(cfg);
  LocalizerParams params;
  const double kappa = cfg.kappa.value_or(0);
  LocalizerBundle b;
  if (kappa > 0) {
    b = build_reduced_localizer(ic, kappa, cfg.rho, &params);
  } else {
    IndexRunResult r = run_index_pairing(ic);
    b = build_reduced_localizer(ic, r.kappa, cfg.rho, &params);
  }
  const Eigen::VectorXd ev = hermitian_eigenvalues(b.reduced.dense());
  const GapCheck gc = gap_check(ev, params.g);
  out << "dimension           " << b.dim() << "\n";
  out << "kappa, rho          " << fmt(b.kappa) << ", " << fmt(b.rho) << "\n";
  out << "g, |h|, |[D,h]|     " << fmt(params.g) << ", " << fmt(params.norm_h)
      << ", " << fmt(params.norm_comm) << "\n";
  out << "admissible bound    "
      << (b.verdict.admissible ? "yes" : "no") << "\n";
  out << "localizer gap       " << fmt(gc.min_abs_eig) << " (g/2 "
      << (gc.pass ? "pass" : "FAIL") << ")\n";
  if (!cfg.out_path.empty()) {
    const bool binary = cfg.format != "json" && cfg.out_path.size() > 4 &&
                        cfg.out_path.substr(cfg.out_path.size() - 4) == ".slm";
    save_matrix(cfg.out_path, container_from(b.reduced), binary);
    out << "matrix written      " << cfg.out_path
        << (binary ? " (binary)" : " (text)") << "\n";
  }
  return kExitOk;
}

int cmd_sig(const CommonFlags& flags, const std::string& matrix_path,
            std::ostream& out) {
  MatrixContainer c = load_matrix(matrix_path);
  if (!c.hermitian || !is_hermitian(c.mat))
    throw ComputeError("sig: matrix is not Hermitian");
  OperatorMatrix op{nullptr, c.mat, true};
  const InertiaTriple te = inertia_eigen(op);
  out << "dim                 " << c.dim << "\n";
  out << "ordering            " << c.ordering << "\n";
  out << "eigencount          (" << te.n_plus << ", " << te.n_zero << ", "
      << te.n_minus << ")  signature " << te.signature() << "  zero_tol "
      << fmt(te.zero_tol) << "\n";
  try {
    const InertiaTriple tf = inertia_ldl(op);
    out << "factorization       (" << tf.n_plus << ", " << tf.n_zero << ", "
        << tf.n_minus << ")  signature " << tf.signature() << "  zero_tol "
        << fmt(tf.zero_tol) << "\n";
    out << "methods agree       "
        << (tf.n_plus == te.n_plus && tf.n_minus == te.n_minus ? "yes" : "NO")
        << "\n";
  } catch (const PivotBreakdown& e) {
    out << "factorization       pivot breakdown: " << e.what() << "\n";
  }
  (void)flags;
  return kExitOk;
}

int cmd_index(const CommonFlags& flags, std::ostream& out) {
  RunConfig cfg = load_config(flags);
  IndexRunResult r = run_index_pairing(index_config(cfg));
  print_index(out, r, flags.verbose);
  if (!cfg.out_path.empty()) {
    if (cfg.format == "json") {
      write_file(cfg.out_path, index_json(r).dump(2) + "\n");
    } else {
      std::string csv =
          "parity,dim,rho,kappa,g,norm_h,norm_comm,admissible,"
          "measured_gap,signature,pairing,oracle,oracle_match\n";
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s,%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%lld,%.17g,%s,%d\n",
                    r.parity == Parity::Odd ? "odd" : "even",
                    static_cast<long long>(r.dim), r.rho, r.kappa, r.params.g,
                    r.params.norm_h, r.params.norm_comm,
                    r.verdict.admissible ? 1 : 0, r.measured_gap,
                    static_cast<long long>(r.signature), r.pairing,
                    r.oracle ? std::to_string(*r.oracle).c_str() : "",
                    r.oracle_match ? 1 : 0);
      write_file(cfg.out_path, csv + buf);
    }
    out << "results written     " << cfg.out_path << "\n";
  }
  if (!r.gap_pass && !r.practical_pass) return kExitCompute;
  return kExitOk;
}

int cmd_sweep(const CommonFlags& flags, std::ostream& out) {
  RunConfig cfg = load_config(flags);
  IndexRunConfig ic = index_config(cfg);
  std::vector<double> kappas = cfg.sweep_kappas;
  std::vector<double> rhos = cfg.sweep_rhos;
  if (rhos.empty()) rhos = {cfg.rho, 2 * cfg.rho + 0.5};
  if (kappas.empty()) {
    IndexRunResult r = run_index_pairing(ic);
    kappas = {r.kappa, 2 * r.kappa, 4 * r.kappa};
  }
  SweepResult res = run_sweep(ic, kappas, rhos);
  out << "kappa        rho      bound  practical  gap          signature\n";
  for (const auto& c : res.cells) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-12.6g %-8.6g %-6s %-10s %-12.6g %lld\n",
                  c.kappa, c.rho, c.admissible ? "yes" : "no",
                  c.practical_pass ? "pass" : "FAIL", c.measured_gap,
                  static_cast<long long>(c.signature));
    out << buf;
  }
  out << "constant signature  " << (res.constant ? "yes" : "NO") << "\n";
  if (!cfg.out_path.empty()) {
    std::string csv = "kappa,rho,admissible,practical_pass,gap,signature\n";
    for (const auto& c : res.cells) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d,%.17g,%lld\n", c.kappa,
                    c.rho, c.admissible ? 1 : 0, c.practical_pass ? 1 : 0,
                    c.measured_gap, static_cast<long long>(c.signature));
      csv += buf;
    }
    write_file(cfg.out_path, csv);
    out << "results written     " << cfg.out_path << "\n";
  }
  return res.constant ? kExitOk : kExitCompute;
}

int cmd_weak(const CommonFlags& flags, std::ostream& out) {
  RunConfig cfg = load_config(flags);
  WeakRunConfig wc = cfg.weak_config();
  WeakResult res = trace_per_volume_signature(wc, cfg.workers);
  out << "parity              " << (res.parity == Parity::Odd ? "odd" : "even")
      << "\n";
  out << "kappa, rho          " << fmt(res.kappa) << ", " << fmt(res.rho)
      << "\n";
  out << "clean gap           " << fmt(res.g_clean) << "\n";
  out << "ell    mean          stderr        included excluded\n";
  for (const auto& st : res.per_volume) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-6d %-13.8g %-13.8g %-8d %d\n", st.ell,
                  st.mean, st.std_error, st.included, st.excluded);
    out << buf;
  }
  out << "invariant estimate  " << fmt(res.invariant_estimate)
      << "  (method eigencount, zero_tol " << fmt(res.g_clean / 4) << ")\n";
  out << "rounded invariant   " << res.rounded_invariant
      << "  (distance " << fmt(res.distance_to_integer) << ")\n";
  if (!cfg.out_path.empty()) {
    if (cfg.format == "json") {
      write_file(cfg.out_path, weak_result_json(wc, res));
    } else {
      write_file(cfg.out_path, weak_result_csv(res));
    }
    out << "results written     " << cfg.out_path << "\n";
  }
  return kExitOk;
}

int cmd_oracle(const CommonFlags& flags, std::ostream& out) {
  RunConfig cfg = load_config(flags);
  const BlochMap bm = bloch_map(cfg.model);
  out << "family              " << to_string(cfg.model.family) << "\n";
  out << "grid                " << cfg.oracle_grid << " (refined at "
      << 2 * cfg.oracle_grid << ")\n";
  if (cfg.model.chiral()) {
    if (cfg.model.dimension() == 1) {
      out << "winding             " << winding_number(bm, cfg.oracle_grid)
          << "\n";
    } else {
      out << "weak winding        "
          << weak_invariant_oracle(cfg.model, cfg.oracle_grid) << "\n";
    }
  } else {
    if (cfg.model.dimension() == 2) {
      out << "chern               " << fhs_chern(bm, cfg.oracle_grid) << "\n";
    } else {
      out << "weak chern          "
          << weak_invariant_oracle(cfg.model, cfg.oracle_grid) << "\n";
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// selftest: quick randomized property suites.
// ---------------------------------------------------------------------------

struct SelfTest {
  std::ostream& out;
  int failures = 0;

  void check(const std::string& name, bool pass, const std::string& detail = "") {
    out << (pass ? "[PASS] " : "[FAIL] ") << name;
    if (!pass && !detail.empty()) out << ": " << detail;
    out << "\n";
    if (!pass) ++failures;
  }
};

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> dist;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(dist(rng), dist(rng));
  return m;
}

Eigen::MatrixXcd random_hermitian_gapped(std::mt19937_64& rng, int n,
                                         double gap,
                                         Eigen::VectorXd* eigs_out = nullptr) {
  Eigen::MatrixXcd a = random_matrix(rng, n);
  Eigen::MatrixXcd h = a + a.adjoint();
  auto [ev, vec] = hermitian_eigensystem(h);
  Eigen::VectorXd pushed(n);
  for (int i = 0; i < n; ++i) {
    const double s = ev[i] >= 0 ? 1.0 : -1.0;
    pushed[i] = s * (std::abs(ev[i]) + gap);
  }
  if (eigs_out) *eigs_out = pushed;
  return vec * pushed.asDiagonal() * vec.adjoint();
}

Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, int n) {
  Eigen::MatrixXcd a = random_matrix(rng, n);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  return q;
}

Eigen::MatrixXcd random_projection(std::mt19937_64& rng, int n, int rank) {
  Eigen::MatrixXcd q = random_unitary(rng, n);
  Eigen::MatrixXcd v = q.leftCols(rank);
  return v * v.adjoint();
}

int cmd_selftest(const CommonFlags& flags, std::ostream& out) {
  SelfTest st{out};
  std::mt19937_64 rng(flags.seed.value_or(0x51615));

  {  // Clifford relations.
    bool ok = true;
    std::string why;
    for (int n = 1; n <= 4 && ok; ++n) {
      CliffordSet c = clifford(n);
      for (std::size_t i = 0; i < c.sigma.size() && ok; ++i) {
        for (std::size_t j = 0; j < c.sigma.size() && ok; ++j) {
          Eigen::MatrixXcd anti =
              c.sigma[i] * c.sigma[j] + c.sigma[j] * c.sigma[i];
          Eigen::MatrixXcd expect =
              Eigen::MatrixXcd::Zero(c.rep_dim, c.rep_dim);
          if (i == j)
            expect = 2.0 * Eigen::MatrixXcd::Identity(c.rep_dim, c.rep_dim);
          if ((anti - expect).cwiseAbs().maxCoeff() > 0) {
            ok = false;
            why = "anticommutator n=" + std::to_string(n);
          }
        }
      }
      if (c.even && ok) {
        for (const auto& s : c.sigma)
          if ((c.grading * s + s * c.grading).cwiseAbs().maxCoeff() > 0) {
            ok = false;
            why = "grading n=" + std::to_string(n);
          }
      }
    }
    st.check("clifford generator relations", ok, why);
  }

  {  // Inertia method agreement.
    bool ok = true;
    std::string why;
    std::uniform_int_distribution<int> dims(2, 160);
    for (int trial = 0; trial < 50 && ok; ++trial) {
      const int n = dims(rng);
      Eigen::MatrixXcd h = random_hermitian_gapped(rng, n, 0.3);
      InertiaTriple a = inertia_eigen(h);
      InertiaTriple b = inertia_ldl(h);
      if (a.n_plus != b.n_plus || a.n_minus != b.n_minus) {
        ok = false;
        why = "trial " + std::to_string(trial);
      }
    }
    st.check("inertia eigencount == factorization (50 gapped)", ok, why);
  }

  {  // Sylvester invariance.
    bool ok = true;
    std::uniform_int_distribution<int> dims(2, 60);
    for (int trial = 0; trial < 25 && ok; ++trial) {
      const int n = dims(rng);
      Eigen::MatrixXcd t = random_hermitian_gapped(rng, n, 0.5);
      Eigen::MatrixXcd a = random_matrix(rng, n) +
                           3.0 * Eigen::MatrixXcd::Identity(n, n);
      ok = sylvester_check(t, a).equal;
    }
    st.check("sylvester congruence invariance (25)", ok);
  }

  {  // Essential codimension identity.
    bool ok = true;
    std::uniform_int_distribution<int> dims(2, 40);
    for (int trial = 0; trial < 40 && ok; ++trial) {
      const int n = dims(rng);
      std::uniform_int_distribution<int> ranks(0, n);
      const int rp = ranks(rng), rq = ranks(rng);
      Eigen::MatrixXcd p = random_projection(rng, n, rp);
      Eigen::MatrixXcd q = random_projection(rng, n, rq);
      ok = essential_codimension(p, q) == rq - rp;
    }
    st.check("essential codimension == rank difference (40)", ok);
  }

  {  // Signature-flow identity on supported paths.
    bool ok = true;
    std::uniform_int_distribution<int> dims(4, 24);
    for (int trial = 0; trial < 25 && ok; ++trial) {
      const int n = dims(rng);
      const int rank = n / 2 + 1;
      Eigen::MatrixXcd p = random_projection(rng, n, rank);
      FlowPath path;
      path.grid = {0, 0.25, 0.5, 0.75, 1};
      Eigen::MatrixXcd t0 = p * random_hermitian_gapped(rng, n, 0.4) * p;
      Eigen::MatrixXcd t1 = p * random_hermitian_gapped(rng, n, 0.4) * p;
      for (double t : path.grid)
        path.samples.push_back((1 - t) * t0 + t * t1);
      SigFlowReport rep = sig_flow_identity(path, p);
      ok = rep.equal;
    }
    st.check("spectral flow == half signature difference (25)", ok);
  }

  {  // Shift operator structure.
    auto g = LatticeGeometry::cube(1, 5, Boundary::Periodic, 1);
    OperatorMatrix s = shift_operator(g, 0, Boundary::Periodic);
    Eigen::MatrixXcd sd = s.dense();
    bool ok = ((sd * sd.adjoint()) -
               Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() == 0;
    Eigen::MatrixXcd pow = Eigen::MatrixXcd::Identity(5, 5);
    for (int i = 0; i < 5; ++i) pow = sd * pow;
    ok = ok && (pow - Eigen::MatrixXcd::Identity(5, 5)).cwiseAbs().maxCoeff() == 0;
    OperatorMatrix sd2 = shift_operator(g, 0, Boundary::Dirichlet);
    Eigen::MatrixXcd nil = Eigen::MatrixXcd::Identity(5, 5);
    for (int i = 0; i < 5; ++i) nil = sd2.dense() * nil;
    ok = ok && nil.cwiseAbs().maxCoeff() == 0;
    st.check("shift operators (periodic unitary, dirichlet nilpotent)", ok);
  }

  {  // Disorder determinism.
    auto g = LatticeGeometry::cube(2, 8, Boundary::Periodic, 2);
    OperatorMatrix v1 = disorder_potential(g, 1.0, 42, 3);
    OperatorMatrix v2 = disorder_potential(g, 1.0, 42, 3);
    OperatorMatrix v3 = disorder_potential(g, 1.0, 42, 4);
    bool ok = (v1.dense() - v2.dense()).cwiseAbs().maxCoeff() == 0 &&
              (v1.dense() - v3.dense()).cwiseAbs().maxCoeff() != 0;
    st.check("disorder potential determinism", ok);
  }

  {  // Oracle refinement stability.
    ModelSpec chiral;
    chiral.family = ModelFamily::Chiral1d;
    chiral.m = 0.5;
    ModelSpec qwz;
    qwz.family = ModelFamily::Qwz2d;
    qwz.m = 1.0;
    bool ok = true;
    std::string why;
    try {
      ok = winding_number(bloch_map(chiral), 24) == 1 &&
           std::abs(fhs_chern(bloch_map(qwz), 24)) == 1;
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    st.check("oracle refinement stability", ok, why);
  }

  {  // Scale covariance: L(lambda h, lambda kappa) = lambda L(h, kappa).
    ModelSpec spec;
    spec.family = ModelFamily::Chiral1d;
    spec.m = 0.5;
    auto geom = LatticeGeometry::ball(1, 10.5, spec.fiber());
    OperatorMatrix h = build_hamiltonian(spec, geom);
    OperatorMatrix a = chiral_block(h);
    DiracBundle dirac = build_dirac(1, a.geom, 10.5);
    LocalizerBundle b1 = odd_localizer(a, dirac, 0.1);
    OperatorMatrix a2 = a;
    a2.mat = a.mat * 2.0;
    LocalizerBundle b2 = odd_localizer(a2, dirac, 0.2);
    const double diff =
        (b2.reduced.dense() - 2.0 * b1.reduced.dense()).cwiseAbs().maxCoeff();
    st.check("scale covariance (entrywise)", diff == 0);
  }

  out << (st.failures == 0 ? "selftest: all suites passed\n"
                           : "selftest: FAILURES\n");
  return st.failures == 0 ? kExitOk : kExitCompute;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"spectral localizer signatures for lattice index pairings"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonFlags flags;
  app.add_option("--config", flags.config_path, "run configuration file");
  app.add_option("--out", flags.out_path, "output file path");
  app.add_option("--format", flags.format, "output format (csv|json)")
      ->check(CLI::IsMember({"csv", "json"}));
  std::uint64_t seed_val = 0;
  auto* seed_opt = app.add_option("--seed", seed_val, "seed override");
  int workers_val = 1;
  auto* workers_opt = app.add_option("--workers", workers_val,
                                     "worker threads for the grid runs");
  app.add_flag("--practical", flags.practical,
               "accept (kappa, rho) on a measured localizer gap > g/4");
  app.add_flag("--verbose", flags.verbose, "extra diagnostics");

  auto* c_model = app.add_subcommand("model", "build and inspect a Hamiltonian");
  auto* c_localize =
      app.add_subcommand("localize", "assemble the reduced localizer");
  auto* c_sig =
      app.add_subcommand("sig", "inertia of a saved matrix, both methods");
  std::string matrix_path;
  c_sig->add_option("matrix", matrix_path, "matrix container file")
      ->required();
  auto* c_index =
      app.add_subcommand("index", "index pairing vs the momentum oracle");
  auto* c_sweep =
      app.add_subcommand("sweep", "signature constancy over a (kappa,rho) grid");
  auto* c_weak =
      app.add_subcommand("weak", "trace-per-volume weak invariant run");
  auto* c_oracle =
      app.add_subcommand("oracle", "momentum-space invariants only");
  auto* c_selftest = app.add_subcommand("selftest", "run the property suites");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help goes to stdout with a zero exit.
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (seed_opt->count()) flags.seed = seed_val;
  if (workers_opt->count()) flags.workers = workers_val;

  try {
    if (c_model->parsed()) return cmd_model(flags, out);
    if (c_localize->parsed()) return cmd_localize(flags, out);
    if (c_sig->parsed()) return cmd_sig(flags, matrix_path, out);
    if (c_index->parsed()) return cmd_index(flags, out);
    if (c_sweep->parsed()) return cmd_sweep(flags, out);
    if (c_weak->parsed()) return cmd_weak(flags, out);
    if (c_oracle->parsed()) return cmd_oracle(flags, out);
    if (c_selftest->parsed()) return cmd_selftest(flags, out);
  } catch (const ConfigError& e) {
    for (const auto& msg : e.errors) err << "config error: " << msg << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCompute;
  }
  err << "error: no subcommand\n";
  return kExitConfig;
}

}  // namespace sigloc::cli
