#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sigloc/dirac.hpp"
#include "sigloc/flow.hpp"
#include "sigloc/inertia.hpp"
#include "sigloc/oracles.hpp"
#include "sigloc/pipeline.hpp"
#include "sigloc/weak.hpp"

namespace py = pybind11;
using namespace sigloc;

namespace {

ModelSpec make_spec(const std::string& family, double m, double t_perp,
                    double disorder) {
  ModelSpec s;
  s.family = family_from_string(family);
  s.m = m;
  s.t_perp = t_perp;
  s.disorder = disorder;
  return s;
}

py::dict inertia_dict(const InertiaTriple& t) {
  py::dict d;
  d["n_plus"] = t.n_plus;
  d["n_zero"] = t.n_zero;
  d["n_minus"] = t.n_minus;
  d["signature"] = t.signature();
  d["zero_tol"] = t.zero_tol;
  d["method"] = t.method == InertiaMethod::Eigencount ? "eigencount"
                                                      : "factorization";
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "spectral localizer signatures for lattice index pairings";

  py::register_exception<ComputeError>(m, "ComputeError");

  m.def("clifford",
        [](int n) {
          CliffordSet c = clifford(n);
          py::dict d;
          d["generators"] = c.sigma;
          if (c.even) d["grading"] = c.grading;
          d["rep_dim"] = c.rep_dim;
          return d;
        },
        py::arg("n"),
        "Clifford generators (and grading for even n) as dense arrays");

  m.def("inertia",
        [](const Eigen::MatrixXcd& h, double zero_tol,
           const std::string& method) {
          if (method == "eigencount") return inertia_dict(inertia_eigen(h, zero_tol));
          if (method == "factorization") return inertia_dict(inertia_ldl(h));
          throw std::invalid_argument("method: eigencount or factorization");
        },
        py::arg("h"), py::arg("zero_tol") = -1.0,
        py::arg("method") = "eigencount",
        "Inertia triple of a Hermitian matrix");

  m.def("essential_codimension", &essential_codimension, py::arg("p"),
        py::arg("q"), py::arg("proj_tol") = 1e-10);

  m.def("spectral_flow",
        [](const std::vector<Eigen::MatrixXcd>& samples) {
          FlowPath p;
          p.samples = samples;
          for (std::size_t i = 0; i < samples.size(); ++i)
            p.grid.push_back(samples.size() == 1
                                 ? 0.0
                                 : static_cast<double>(i) /
                                       (samples.size() - 1));
          return spectral_flow(p).flow;
        },
        py::arg("samples"),
        "Spectral flow of a sampled Hermitian path on [0, 1]");

  m.def("winding_number",
        [](const std::string& family, double m, double t_perp, int grid) {
          return winding_number(bloch_map(make_spec(family, m, t_perp, 0)),
                                grid);
        },
        py::arg("family"), py::arg("m"), py::arg("t_perp") = 0.0,
        py::arg("grid") = 40);

  m.def("fhs_chern",
        [](const std::string& family, double m, double t_perp, int grid) {
          return fhs_chern(bloch_map(make_spec(family, m, t_perp, 0)), grid);
        },
        py::arg("family"), py::arg("m"), py::arg("t_perp") = 0.0,
        py::arg("grid") = 40);

  m.def("weak_invariant_oracle",
        [](const std::string& family, double m, double t_perp, int grid) {
          return weak_invariant_oracle(make_spec(family, m, t_perp, 0), grid);
        },
        py::arg("family"), py::arg("m"), py::arg("t_perp") = 0.0,
        py::arg("grid") = 40);

  m.def("build_hamiltonian",
        [](const std::string& family, double m, double t_perp, double disorder,
           double rho, std::uint64_t seed, std::uint64_t sample) {
          ModelSpec s = make_spec(family, m, t_perp, disorder);
          auto g = LatticeGeometry::ball(s.dimension(), rho, s.fiber());
          return Eigen::MatrixXcd(build_hamiltonian(s, g, seed, sample).mat);
        },
        py::arg("family"), py::arg("m"), py::arg("t_perp") = 0.0,
        py::arg("disorder") = 0.0, py::arg("rho") = 10.5, py::arg("seed") = 0,
        py::arg("sample") = 0,
        "Dense Hamiltonian on the Dirichlet ball of radius rho");

  m.def("index_pairing",
        [](const std::string& family, double m, double rho, py::object kappa,
           bool practical, double disorder, std::uint64_t seed) {
          IndexRunConfig c;
          c.model = make_spec(family, m, 0.0, disorder);
          c.rho = rho;
          if (!kappa.is_none()) c.kappa = kappa.cast<double>();
          c.practical = practical;
          c.seed = seed;
          IndexRunResult r = run_index_pairing(c);
          py::dict d;
          d["pairing"] = r.pairing;
          d["signature"] = r.signature;
          d["kappa"] = r.kappa;
          d["rho"] = r.rho;
          d["gap"] = r.measured_gap;
          d["g"] = r.params.g;
          d["admissible"] = r.verdict.admissible;
          d["dim"] = r.dim;
          d["inertia_eigencount"] = inertia_dict(r.by_eigen);
          if (r.by_ldl) d["inertia_factorization"] = inertia_dict(*r.by_ldl);
          if (r.oracle) {
            d["oracle"] = *r.oracle;
            d["oracle_match"] = r.oracle_match;
          }
          return d;
        },
        py::arg("family"), py::arg("m"), py::arg("rho"),
        py::arg("kappa") = py::none(), py::arg("practical") = true,
        py::arg("disorder") = 0.0, py::arg("seed") = 0,
        "Strong index pairing from the reduced localizer signature");

  m.def("weak_run",
        [](const std::string& family, double m, double t_perp, double disorder,
           double rho, const std::vector<int>& volumes, int samples,
           std::uint64_t seed, int workers) {
          WeakRunConfig cfg;
          cfg.model = make_spec(family, m, t_perp, disorder);
          cfg.weak_directions = cfg.model.weak_axes();
          cfg.rho = rho;
          cfg.volumes = volumes;
          cfg.samples = samples;
          cfg.seed = seed;
          cfg.practical = true;
          WeakResult r = trace_per_volume_signature(cfg, workers);
          py::dict d;
          d["kappa"] = r.kappa;
          d["g_clean"] = r.g_clean;
          d["invariant_estimate"] = r.invariant_estimate;
          d["rounded_invariant"] = r.rounded_invariant;
          d["distance_to_integer"] = r.distance_to_integer;
          py::list vols;
          for (const auto& st : r.per_volume) {
            py::dict v;
            v["ell"] = st.ell;
            v["mean"] = st.mean;
            v["std_error"] = st.std_error;
            v["included"] = st.included;
            v["excluded"] = st.excluded;
            vols.append(v);
          }
          d["per_volume"] = vols;
          d["csv"] = weak_result_csv(r);
          return d;
        },
        py::arg("family"), py::arg("m"), py::arg("t_perp"),
        py::arg("disorder"), py::arg("rho"),
        py::arg("volumes") = std::vector<int>{4, 8, 16},
        py::arg("samples") = 1, py::arg("seed") = 0, py::arg("workers") = 1,
        "Trace-per-volume weak invariant run");
}
