#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sigloc/cli.hpp"
#include "sigloc/pipeline.hpp"

using namespace sigloc;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  os << text;
}

}  // namespace

TEST_CASE("bound-admissible pairs share one signature") {
  IndexRunConfig c;
  c.model.family = ModelFamily::Chiral1d;
  c.model.m = 0.5;
  c.rho = 144.5;
  // kappa* for g=1/2, |h|=3/2, |[D,h]|=1.
  const double kappa_star = 0.125 / 18.0;
  SweepResult res =
      run_sweep(c, {kappa_star, 0.5 * kappa_star}, {144.5, 160.5});
  CHECK(res.constant);
  CHECK(res.signature == 2);
  int admissible = 0;
  for (const auto& cell : res.cells)
    if (cell.admissible) ++admissible;
  // rho = 160.5 > 2g/kappa holds for kappa*, not for kappa*/2.
  CHECK(admissible >= 2);
}

TEST_CASE("moderate rho works in the practical mode") {
  IndexRunConfig c;
  c.model.family = ModelFamily::Chiral1d;
  c.model.m = 0.5;
  c.rho = 15.5;
  c.practical = true;
  IndexRunResult r = run_index_pairing(c);
  CHECK(r.practical_pass);
  CHECK(r.pairing == 1.0);
  REQUIRE(r.oracle.has_value());
  CHECK(r.oracle_match);
  // Both inertia routes agree on the localizer.
  REQUIRE(r.by_ldl.has_value());
  CHECK(r.by_ldl->n_plus == r.by_eigen.n_plus);
  CHECK(r.by_ldl->n_minus == r.by_eigen.n_minus);
}

TEST_CASE("cli: weak run emits byte-identical files for a fixed config") {
  write("/tmp/sigloc_weak_det.cfg",
        "[model]\n"
        "family = stacked_chiral2d\n"
        "m = 0.5\n"
        "t_perp = 0.2\n"
        "disorder = 0.3\n"
        "[dirac]\n"
        "n = 1\n"
        "rho = 6.5\n"
        "[localizer]\n"
        "kappa = 0.15\n"
        "[run]\n"
        "seed = 9\n"
        "samples = 2\n"
        "volumes = [3, 5]\n");
  std::ostringstream out1, out2, err;
  int c1 = cli::run({"weak", "--config", "/tmp/sigloc_weak_det.cfg", "--out",
                     "/tmp/sigloc_weak_a.csv"},
                    out1, err);
  int c2 = cli::run({"weak", "--config", "/tmp/sigloc_weak_det.cfg", "--out",
                     "/tmp/sigloc_weak_b.csv", "--workers", "3"},
                    out2, err);
  REQUIRE(c1 == 0);
  REQUIRE(c2 == 0);
  const std::string a = slurp("/tmp/sigloc_weak_a.csv");
  CHECK(!a.empty());
  CHECK(a == slurp("/tmp/sigloc_weak_b.csv"));
  std::remove("/tmp/sigloc_weak_a.csv");
  std::remove("/tmp/sigloc_weak_b.csv");
}

TEST_CASE("cli: localize writes a container that sig reads back") {
  write("/tmp/sigloc_localize.cfg",
        "[model]\n"
        "family = chiral1d\n"
        "m = 0.5\n"
        "[dirac]\n"
        "rho = 8.5\n"
        "[localizer]\n"
        "kappa = 0.12\n");
  for (const std::string path :
       {std::string("/tmp/sigloc_l.slm"), std::string("/tmp/sigloc_l.txt")}) {
    std::ostringstream out, err;
    int code = cli::run(
        {"localize", "--config", "/tmp/sigloc_localize.cfg", "--out", path},
        out, err);
    REQUIRE(code == 0);
    std::ostringstream sout, serr;
    code = cli::run({"sig", path}, sout, serr);
    REQUIRE(code == 0);
    CHECK(sout.str().find("methods agree       yes") != std::string::npos);
    std::remove(path.c_str());
  }
}

TEST_CASE("cli: sweep prints a constant signature column") {
  write("/tmp/sigloc_sweep.cfg",
        "[model]\n"
        "family = chiral1d\n"
        "m = 0.5\n"
        "[dirac]\n"
        "rho = 10.5\n"
        "[sweep]\n"
        "kappas = [0.05, 0.1]\n"
        "rhos = [10.5, 14.5]\n");
  std::ostringstream out, err;
  const int code = cli::run({"sweep", "--config", "/tmp/sigloc_sweep.cfg"},
                            out, err);
  CHECK(code == 0);
  CHECK(out.str().find("constant signature  yes") != std::string::npos);
}
