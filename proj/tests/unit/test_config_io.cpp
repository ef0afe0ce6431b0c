#include <doctest.h>

#include <fstream>
#include <sstream>

#include "sigloc/cli.hpp"
#include "sigloc/config.hpp"
#include "sigloc/matrix_io.hpp"
#include "sigloc/models.hpp"
#include "test_helpers.hpp"

using namespace sigloc;

TEST_CASE("minimal config fills defaults") {
  ParseOutcome out = parse_config(
      "[model]\n"
      "family = qwz2d\n"
      "m = 1.0\n");
  REQUIRE(out.ok());
  const RunConfig& c = *out.config;
  CHECK(c.model.family == ModelFamily::Qwz2d);
  CHECK(c.oracle_grid == 40);
  CHECK(c.volume_boundary == Boundary::Periodic);
  CHECK(!c.zero_tol.has_value());
  CHECK(!c.kappa.has_value());  // absent key means automatic
  CHECK(c.n == 2);              // family strong direction count
  CHECK(c.format == "csv");
}

TEST_CASE("all errors are reported, not just the first") {
  ParseOutcome out = parse_config(
      "[model]\n"
      "family = nosuch\n"
      "m = abc\n"
      "[dirac]\n"
      "bogus = 1\n"
      "[run]\n"
      "samples = -2\n");
  CHECK_FALSE(out.ok());
  CHECK(out.errors.size() >= 3);
}

TEST_CASE("pairing directions exceeding the dimension") {
  ParseOutcome out = parse_config(
      "[model]\n"
      "family = qwz2d\n"
      "[dirac]\n"
      "n = 3\n"
      "rho = 8.5\n");
  CHECK_FALSE(out.ok());
  REQUIRE(out.errors.size() == 1);
  CHECK(out.errors.front().find("exceed") != std::string::npos);
}

TEST_CASE("kappa auto and numbers") {
  ParseOutcome a = parse_config(
      "[model]\nfamily = chiral1d\n[localizer]\nkappa = auto\n");
  REQUIRE(a.ok());
  CHECK(!a.config->kappa.has_value());
  ParseOutcome b = parse_config(
      "[model]\nfamily = chiral1d\n[localizer]\nkappa = 0.05\n");
  REQUIRE(b.ok());
  CHECK(b.config->kappa.value() == doctest::Approx(0.05));
  ParseOutcome c = parse_config(
      "[model]\nfamily = chiral1d\n[localizer]\nkappa = -1\n");
  CHECK_FALSE(c.ok());
}

TEST_CASE("arrays, comments, and unknown keys") {
  ParseOutcome out = parse_config(
      "# heading comment\n"
      "[model]\n"
      "family = stacked_chiral2d  ; trailing comment\n"
      "m = 0.5\n"
      "t_perp = 0.2\n"
      "[run]\n"
      "volumes = [4, 8, 16]\n"
      "[sweep]\n"
      "rhos = [10.5, 20.5]\n");
  REQUIRE(out.ok());
  CHECK(out.config->volumes == std::vector<int>{4, 8, 16});
  CHECK(out.config->sweep_rhos.size() == 2);
  ParseOutcome bad = parse_config("[model]\nfamily = qwz2d\nspin = 3\n");
  CHECK_FALSE(bad.ok());
}

TEST_CASE("matrix container round trip, text and binary") {
  std::mt19937_64 rng(21);
  auto g = LatticeGeometry::ball(1, 3.5, 2);
  Eigen::MatrixXcd dense =
      sigloc::testing::random_hermitian_gapped(rng, static_cast<int>(g->basis_size()), 0.1);
  OperatorMatrix op{g, dense.sparseView(), true};
  MatrixContainer c = container_from(op);

  for (bool binary : {false, true}) {
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    if (binary) write_matrix_binary(ss, c);
    else write_matrix_text(ss, c);
    MatrixContainer back = read_matrix(ss);
    CHECK(back.dim == c.dim);
    CHECK(back.fiber == 2);
    CHECK(back.hermitian);
    CHECK(back.ordering == c.ordering);
    // Entrywise exact: %.17g text round-trips doubles, binary is verbatim.
    CHECK((Eigen::MatrixXcd(back.mat) - Eigen::MatrixXcd(c.mat))
              .cwiseAbs()
              .maxCoeff() == 0);
  }
}

TEST_CASE("truncated container is rejected") {
  std::stringstream ss;
  ss << "SigLocMatrix v1 text\ndim 4\nfiber 1\nhermitian 1\nordering x\nnnz 2\n"
     << "0 0 1.0 0.0\n";  // one entry missing
  CHECK_THROWS(read_matrix(ss));
}

TEST_CASE("cli: config errors exit with code 2 and list problems") {
  std::ostringstream out, err;
  const int code = sigloc::cli::run({"index", "--config", "/nonexistent.cfg"},
                                    out, err);
  CHECK(code == 2);
  CHECK(err.str().find("config error") != std::string::npos);
}

TEST_CASE("cli: selftest runs clean") {
  std::ostringstream out, err;
  const int code = sigloc::cli::run({"selftest"}, out, err);
  CHECK(code == 0);
  CHECK(out.str().find("[FAIL]") == std::string::npos);
}

TEST_CASE("cli: index on a small chiral model matches the oracle") {
  const char* cfg =
      "[model]\n"
      "family = chiral1d\n"
      "m = 0.5\n"
      "[dirac]\n"
      "rho = 10.5\n"
      "[localizer]\n"
      "kappa = 0.1\n";
  const std::string path = "/tmp/sigloc_test_index.cfg";
  {
    std::ofstream f(path);
    f << cfg;
  }
  std::ostringstream out, err;
  const int code = sigloc::cli::run({"index", "--config", path}, out, err);
  CHECK(code == 0);
  CHECK(out.str().find("pairing == oracle   yes") != std::string::npos);
}
