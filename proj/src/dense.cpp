#include "sigloc/dense.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#define lapack_complex_double std::complex<double>
#define lapack_complex_float std::complex<float>
#include <lapacke.h>

#include "sigloc/lattice.hpp"

namespace sigloc {

namespace {

Eigen::VectorXd zheev(Eigen::MatrixXcd a, char jobz,
                      Eigen::MatrixXcd* vectors) {
  if (a.rows() != a.cols()) throw std::invalid_argument("zheev: not square");
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(a.rows());
  if (n == 0) return w;
  const lapack_int info = LAPACKE_zheev(LAPACK_COL_MAJOR, jobz, 'L', n,
                                        a.data(), n, w.data());
  if (info != 0)
    throw ComputeError("zheev failed, info=" + std::to_string(info));
  if (vectors) *vectors = std::move(a);
  return w;
}

}  // namespace

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h) {
  if (h.rows() == 1) {
    Eigen::VectorXd w(1);
    w[0] = h(0, 0).real();
    return w;
  }
  if (h.rows() == 2) {
    // Closed form; the 2x2 case dominates the symbol-grid scans.
    const double a = h(0, 0).real(), c = h(1, 1).real();
    const double half_tr = 0.5 * (a + c);
    const double disc =
        std::sqrt(0.25 * (a - c) * (a - c) + std::norm(h(1, 0)));
    Eigen::VectorXd w(2);
    w[0] = half_tr - disc;
    w[1] = half_tr + disc;
    return w;
  }
  return zheev(h, 'N', nullptr);
}

std::pair<Eigen::VectorXd, Eigen::MatrixXcd> hermitian_eigensystem(
    const Eigen::MatrixXcd& h) {
  Eigen::MatrixXcd v;
  Eigen::VectorXd w = zheev(h, 'V', &v);
  return {std::move(w), std::move(v)};
}

double largest_singular_value(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const Eigen::MatrixXcd g = m.adjoint() * m;
  const Eigen::VectorXd w = hermitian_eigenvalues(g);
  return std::sqrt(std::max(0.0, w.maxCoeff()));
}

double largest_singular_value(
    const Eigen::SparseMatrix<std::complex<double>>& m, double rel_tol) {
  const Eigen::Index n = m.rows();
  if (n == 0 || m.nonZeros() == 0) return 0.0;
  // Dense Gram solve only while it is cheap; the iteration above that.
  if (n < 600) return largest_singular_value(Eigen::MatrixXcd(m));

  // Power iteration on M^* M; deterministic start.
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = counter_uniform(0x5eed, 7, static_cast<std::uint64_t>(i));
    const double u2 =
        counter_uniform(0x5eed, 11, static_cast<std::uint64_t>(i));
    v[i] = cplx(u - 0.5, u2 - 0.5);
  }
  v.normalize();
  double lambda = 0.0;
  for (int iter = 0; iter < 20000; ++iter) {
    Eigen::VectorXcd w = m.adjoint() * (m * v);
    const double next = w.norm();
    if (next == 0.0) return 0.0;
    v = w / next;
    if (iter > 4 && std::abs(next - lambda) <= rel_tol * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

Eigen::MatrixXcd bounded_transform(const Eigen::MatrixXcd& d) {
  auto [w, v] = hermitian_eigensystem(d);
  Eigen::VectorXd f(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    f[i] = w[i] / std::sqrt(1.0 + w[i] * w[i]);
  return v * f.asDiagonal() * v.adjoint();
}

}  // namespace sigloc
