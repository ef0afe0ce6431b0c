#pragma once

#include <random>

#include <Eigen/Dense>

#include "sigloc/dense.hpp"
#include "sigloc/lattice.hpp"

namespace sigloc::testing {

inline Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> dist;
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(dist(rng), dist(rng));
  return m;
}

// Hermitian with |eig| >= gap; the pushed spectrum is returned so tests can
// count signs independently of the code under test.
inline Eigen::MatrixXcd random_hermitian_gapped(
    std::mt19937_64& rng, int n, double gap,
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

inline Eigen::MatrixXcd random_unitary(std::mt19937_64& rng, int n) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_matrix(rng, n));
  return qr.householderQ();
}

inline Eigen::MatrixXcd random_projection(std::mt19937_64& rng, int n,
                                          int rank) {
  Eigen::MatrixXcd v = random_unitary(rng, n).leftCols(rank);
  return v * v.adjoint();
}

// Invertible with condition number <= cond.
inline Eigen::MatrixXcd random_invertible(std::mt19937_64& rng, int n,
                                          double cond) {
  Eigen::MatrixXcd u = random_unitary(rng, n);
  Eigen::MatrixXcd v = random_unitary(rng, n);
  std::uniform_real_distribution<double> logs(0.0, std::log(cond));
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s[i] = std::exp(logs(rng)) / cond;
  s[0] = 1.0 / cond;   // pin the extremes
  if (n > 1) s[n - 1] = 1.0;
  return u * s.asDiagonal() * v.adjoint();
}

}  // namespace sigloc::testing
