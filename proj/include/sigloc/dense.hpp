#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace sigloc {

/// Eigenvalues of a Hermitian matrix, ascending (LAPACK zheev).
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h);

/// Eigenvalues and eigenvectors of a Hermitian matrix (columns).
std::pair<Eigen::VectorXd, Eigen::MatrixXcd> hermitian_eigensystem(
    const Eigen::MatrixXcd& h);

double largest_singular_value(const Eigen::MatrixXcd& m);
double largest_singular_value(const Eigen::SparseMatrix<std::complex<double>>& m,
                              double rel_tol = 1e-10);

/// D (1 + D^2)^{-1/2} for Hermitian D.
Eigen::MatrixXcd bounded_transform(const Eigen::MatrixXcd& d);

}  // namespace sigloc
