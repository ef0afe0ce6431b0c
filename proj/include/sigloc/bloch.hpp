#pragma once

#include <functional>

#include <Eigen/Dense>

namespace sigloc {

/// Momentum-space symbol of a translation-invariant lattice operator,
/// h(k) = sum_r M_r exp(-i k.r) with M_r = <x+r| h |x>. Periodic with
/// period 2 pi in every component. `chiral_block`, when set, is the
/// invertible off-diagonal block a(k) of a chiral symbol.
struct BlochMap {
  int torus_dim = 0;
  int fiber = 0;
  std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)> symbol;
  std::function<Eigen::MatrixXcd(const Eigen::VectorXd&)> chiral_block;
};

}  // namespace sigloc
