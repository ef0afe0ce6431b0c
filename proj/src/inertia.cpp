#include "sigloc/inertia.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseCholesky>

#include "sigloc/dense.hpp"

namespace sigloc {

namespace {

// Rook pivot threshold; the classical (1+sqrt(17))/8 rounded as documented.
constexpr double kPivotAlpha = 0.64;

// Densification cutoff for the factorization path.
constexpr Eigen::Index kSparseLdlCutoff = 4000;

void count_sign(double v, double tol, InertiaTriple& t) {
  if (v > tol) {
    ++t.n_plus;
  } else if (v < -tol) {
    ++t.n_minus;
  } else {
    ++t.n_zero;
  }
}

// Inertia of the 2x2 Hermitian block [[a, conj(b)], [b, c]].
void count_2x2(double a, cplx b, double c, InertiaTriple& t) {
  const double det = a * c - std::norm(b);
  if (det < 0) {
    ++t.n_plus;
    ++t.n_minus;
  } else if (a + c > 0) {
    t.n_plus += 2;
  } else {
    t.n_minus += 2;
  }
}

}  // namespace

double default_zero_tol(double norm, Eigen::Index dim) {
  const double eps = std::numeric_limits<double>::epsilon();
  return std::max(1e-8 * norm, static_cast<double>(dim) * eps * norm);
}

InertiaTriple inertia_eigen(const Eigen::MatrixXcd& h, double zero_tol) {
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() >
      1e-12 * std::max(1.0, h.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("inertia_eigen: matrix is not Hermitian");
  const Eigen::VectorXd ev = hermitian_eigenvalues(h);
  const double tol = zero_tol >= 0
                         ? zero_tol
                         : default_zero_tol(
                               ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0,
                               h.rows());
  InertiaTriple t;
  t.zero_tol = tol;
  t.method = InertiaMethod::Eigencount;
  for (Eigen::Index i = 0; i < ev.size(); ++i) count_sign(ev[i], tol, t);
  return t;
}

InertiaTriple inertia_eigen(const OperatorMatrix& h, double zero_tol) {
  return inertia_eigen(h.dense(), zero_tol);
}

InertiaTriple inertia_ldl(const Eigen::MatrixXcd& h, double pivot_tol) {
  const Eigen::Index n = h.rows();
  if (n != h.cols()) throw std::invalid_argument("inertia_ldl: not square");
  Eigen::MatrixXcd a = h;  // full storage, lower triangle authoritative
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double tiny = pivot_tol * scale;

  InertiaTriple t;
  t.method = InertiaMethod::Factorization;
  t.zero_tol = tiny;

  auto swap_sym = [&](Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    a.row(i).swap(a.row(j));
    a.col(i).swap(a.col(j));
  };
  auto abs_at = [&](Eigen::Index i, Eigen::Index j) {
    return std::abs(a(i, j));
  };

  Eigen::Index k = 0;
  while (k < n) {
    const Eigen::Index rem = n - k;
    if (rem == 1) {
      const double d = a(k, k).real();
      if (std::abs(d) <= tiny)
        throw PivotBreakdown("inertia_ldl: zero trailing pivot");
      count_sign(d, 0.0, t);
      break;
    }

    // Largest off-diagonal magnitude in column k.
    Eigen::Index r = k + 1;
    double colmax = 0;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double v = abs_at(i, k);
      if (v > colmax) { colmax = v; r = i; }
    }

    bool use_two = false;
    Eigen::Index p = k, q = k;
    if (std::abs(a(k, k).real()) >= kPivotAlpha * colmax) {
      p = k;
    } else {
      // Rook search: walk to a column whose diagonal dominates, or to a
      // pair achieving the running maximum.
      Eigen::Index i_cur = r;
      Eigen::Index i_prev = k;
      double omega = colmax;
      while (true) {
        double omega_i = 0;
        Eigen::Index j_new = k;
        for (Eigen::Index j = k; j < n; ++j) {
          if (j == i_cur) continue;
          const double v = j > i_cur ? abs_at(j, i_cur) : abs_at(i_cur, j);
          if (v > omega_i) { omega_i = v; j_new = j; }
        }
        if (std::abs(a(i_cur, i_cur).real()) >= kPivotAlpha * omega_i) {
          p = i_cur;
          break;
        }
        if (omega_i <= omega) {
          use_two = true;
          p = std::min(i_prev, i_cur);
          q = std::max(i_prev, i_cur);
          break;
        }
        i_prev = i_cur;
        i_cur = j_new;
        omega = omega_i;
      }
    }

    if (!use_two) {
      swap_sym(k, p);
      const double d = a(k, k).real();
      if (std::abs(d) <= tiny)
        throw PivotBreakdown("inertia_ldl: 1x1 pivot below tolerance");
      count_sign(d, 0.0, t);
      const Eigen::Index m = n - k - 1;
      if (m > 0) {
        Eigen::VectorXcd c = a.block(k + 1, k, m, 1);
        a.block(k + 1, k + 1, m, m).noalias() -= (c / d) * c.adjoint();
      }
      ++k;
    } else {
      swap_sym(k, p);
      swap_sym(k + 1, q == k ? p : q);
      const double e11 = a(k, k).real();
      const double e22 = a(k + 1, k + 1).real();
      const cplx e21 = a(k + 1, k);
      const double det = e11 * e22 - std::norm(e21);
      if (std::abs(det) <= tiny * tiny)
        throw PivotBreakdown("inertia_ldl: 2x2 pivot below tolerance");
      count_2x2(e11, e21, e22, t);
      const Eigen::Index m = n - k - 2;
      if (m > 0) {
        Eigen::MatrixXcd w = a.block(k + 2, k, m, 2);
        Eigen::Matrix2cd e;
        e << e11, std::conj(e21), e21, e22;
        Eigen::Matrix2cd einv;
        einv << e22, -std::conj(e21), -e21, e11;
        einv /= det;
        a.block(k + 2, k + 2, m, m).noalias() -= w * einv * w.adjoint();
      }
      k += 2;
    }
  }
  return t;
}

InertiaTriple inertia_ldl(const SparseCx& h, double pivot_tol) {
  const Eigen::Index n = h.rows();
  if (n <= kSparseLdlCutoff) return inertia_ldl(Eigen::MatrixXcd(h), pivot_tol);

  Eigen::SimplicialLDLT<SparseCx, Eigen::Lower> ldlt(h);
  if (ldlt.info() != Eigen::Success)
    throw PivotBreakdown("inertia_ldl: sparse factorization failed");
  const auto d = ldlt.vectorD();
  double scale = 0;
  for (Eigen::Index i = 0; i < d.size(); ++i)
    scale = std::max(scale, std::abs(d[i].real()));
  const double tiny = pivot_tol * std::max(1.0, scale);
  InertiaTriple t;
  t.method = InertiaMethod::Factorization;
  t.zero_tol = tiny;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const double v = d[i].real();
    if (std::abs(v) <= tiny)
      throw PivotBreakdown("inertia_ldl: sparse pivot below tolerance");
    count_sign(v, 0.0, t);
  }
  return t;
}

InertiaTriple inertia_ldl(const OperatorMatrix& h, double pivot_tol) {
  return inertia_ldl(h.mat, pivot_tol);
}

InertiaTriple inertia_auto(const OperatorMatrix& h, double zero_tol) {
  try {
    return inertia_ldl(h);
  } catch (const PivotBreakdown&) {
    return inertia_eigen(h, zero_tol);
  }
}

SylvesterReport sylvester_check(const Eigen::MatrixXcd& t,
                                const Eigen::MatrixXcd& a, double zero_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (smin <= 1e-13 * std::max(1.0, smax))
    throw ComputeError("sylvester_check: congruence matrix is singular");
  SylvesterReport rep;
  rep.cond_a = smax / smin;
  const Eigen::MatrixXcd c = a.adjoint() * t * a;
  const InertiaTriple it = inertia_eigen(t, zero_tol);
  // Zero eigenvalues stay zero under congruence; scale the window by the
  // squared singular range so both counts see the same kernel.
  const double ct = zero_tol >= 0 ? zero_tol * smax * smax
                                  : it.zero_tol * smax * smax;
  const InertiaTriple ic = inertia_eigen(c, ct);
  rep.sig_t = it.signature();
  rep.sig_congruence = ic.signature();
  rep.equal = rep.sig_t == rep.sig_congruence;
  return rep;
}

}  // namespace sigloc
