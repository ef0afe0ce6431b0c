#include "sigloc/flow.hpp"

#include <algorithm>
#include <cmath>

#include "sigloc/dense.hpp"

namespace sigloc {

namespace {

double matrix_scale(const Eigen::MatrixXcd& m) {
  return std::max(1.0, m.cwiseAbs().maxCoeff());
}

// Projection onto eigenvalues >= -tol (kernel included).
Eigen::MatrixXcd positive_projection(const Eigen::MatrixXcd& t, double tol) {
  auto [ev, vec] = hermitian_eigensystem(t);
  Eigen::Index first = ev.size();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] >= -tol) { first = i; break; }
  }
  const Eigen::Index count = ev.size() - first;
  if (count == 0) return Eigen::MatrixXcd::Zero(t.rows(), t.cols());
  const Eigen::MatrixXcd v = vec.rightCols(count);
  return v * v.adjoint();
}

long positive_rank(const Eigen::MatrixXcd& t, double tol) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(t);
  long r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev[i] >= -tol) ++r;
  return r;
}

bool near_kernel(const Eigen::MatrixXcd& t, double tol) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(t);
  return ev.cwiseAbs().minCoeff() < tol;
}

}  // namespace

Eigen::MatrixXcd FlowPath::at(double t) const {
  if (generator) return generator(t);
  // Piecewise-linear between samples.
  if (t <= grid.front()) return samples.front();
  if (t >= grid.back()) return samples.back();
  const auto it = std::upper_bound(grid.begin(), grid.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - grid[lo]) / (grid[hi] - grid[lo]);
  return (1 - w) * samples[lo] + w * samples[hi];
}

void FlowPath::validate() const {
  if (samples.empty()) throw std::invalid_argument("flow path is empty");
  if (samples.size() != grid.size())
    throw std::invalid_argument("flow path: samples/grid length mismatch");
  const auto n = samples.front().rows();
  for (const auto& s : samples)
    if (s.rows() != n || s.cols() != n)
      throw std::invalid_argument("flow path: sample dimensions differ");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw std::invalid_argument("flow path: grid not strictly increasing");
}

long essential_codimension(const Eigen::MatrixXcd& p, const Eigen::MatrixXcd& q,
                           double proj_tol) {
  auto check_projection = [&](const Eigen::MatrixXcd& r, const char* name) {
    const double herm = (r - r.adjoint()).cwiseAbs().maxCoeff();
    const double idem = (r * r - r).cwiseAbs().maxCoeff();
    if (herm > proj_tol || idem > proj_tol)
      throw std::invalid_argument(std::string(name) +
                                  " is not a projection within tolerance");
  };
  check_projection(p, "P");
  check_projection(q, "Q");
  const Eigen::Index n = p.rows();
  const Eigen::MatrixXcd m =
      Eigen::MatrixXcd::Identity(n, n) - p - q;  // (1-P) - Q
  auto [ev, vec] = hermitian_eigensystem(m);
  // Ker((1-P) - Q) = [Ran(1-P) ^ Ran Q] + [Ran P ^ Ran(1-Q)]; Q acts on it
  // as the projection onto the first part.
  std::vector<Eigen::Index> kernel;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev[i]) < 1e-7) kernel.push_back(i);
  if (kernel.empty()) return 0;
  Eigen::MatrixXcd k(n, kernel.size());
  for (std::size_t i = 0; i < kernel.size(); ++i) k.col(i) = vec.col(kernel[i]);
  const double trace =
      (k.adjoint() * (2 * q - Eigen::MatrixXcd::Identity(n, n)) * k)
          .trace()
          .real();
  const long ec = std::lround(trace);
  if (std::abs(trace - ec) > 1e-6)
    throw ComputeError("essential_codimension: non-integer trace");
  return ec;
}

FlowResult spectral_flow(const FlowPath& path, double zero_tol_rel) {
  path.validate();
  FlowResult res;
  const std::size_t m = path.samples.size();

  double scale = 0;
  for (const auto& s : path.samples) scale = std::max(scale, matrix_scale(s));
  const double tol = zero_tol_rel * scale;

  // Flow as the ec-sum over consecutive kernel-inclusive projections.
  std::vector<Eigen::MatrixXcd> projs(m);
  for (std::size_t i = 0; i < m; ++i)
    projs[i] = positive_projection(path.samples[i], tol);
  for (std::size_t i = 0; i + 1 < m; ++i)
    res.flow += essential_codimension(projs[i], projs[i + 1], 1e-8);

  // Crossing diagnostic: interior grid points whose matrix touches the
  // kernel are replaced by bisection midpoints with their neighbors
  // (depth <= 20), then signed crossings are accumulated segmentwise.
  struct Point { double t; int depth; };
  std::vector<Point> pts;
  pts.reserve(m);
  for (double t : path.grid) pts.push_back({t, 0});
  bool changed = true;
  while (changed && res.refinements < 256) {
    changed = false;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
      if (pts[i].depth >= 20) continue;
      if (!near_kernel(path.at(pts[i].t), tol)) continue;
      const Point left{0.5 * (pts[i - 1].t + pts[i].t), pts[i].depth + 1};
      const Point right{0.5 * (pts[i].t + pts[i + 1].t), pts[i].depth + 1};
      pts[i] = left;
      pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(i) + 1, right);
      ++res.refinements;
      changed = true;
      break;
    }
  }
  long crossings = 0;
  long prev = positive_rank(path.at(pts.front().t), tol);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const long cur = positive_rank(path.at(pts[i].t), tol);
    crossings += cur - prev;
    prev = cur;
  }
  res.crossing_diagnostic = crossings;
  res.agree = res.crossing_diagnostic == res.flow;
  return res;
}

SigFlowReport sig_flow_identity(const FlowPath& path, const Eigen::MatrixXcd& p,
                                double zero_tol_rel) {
  path.validate();
  const Eigen::Index n = p.rows();
  double scale = 0;
  for (const auto& s : path.samples) scale = std::max(scale, matrix_scale(s));
  const double tol = zero_tol_rel * scale;
  for (const auto& s : path.samples) {
    if ((s - p * s * p).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument(
          "sig_flow_identity: sample not supported in P");
  }

  FlowPath fpath;
  fpath.grid = path.grid;
  const Eigen::MatrixXcd comp = Eigen::MatrixXcd::Identity(n, n) - p;
  fpath.samples.reserve(path.samples.size());
  for (const auto& s : path.samples) fpath.samples.push_back(s + comp);
  if (path.generator) {
    auto gen = path.generator;
    fpath.generator = [gen, comp](double t) { return gen(t) + comp; };
  }

  SigFlowReport rep;
  rep.sf = spectral_flow(fpath, zero_tol_rel).flow;

  const InertiaTriple i0 = inertia_eigen(path.samples.front(), tol);
  const InertiaTriple i1 = inertia_eigen(path.samples.back(), tol);
  // Kernel within P: total n_zero minus the forced dim(1-P) kernel.
  const long rank_p = std::lround(p.trace().real());
  const long k0 = i0.n_zero - (n - rank_p);
  const long k1 = i1.n_zero - (n - rank_p);
  rep.half_sig_diff = 0.5 * static_cast<double>(i1.signature() - i0.signature());
  rep.kernel_correction = 0.5 * static_cast<double>(k1 - k0);
  rep.equal =
      rep.sf == std::lround(rep.half_sig_diff + rep.kernel_correction);
  return rep;
}

}  // namespace sigloc
