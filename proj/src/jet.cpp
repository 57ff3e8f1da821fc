#include "liouville/jet.hpp"

#include <algorithm>

namespace liouville {

Eigen::VectorXd gradient(const SmoothFn& f, const Eigen::VectorXd& point) {
  const int m = static_cast<int>(point.size());
  Eigen::VectorXd g(m);
  JetVector seed = to_jets(point);
  for (int i = 0; i < m; ++i) {
    seed[i].ds = 1.0;
    g[i] = f(std::span<const JetScalar>(seed)).ds;
    seed[i].ds = 0.0;
  }
  return g;
}

Eigen::MatrixXd hessian(const SmoothFn& f, const Eigen::VectorXd& point) {
  const int m = static_cast<int>(point.size());
  Eigen::MatrixXd h(m, m);
  JetVector seed = to_jets(point);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      seed[i].ds = 1.0;
      seed[j].dt += 1.0;  // handles i == j
      h(i, j) = f(std::span<const JetScalar>(seed)).dst;
      seed[i].ds = 0.0;
      seed[j].dt = 0.0;
    }
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::logic_error("hessian: mixed partials disagree");
  return 0.5 * (h + h.transpose());
}

Eigen::MatrixXd jacobian(const SmoothMap& phi, const Eigen::VectorXd& point) {
  Eigen::MatrixXd j(phi.dim_out, phi.dim_in);
  JetVector seed = to_jets(point);
  for (int c = 0; c < phi.dim_in; ++c) {
    seed[c].ds = 1.0;
    JetVector col = phi(std::span<const JetScalar>(seed));
    for (int r = 0; r < phi.dim_out; ++r) j(r, c) = col[r].ds;
    seed[c].ds = 0.0;
  }
  return j;
}

JetScalar jet_directional(
    const std::function<JetScalar(std::span<const JetScalar>)>& fn,
    std::span<const JetScalar> point, int direction) {
  bool ds_free = true;
  bool dt_free = true;
  for (const JetScalar& c : point) {
    if (c.ds != 0.0 || c.dst != 0.0) ds_free = false;
    if (c.dt != 0.0 || c.dst != 0.0) dt_free = false;
  }
  JetVector probe(point.begin(), point.end());
  if (ds_free) {
    probe[direction].ds = 1.0;
    JetScalar r = fn(probe);
    // The s-slot held the probe; its t-propagation sits in the mixed term.
    return {r.ds, 0.0, r.dst, 0.0};
  }
  if (dt_free) {
    probe[direction].dt = 1.0;
    JetScalar r = fn(probe);
    return {r.dt, r.dst, 0.0, 0.0};
  }
  throw std::logic_error(
      "jet_directional: both jet slots busy (derivative depth > 2)");
}

JetVector jet_solve(std::vector<JetVector> a, JetVector b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col].val) > std::abs(a[piv][col].val)) piv = r;
    if (a[piv][col].val == 0.0)
      throw std::domain_error("jet_solve: singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    const JetScalar inv = inverse(a[col][col]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const JetScalar factor = a[r][col] * inv;
      for (int c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  JetVector x(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] * inverse(a[i][i]);
  return x;
}

}  // namespace liouville
