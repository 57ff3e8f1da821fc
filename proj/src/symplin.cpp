#include "liouville/symplin.hpp"

#include <stdexcept>
#include <string>

namespace liouville {

namespace {

double scaled_tol(const Eigen::MatrixXd& m, double tol) {
  const double norm = m.size() == 0 ? 0.0 : m.norm();
  return tol * std::max(1.0, norm);
}

// Orthonormal basis of the null space of m.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0)
    return Eigen::MatrixXd::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double cutoff = scaled_tol(m, tol);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > cutoff) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

int rank_of(const Eigen::MatrixXd& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const double cutoff = scaled_tol(m, tol);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > cutoff) ++rank;
  return rank;
}

}  // namespace

SymplecticSpace SymplecticSpace::standard(int n) {
  // Matrix of dp ^ dq in coordinates (q, p): omega(e_q, e_p) = -1.
  Eigen::MatrixXd o = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    o(i, n + i) = -1.0;
    o(n + i, i) = 1.0;
  }
  return {2 * n, o};
}

SymplecticSpace make_symplectic(const Eigen::MatrixXd& omega) {
  if (omega.rows() != omega.cols())
    throw std::invalid_argument("make_symplectic: square matrix required");
  if ((omega + omega.transpose()).cwiseAbs().maxCoeff() >
      scaled_tol(omega, kRankTol))
    throw std::invalid_argument("make_symplectic: matrix is not antisymmetric");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(omega);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= 0.0 ||
      sv(0) / sv(sv.size() - 1) > 1e8)
    throw std::invalid_argument("make_symplectic: matrix is degenerate");
  return {static_cast<int>(omega.rows()), omega};
}

Subspace make_subspace(int ambient, const Eigen::MatrixXd& columns) {
  if (columns.rows() != ambient)
    throw std::invalid_argument("make_subspace: ambient dimension mismatch");
  if (rank_of(columns, kRankTol) != columns.cols())
    throw std::invalid_argument(
        "make_subspace: basis columns are not independent (rank " +
        std::to_string(rank_of(columns, kRankTol)) + " of " +
        std::to_string(columns.cols()) + ")");
  return {ambient, columns};
}

Subspace zero_subspace(int ambient) {
  return {ambient, Eigen::MatrixXd(ambient, 0)};
}

Subspace full_space(int ambient) {
  return {ambient, Eigen::MatrixXd::Identity(ambient, ambient)};
}

Subspace column_space(int ambient, const Eigen::MatrixXd& columns,
                      double tol) {
  if (columns.cols() == 0) return zero_subspace(ambient);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns, Eigen::ComputeFullU);
  const double cutoff = scaled_tol(columns, tol);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > cutoff) ++rank;
  return {ambient, svd.matrixU().leftCols(rank)};
}

bool contains(const Subspace& outer, const Subspace& inner, double tol) {
  if (outer.ambient != inner.ambient)
    throw std::invalid_argument("contains: ambient dimension mismatch");
  if (inner.dim() == 0) return true;
  Eigen::MatrixXd joint(outer.ambient, outer.dim() + inner.dim());
  joint << outer.basis, inner.basis;
  return rank_of(joint, tol) == outer.dim();
}

bool same_span(const Subspace& a, const Subspace& b, double tol) {
  return a.dim() == b.dim() && contains(a, b, tol) && contains(b, a, tol);
}

Subspace polar(const Subspace& v) {
  return {v.ambient, null_space(v.basis.transpose(), kRankTol)};
}

Subspace symplectic_polar(const Subspace& v, const SymplecticSpace& s) {
  if (v.ambient != s.dim)
    throw std::invalid_argument("symplectic_polar: dimension mismatch");
  return {v.ambient,
          null_space(v.basis.transpose() * s.omega, kRankTol)};
}

bool is_isotropic(const Subspace& v, const SymplecticSpace& s) {
  return contains(symplectic_polar(v, s), v);
}

bool is_coisotropic(const Subspace& v, const SymplecticSpace& s) {
  return contains(v, symplectic_polar(v, s));
}

bool is_lagrangian(const Subspace& v, const SymplecticSpace& s) {
  return same_span(v, symplectic_polar(v, s));
}

Subspace characteristic_distribution(const Subspace& v,
                                     const SymplecticSpace& s) {
  if (!is_coisotropic(v, s))
    throw std::invalid_argument(
        "characteristic_distribution: subspace is not coisotropic");
  return symplectic_polar(v, s);
}

SymplecticSpace product_form(const SymplecticSpace& sp,
                             const SymplecticSpace& s) {
  Eigen::MatrixXd o = Eigen::MatrixXd::Zero(sp.dim + s.dim, sp.dim + s.dim);
  o.topLeftCorner(sp.dim, sp.dim) = sp.omega;
  o.bottomRightCorner(s.dim, s.dim) = -s.omega;
  return {sp.dim + s.dim, o};
}

Subspace compose_linear_relations(const Subspace& g2, int dim_c, int dim_b,
                                  const Subspace& g1, int dim_a) {
  if (g2.ambient != dim_c + dim_b || g1.ambient != dim_b + dim_a)
    throw std::invalid_argument(
        "compose_linear_relations: ambient dimensions inconsistent");
  // Parameters (lambda, mu) of g2 x g1 whose middle components agree.
  Eigen::MatrixXd middle(dim_b, g2.dim() + g1.dim());
  middle << g2.basis.bottomRows(dim_b), -g1.basis.topRows(dim_b);
  Eigen::MatrixXd params = null_space(middle, kRankTol);
  Eigen::MatrixXd outer(dim_c + dim_a, params.cols());
  outer.topRows(dim_c) = g2.basis.topRows(dim_c) * params.topRows(g2.dim());
  outer.bottomRows(dim_a) =
      g1.basis.bottomRows(dim_a) * params.bottomRows(g1.dim());
  return column_space(dim_c + dim_a, outer);
}

Subspace transpose_relation(const Subspace& g, int dim_b, int dim_a) {
  if (g.ambient != dim_b + dim_a)
    throw std::invalid_argument("transpose_relation: dimension mismatch");
  Eigen::MatrixXd flipped(g.ambient, g.dim());
  flipped.topRows(dim_a) = g.basis.bottomRows(dim_a);
  flipped.bottomRows(dim_b) = g.basis.topRows(dim_b);
  return {g.ambient, flipped};
}

Subspace annihilator(const std::vector<SmoothFn>& constraints,
                     const Eigen::VectorXd& q) {
  const int n = static_cast<int>(q.size());
  const int k = static_cast<int>(constraints.size());
  if (k == 0) return zero_subspace(n);
  Eigen::MatrixXd grads(n, k);
  for (int a = 0; a < k; ++a) grads.col(a) = gradient(constraints[a], q);
  if (rank_of(grads, kRankTol) != k)
    throw std::invalid_argument(
        "annihilator: constraint gradients rank-deficient (rank " +
        std::to_string(rank_of(grads, kRankTol)) + " of " + std::to_string(k) +
        ")");
  return {n, grads};
}

}  // namespace liouville
