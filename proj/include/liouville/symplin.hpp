#pragma once

// Finite-dimensional linear symplectic algebra: polars, symplectic polars,
// isotropy predicates, characteristic distributions, annihilators, product
// forms and linear relation composition.  All predicates are rank tests
// with a singular-value threshold scaled by the matrix norm.

#include <vector>

#include <Eigen/Dense>

#include "liouville/jet.hpp"

namespace liouville {

inline constexpr double kRankTol = 1e-9;

struct SymplecticSpace {
  int dim = 0;
  Eigen::MatrixXd omega;  // antisymmetric, invertible

  static SymplecticSpace standard(int n);  // dim 2n, pairing of dp ^ dq
};

SymplecticSpace make_symplectic(const Eigen::MatrixXd& omega);

struct Subspace {
  int ambient = 0;
  Eigen::MatrixXd basis;  // columns, numerically independent

  int dim() const { return static_cast<int>(basis.cols()); }
};

Subspace make_subspace(int ambient, const Eigen::MatrixXd& columns);
Subspace zero_subspace(int ambient);
Subspace full_space(int ambient);
Subspace column_space(int ambient, const Eigen::MatrixXd& columns,
                      double tol = kRankTol);

bool contains(const Subspace& outer, const Subspace& inner,
              double tol = kRankTol);
bool same_span(const Subspace& a, const Subspace& b, double tol = kRankTol);

// Covectors annihilating V, in the dual coordinates of the same R^m.
Subspace polar(const Subspace& v);

// { w : omega(x, w) = 0 for all x in V }.
Subspace symplectic_polar(const Subspace& v, const SymplecticSpace& s);

bool is_isotropic(const Subspace& v, const SymplecticSpace& s);
bool is_coisotropic(const Subspace& v, const SymplecticSpace& s);
bool is_lagrangian(const Subspace& v, const SymplecticSpace& s);

Subspace characteristic_distribution(const Subspace& v,
                                     const SymplecticSpace& s);

// Block form on the product: diag(omega', -omega).
SymplecticSpace product_form(const SymplecticSpace& sp,
                             const SymplecticSpace& s);

// Graph composition by linear elimination of the middle factor.  g2 lives
// in R^{c+b}, g1 in R^{b+a}; the result lives in R^{c+a}.
Subspace compose_linear_relations(const Subspace& g2, int dim_c, int dim_b,
                                  const Subspace& g1, int dim_a);

Subspace transpose_relation(const Subspace& g, int dim_b, int dim_a);

// Span of the constraint gradients at a point of the zero set.
Subspace annihilator(const std::vector<SmoothFn>& constraints,
                     const Eigen::VectorXd& q);

}  // namespace liouville
