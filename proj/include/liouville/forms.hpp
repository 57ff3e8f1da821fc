#pragma once

// Coordinate differential forms.  A degree-k form on R^m is stored as a
// callback returning the coefficient on a strictly increasing k-tuple of
// coordinate differentials at a point.  Coefficients are jet-evaluable, so
// the exterior derivative and pullback are exact on polynomial data.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "liouville/bundles.hpp"
#include "liouville/jet.hpp"

namespace liouville {

using FormCoeff = std::function<JetScalar(std::span<const JetScalar> point,
                                          std::span<const int> idx)>;

struct Form {
  int ambient_dim = 0;
  int degree = 0;
  FormCoeff coeff;
};

// All strictly increasing k-tuples from {0, ..., m-1}.
std::vector<std::vector<int>> increasing_tuples(int m, int k);

Form zero_form(int ambient_dim, int degree);
Form constant_form(int ambient_dim, int degree, std::span<const int> idx,
                   double value);
Form form_add(const Form& a, const Form& b);
Form form_scale(double k, const Form& a);

// Evaluation on k tangent vectors at a common point, over jets and over
// plain coordinates.
JetScalar eval_jet(const Form& mu, std::span<const JetScalar> point,
                   const std::vector<JetVector>& vectors);
double eval(const Form& mu, const Eigen::VectorXd& point,
            const std::vector<Eigen::VectorXd>& vectors);

Form wedge(const Form& a, const Form& b);
Form pullback(const SmoothMap& phi, const Form& mu);
Form exterior_derivative(const Form& mu);

double canonical_pairing(const CotangentPoint& p, const TangentPoint& v,
                         double tol = 1e-9);

// Derivative of the canonical pairing along curve pairs, in chart
// coordinates of the two second bundles.
double tangent_pairing(const TTStarPoint& w, const TTPoint& v,
                       double tol = 1e-9);

// The tautological one-form p.dq on T*R^n (coordinates q then p) and its
// exterior derivative dp ^ dq.
Form liouville_form(int n);
Form canonical_symplectic(int n);

// Degree -1 derivation: contracts the first argument slot with the foot
// velocity of the evaluation point.  Takes a form on R^m to a form on R^2m
// with coordinates (x, xdot).  Functions map to zero.
Form interior_tangent(const Form& mu);

// Degree 0 derivation: interior_tangent(d mu) + d(interior_tangent mu).
Form tangent_derivative(const Form& mu);

inline Form i_T(const Form& mu) { return interior_tangent(mu); }
inline Form d_T(const Form& mu) { return tangent_derivative(mu); }

// Matrix of a 2-form at a point: entries omega(e_i, e_j).
Eigen::MatrixXd form_matrix(const Form& omega, const Eigen::VectorXd& point);

}  // namespace liouville
