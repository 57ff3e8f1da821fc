#pragma once

// Generating objects and the dynamics they carve out: sets generated by
// functions on the base, by constrained functions, and by two-point
// functions; implicit Lagrangian dynamics and Hamiltonian vector fields;
// the Legendre map; recovery of a generating function from a section; and
// the diagonal identity relating the two derived structures on TP.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liouville/liouville.hpp"
#include "liouville/symplin.hpp"

namespace liouville {

// A named scalar ingredient (internal energy, Lagrangian, Hamiltonian,
// two-point function), evaluable over jets.
struct ScalarModel {
  std::string name;
  std::vector<std::string> arity;  // variable labels, one per argument
  SmoothFn value;
};

// A subset of the total space of a Liouville structure cut out by a
// generating object.  Points are total-space coordinate vectors.  The
// sampler parametrizes the set; membership returns a residual that
// vanishes on the set.
struct GeneratedSet {
  LiouvilleStructure structure;
  int param_dim = 0;
  SmoothMap sampler;  // R^{param_dim} -> total space
  std::function<double(const Eigen::VectorXd&)> membership;
  std::function<Subspace(const Eigen::VectorXd&)> tangent_basis;
};

// The set { alpha(p) = dU at the base point }, parametrized by the base.
GeneratedSet generate_from_function(const LiouvilleStructure& l,
                                    const ScalarModel& u);

// The set over the constraint locus g = 0 where alpha(p) - dU lies in the
// span of the constraint gradients.  Parameters are (base seed, multipliers);
// the seed is projected onto the locus by a fixed-step Newton iteration.
GeneratedSet generate_constrained(const LiouvilleStructure& l,
                                  const ScalarModel& u,
                                  const std::vector<SmoothFn>& g);

// The set { p1 = dW/dq1, p0 = -dW/dq0 } in the difference structure over
// Q x Q, with total-space coordinates (q1, q0, p1, p0).
GeneratedSet generate_two_point(const ScalarModel& w);

// The implicit dynamics { p = dL/dv, pdot = dL/dq } in the tangent
// structure of the canonical one, with coordinates (q, qdot, p, pdot).
GeneratedSet lagrangian_dynamics(const ScalarModel& l_fn);

// Velocity-phase vector field (q, v) -> (v, vdot) from the Euler-Lagrange
// system; rejects Lagrangians with singular velocity Hessian.
std::function<Eigen::VectorXd(const Eigen::VectorXd&)> explicit_ode(
    const ScalarModel& l_fn);

struct HamiltonianDynamics {
  // State field x -> xdot solving the two-form equation against -dH.
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> field;
  // Residual of a point (x, xdot) of the phase tangent space.
  std::function<double(const Eigen::VectorXd&)> membership;
};

HamiltonianDynamics hamiltonian_dynamics(const ScalarModel& h,
                                         const Form& omega);

// (q, v) -> (q, dL/dv), jet-evaluable.
SmoothMap legendre_map(const ScalarModel& l_fn);

// Max deviation between the pushforward of the Euler-Lagrange field through
// the Legendre map and the Hamiltonian field of h, over random states.
double consistency_check(const ScalarModel& l_fn, const ScalarModel& h,
                         int samples = 20, unsigned seed = 20260823);

// Recovers a function on the base whose differential condition reproduces
// the section, by a line integral of the pulled-back form from base_point.
// Rejects when two independent paths give different integrals.
std::function<double(const Eigen::VectorXd&)> proper_function(
    const LiouvilleStructure& l, const SmoothMap& sigma,
    const Eigen::VectorXd& base_point, double tol = 1e-8);

// Checks the identity relating the contraction of d theta with the
// tangent derivative of theta: their difference is exact with primitive
// -theta contracted with the foot velocity.  Also checks that the
// primitive vanishes on vertical velocities and ignores the second-order
// fibre slot.
VerifyReport diagonal_check(const LiouvilleStructure& l, int samples,
                            double tol = 1e-9, unsigned seed = 20260823);

}  // namespace liouville
