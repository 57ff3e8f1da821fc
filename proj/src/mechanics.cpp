#include "liouville/mechanics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace liouville {

namespace {

std::string fmt(const Eigen::VectorXd& v) {
  std::ostringstream os;
  os << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << "]";
  return os.str();
}

JetVector jet_gradient(const SmoothFn& f, std::span<const JetScalar> x) {
  JetVector g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    g[i] = jet_directional(f.fn, x, static_cast<int>(i));
  return g;
}

Eigen::VectorXd concat(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd r(a.size() + b.size());
  r << a, b;
  return r;
}

double condition_of(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= 0.0)
    return std::numeric_limits<double>::infinity();
  return sv(0) / sv(sv.size() - 1);
}

// 16-point Gauss-Legendre rule on [-1, 1].
constexpr double kGaussNode[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};
constexpr double kGaussWeight[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

}  // namespace

GeneratedSet generate_from_function(const LiouvilleStructure& l,
                                    const ScalarModel& u) {
  const int n = l.base_dim;
  const int k = l.fibre_dim;
  if (u.value.dim != n)
    throw std::invalid_argument(
        "generate_from_function: base function arity mismatch");
  const AlphaMap a = alpha(l);
  const SmoothFn ufn = u.value;

  SmoothMap sampler{n, n + k, [a, ufn, n](std::span<const JetScalar> q) {
                      JetVector qp(q.begin(), q.end());
                      JetVector grad = jet_gradient(ufn, q);
                      qp.insert(qp.end(), grad.begin(), grad.end());
                      return a.inverse(qp);
                    }};

  auto membership = [a, ufn, n](const Eigen::VectorXd& x) {
    const Eigen::VectorXd q = x.head(n);
    const Eigen::VectorXd p = a.forward(x).tail(n);
    return (p - gradient(ufn, q)).norm();
  };

  auto tangent_basis = [sampler, n](const Eigen::VectorXd& x) {
    return make_subspace(sampler.dim_out, jacobian(sampler, x.head(n)));
  };

  return {l, n, sampler, membership, tangent_basis};
}

GeneratedSet generate_constrained(const LiouvilleStructure& l,
                                  const ScalarModel& u,
                                  const std::vector<SmoothFn>& g) {
  if (g.empty()) return generate_from_function(l, u);
  const int n = l.base_dim;
  const int k = l.fibre_dim;
  const int m = static_cast<int>(g.size());
  if (u.value.dim != n)
    throw std::invalid_argument(
        "generate_constrained: base function arity mismatch");
  for (const SmoothFn& ga : g)
    if (ga.dim != n)
      throw std::invalid_argument(
          "generate_constrained: constraint arity mismatch");
  const AlphaMap a = alpha(l);
  const SmoothFn ufn = u.value;

  // Fixed-count Newton projection of a seed onto the constraint locus,
  // evaluable over jets.
  auto project = [g, n, m](const JetVector& seed) {
    JetVector q = seed;
    for (int it = 0; it < 12; ++it) {
      Eigen::VectorXd gv(m);
      std::vector<JetVector> jac(m);
      JetVector gj(m);
      for (int aix = 0; aix < m; ++aix) {
        gj[aix] = g[aix](std::span<const JetScalar>(q));
        gv[aix] = gj[aix].val;
        jac[aix] = jet_gradient(g[aix], q);
      }
      Eigen::MatrixXd jv(m, n);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < n; ++c) jv(r, c) = jac[r][c].val;
      if (condition_of(jv * jv.transpose()) >= 1e8)
        throw std::invalid_argument(
            "generate_constrained: constraint gradients rank-deficient near "
            "q=" + fmt(values_of(q)));
      // Gauss-Newton step q -= Dg^T (Dg Dg^T)^{-1} g over jets.
      std::vector<JetVector> gram(m, JetVector(m, JetScalar(0.0)));
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
          for (int i = 0; i < n; ++i) gram[r][c] += jac[r][i] * jac[c][i];
      JetVector lam = jet_solve(gram, gj);
      for (int i = 0; i < n; ++i)
        for (int r = 0; r < m; ++r) q[i] -= jac[r][i] * lam[r];
      if (gv.cwiseAbs().maxCoeff() < 1e-14) break;
    }
    return q;
  };

  SmoothMap sampler{
      n + m, n + k, [a, ufn, g, project, n, m](std::span<const JetScalar> par) {
        JetVector q = project(JetVector(par.begin(), par.begin() + n));
        JetVector p = jet_gradient(ufn, q);
        for (int aix = 0; aix < m; ++aix) {
          JetVector ga = jet_gradient(g[aix], q);
          for (int i = 0; i < n; ++i) p[i] += par[n + aix] * ga[i];
        }
        JetVector qp = q;
        qp.insert(qp.end(), p.begin(), p.end());
        return a.inverse(qp);
      }};

  auto constraint_gradients = [g, n, m](const Eigen::VectorXd& q) {
    Eigen::MatrixXd grads(n, m);
    for (int aix = 0; aix < m; ++aix) grads.col(aix) = gradient(g[aix], q);
    return grads;
  };

  auto membership = [a, ufn, g, constraint_gradients, n,
                     m](const Eigen::VectorXd& x) {
    const Eigen::VectorXd q = x.head(n);
    double residual = 0.0;
    for (int aix = 0; aix < m; ++aix) residual += std::abs(g[aix](q));
    const Eigen::MatrixXd grads = constraint_gradients(q);
    const Subspace tangent_c = polar(make_subspace(n, grads));
    const Eigen::VectorXd p = a.forward(x).tail(n);
    const Eigen::VectorXd excess = p - gradient(ufn, q);
    residual += (tangent_c.basis.transpose() * excess).norm();
    return residual;
  };

  auto tangent_basis = [sampler, a, ufn, constraint_gradients, n,
                        m](const Eigen::VectorXd& x) {
    const Eigen::VectorXd q = x.head(n);
    const Eigen::MatrixXd grads = constraint_gradients(q);
    const Eigen::VectorXd p = a.forward(x).tail(n);
    const Eigen::VectorXd excess = p - gradient(ufn, q);
    const Eigen::VectorXd lam =
        (grads.transpose() * grads)
            .ldlt()
            .solve(grads.transpose() * excess);
    return column_space(sampler.dim_out,
                        jacobian(sampler, concat(q, lam)));
  };

  return {l, n + m, sampler, membership, tangent_basis};
}

GeneratedSet generate_two_point(const ScalarModel& w) {
  if (w.value.dim % 2 != 0)
    throw std::invalid_argument(
        "generate_two_point: even arity (q1, q0) required");
  const int n = w.value.dim / 2;
  LiouvilleStructure structure =
      functor_difference(canonical_structure(n), canonical_structure(n));
  structure.label = "two_point." + w.name;
  const SmoothFn wfn = w.value;

  SmoothMap sampler{2 * n, 4 * n, [wfn, n](std::span<const JetScalar> q10) {
                      JetVector grad = jet_gradient(wfn, q10);
                      JetVector out(q10.begin(), q10.end());
                      out.resize(4 * n);
                      for (int i = 0; i < n; ++i) out[2 * n + i] = grad[i];
                      for (int i = 0; i < n; ++i)
                        out[3 * n + i] = -grad[n + i];
                      return out;
                    }};

  auto membership = [wfn, n](const Eigen::VectorXd& x) {
    const Eigen::VectorXd grad = gradient(wfn, x.head(2 * n));
    return (x.segment(2 * n, n) - grad.head(n)).norm() +
           (x.tail(n) + grad.tail(n)).norm();
  };

  auto tangent_basis = [sampler, n](const Eigen::VectorXd& x) {
    return make_subspace(4 * n, jacobian(sampler, x.head(2 * n)));
  };

  return {structure, 2 * n, sampler, membership, tangent_basis};
}

GeneratedSet lagrangian_dynamics(const ScalarModel& l_fn) {
  if (l_fn.value.dim % 2 != 0)
    throw std::invalid_argument(
        "lagrangian_dynamics: even arity (q, v) required");
  const int n = l_fn.value.dim / 2;
  LiouvilleStructure structure = functor_tangent(canonical_structure(n));
  structure.label = "dynamics." + l_fn.name;
  const SmoothFn lfn = l_fn.value;

  // Coordinates (q, qdot, p, pdot); p = dL/dv, pdot = dL/dq at (q, qdot).
  SmoothMap sampler{2 * n, 4 * n, [lfn, n](std::span<const JetScalar> qv) {
                      JetVector grad = jet_gradient(lfn, qv);
                      JetVector out(qv.begin(), qv.end());
                      out.resize(4 * n);
                      for (int i = 0; i < n; ++i) out[2 * n + i] = grad[n + i];
                      for (int i = 0; i < n; ++i) out[3 * n + i] = grad[i];
                      return out;
                    }};

  auto membership = [lfn, n](const Eigen::VectorXd& x) {
    const Eigen::VectorXd grad = gradient(lfn, x.head(2 * n));
    return (x.segment(2 * n, n) - grad.tail(n)).norm() +
           (x.tail(n) - grad.head(n)).norm();
  };

  auto tangent_basis = [sampler, n](const Eigen::VectorXd& x) {
    return make_subspace(4 * n, jacobian(sampler, x.head(2 * n)));
  };

  return {structure, 2 * n, sampler, membership, tangent_basis};
}

std::function<Eigen::VectorXd(const Eigen::VectorXd&)> explicit_ode(
    const ScalarModel& l_fn) {
  if (l_fn.value.dim % 2 != 0)
    throw std::invalid_argument("explicit_ode: even arity (q, v) required");
  const int n = l_fn.value.dim / 2;
  const SmoothFn lfn = l_fn.value;
  return [lfn, n](const Eigen::VectorXd& state) {
    const Eigen::VectorXd v = state.tail(n);
    const Eigen::MatrixXd h = hessian(lfn, state);
    const Eigen::MatrixXd vel_hessian = h.block(n, n, n, n);
    if (condition_of(vel_hessian) >= 1e8)
      throw std::domain_error(
          "explicit_ode: velocity Hessian singular at state " + fmt(state));
    const Eigen::VectorXd force = gradient(lfn, state).head(n);
    const Eigen::VectorXd mixed = h.block(n, 0, n, n) * v;
    const Eigen::VectorXd vdot = vel_hessian.fullPivLu().solve(force - mixed);
    Eigen::VectorXd out(2 * n);
    out << v, vdot;
    return out;
  };
}

HamiltonianDynamics hamiltonian_dynamics(const ScalarModel& h,
                                         const Form& omega) {
  const int m = h.value.dim;
  if (omega.ambient_dim != m || omega.degree != 2)
    throw std::invalid_argument(
        "hamiltonian_dynamics: degree-2 form on the state space required");
  const SmoothFn hfn = h.value;
  const Form omega_copy = omega;

  auto field = [hfn, omega_copy, m](const Eigen::VectorXd& x) {
    const Eigen::MatrixXd big_omega = form_matrix(omega_copy, x);
    if (condition_of(big_omega) >= 1e8)
      throw std::domain_error(
          "hamiltonian_dynamics: form degenerate at " + fmt(x));
    return Eigen::VectorXd(
        big_omega.transpose().fullPivLu().solve(-gradient(hfn, x)));
  };

  auto membership = [field, m](const Eigen::VectorXd& point) {
    if (point.size() != 2 * m)
      throw std::invalid_argument(
          "hamiltonian dynamics membership: state-velocity pair required");
    return (point.tail(m) - field(point.head(m))).norm();
  };

  return {field, membership};
}

SmoothMap legendre_map(const ScalarModel& l_fn) {
  if (l_fn.value.dim % 2 != 0)
    throw std::invalid_argument("legendre_map: even arity (q, v) required");
  const int n = l_fn.value.dim / 2;
  const SmoothFn lfn = l_fn.value;
  return {2 * n, 2 * n, [lfn, n](std::span<const JetScalar> qv) {
            JetVector out(qv.begin(), qv.begin() + n);
            for (int i = 0; i < n; ++i)
              out.push_back(jet_directional(lfn.fn, qv, n + i));
            return out;
          }};
}

double consistency_check(const ScalarModel& l_fn, const ScalarModel& h,
                         int samples, unsigned seed) {
  const int n = l_fn.value.dim / 2;
  if (h.value.dim != 2 * n)
    throw std::invalid_argument("consistency_check: arity mismatch");
  const auto el_field = explicit_ode(l_fn);
  const SmoothMap legendre = legendre_map(l_fn);
  const HamiltonianDynamics ham =
      hamiltonian_dynamics(h, canonical_symplectic(n));
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd state = random_vector(rng, 2 * n);
    TangentPoint pushed =
        tangent_lift(legendre, {state, el_field(state)});
    worst = std::max(worst, (pushed.v - ham.field(pushed.q)).norm());
  }
  return worst;
}

std::function<double(const Eigen::VectorXd&)> proper_function(
    const LiouvilleStructure& l, const SmoothMap& sigma,
    const Eigen::VectorXd& base_point, double tol) {
  const int n = l.base_dim;
  if (sigma.dim_in != n || sigma.dim_out != l.total_dim())
    throw std::invalid_argument("proper_function: section dimensions wrong");
  const Form pulled = pullback(sigma, l.theta);

  auto segment_integral = [pulled](const Eigen::VectorXd& a,
                                   const Eigen::VectorXd& b) {
    const Eigen::VectorXd step = b - a;
    double acc = 0.0;
    for (int i = 0; i < 16; ++i) {
      const double t = 0.5 * (kGaussNode[i] + 1.0);
      acc += 0.5 * kGaussWeight[i] * eval(pulled, a + t * step, {step});
    }
    return acc;
  };

  std::mt19937_64 rng(271828182u);
  for (int trial = 0; trial < 3; ++trial) {
    const Eigen::VectorXd q = random_vector(rng, n);
    const Eigen::VectorXd mid = random_vector(rng, n);
    const double direct = segment_integral(base_point, q);
    const double detour =
        segment_integral(base_point, mid) + segment_integral(mid, q);
    if (std::abs(direct - detour) > tol)
      throw std::invalid_argument(
          "proper_function: line integral is path-dependent (difference " +
          std::to_string(direct - detour) + " via " + fmt(mid) +
          "); the pulled-back form is not closed");
  }

  Eigen::VectorXd origin = base_point;
  return [segment_integral, origin](const Eigen::VectorXd& q) {
    return segment_integral(origin, q);
  };
}

VerifyReport diagonal_check(const LiouvilleStructure& l, int samples,
                            double tol, unsigned seed) {
  const int m = l.total_dim();
  const int n = l.base_dim;
  const int k = l.fibre_dim;
  const Form contraction = interior_tangent(l.theta);  // function on TP
  const Form lhs =
      form_add(interior_tangent(exterior_derivative(l.theta)),
               form_scale(-1.0, tangent_derivative(l.theta)));
  const Form rhs = form_scale(-1.0, exterior_derivative(contraction));
  const StructurePairing pairing = pairing_from_theta(l);
  std::mt19937_64 rng(seed);
  VerifyReport report{l.label + ".diagonal", {}};

  Check identity{"difference_identity", true, "", tol};
  Check primitive{"primitive_pairing", true, "", tol};
  Check vertical{"vertical_vanishes", true, "", tol};
  Check fibre_slot{"fibre_slot_ignored", true, "", tol};
  for (int s = 0; s < samples; ++s) {
    // Point of TP in coordinates (q, f, qdot, fdot).
    const Eigen::VectorXd q = random_vector(rng, n);
    const Eigen::VectorXd f = random_vector(rng, k);
    const Eigen::VectorXd qdot = random_vector(rng, n);
    const Eigen::VectorXd fdot = random_vector(rng, k);
    Eigen::VectorXd x(2 * m);
    x << q, f, qdot, fdot;
    const Eigen::VectorXd dir = random_vector(rng, 2 * m);

    const double gap = eval(lhs, x, {dir}) - eval(rhs, x, {dir});
    if (std::abs(gap) > tol && identity.pass)
      identity = {"difference_identity", false,
                  "point=" + fmt(x) + " direction=" + fmt(dir) +
                      " gap=" + std::to_string(gap),
                  tol};

    const double contracted = eval(contraction, x, {});
    const double paired = pairing.eval({q, f}, {q, qdot});
    if (std::abs(contracted - paired) > tol && primitive.pass)
      primitive = {"primitive_pairing", false,
                   "point=" + fmt(x) + " gap=" +
                       std::to_string(contracted - paired),
                   tol};

    Eigen::VectorXd flat = x;
    flat.segment(m, n).setZero();
    const double on_vertical = eval(contraction, flat, {});
    if (std::abs(on_vertical) > tol && vertical.pass)
      vertical = {"vertical_vanishes", false,
                  "point=" + fmt(flat) + " value=" +
                      std::to_string(on_vertical),
                  tol};

    Eigen::VectorXd nudged = x;
    nudged.tail(k) += random_vector(rng, k);
    const double moved = eval(contraction, nudged, {});
    if (std::abs(moved - contracted) > tol && fibre_slot.pass)
      fibre_slot = {"fibre_slot_ignored", false,
                    "point=" + fmt(x) + " gap=" +
                        std::to_string(moved - contracted),
                    tol};
  }
  report.checks = {identity, primitive, vertical, fibre_slot};
  return report;
}

}  // namespace liouville
