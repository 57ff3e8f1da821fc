#pragma once

// Coordinate model of the iterated tangent and cotangent bundles of a
// manifold presented in a single global chart.  All bundles are trivialized
// products; points are plain coordinate records.
//
// Slot convention for second-tangent points, fixed here and used everywhere:
// the four slots are (value, dt, ds, ds dt), so the bundle projection reads
// slots 1-2 and the tangent of the projection reads slots 1,3.

#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "liouville/jet.hpp"

namespace liouville {

struct Chart {
  int dim_base = 0;   // n
  int dim_fibre = 0;  // k, 0 for a bare manifold
};

struct TangentPoint {
  Eigen::VectorXd q;
  Eigen::VectorXd v;
};

struct CotangentPoint {
  Eigen::VectorXd q;
  Eigen::VectorXd p;
};

// Point of TTQ.  q = value, v = dt slot, dq = ds slot, dv = mixed slot.
struct TTPoint {
  Eigen::VectorXd q;
  Eigen::VectorXd v;
  Eigen::VectorXd dq;
  Eigen::VectorXd dv;
};

// Point of TT*Q: projects to (q, p) under the bundle projection and to
// (q, qdot) under the tangent of the cotangent projection.
struct TTStarPoint {
  Eigen::VectorXd q;
  Eigen::VectorXd p;
  Eigen::VectorXd qdot;
  Eigen::VectorXd pdot;
};

// Covector a.dq + b.dv at the point (q, v) of TQ.
struct CotangentOfTangentPoint {
  Eigen::VectorXd q;
  Eigen::VectorXd v;
  Eigen::VectorXd a;
  Eigen::VectorXd b;
};

// Point of a general vector fibration P = Q x R^k in chart.
struct FibredPoint {
  Eigen::VectorXd q;
  Eigen::VectorXd f;
};

// Tangent vector to the total space P at the point (q, f).
struct FibredTangent {
  FibredPoint at;
  Eigen::VectorXd dq;
  Eigen::VectorXd df;
};

inline FibredPoint zero_section(const Eigen::VectorXd& q, int fibre_dim) {
  return {q, Eigen::VectorXd::Zero(fibre_dim)};
}

// Swaps the two differentiation parameters; exchanges the two projections
// of the second tangent bundle.
inline TTPoint kappa_flip(const TTPoint& w) { return {w.q, w.dq, w.v, w.dv}; }

// Tangent vector of the straight fibre curve s -> p0 + s p.
inline FibredTangent vertical_lift(const FibredPoint& p0,
                                   const Eigen::VectorXd& p) {
  if (p.size() != p0.f.size())
    throw std::invalid_argument("vertical_lift: fibre dimension mismatch");
  return {p0, Eigen::VectorXd::Zero(p0.q.size()), p};
}

inline bool is_vertical(const FibredTangent& w, double tol = 1e-12) {
  return w.dq.size() == 0 || w.dq.cwiseAbs().maxCoeff() <= tol;
}

// Extracts the core element of a doubly-vertical vector: base velocity must
// vanish and the foot point must lie on the zero section.
inline Eigen::VectorXd core_extract(const FibredTangent& w,
                                    double tol = 1e-12) {
  if (!is_vertical(w, tol))
    throw std::invalid_argument(
        "core_extract: vector is not vertical (nonzero base velocity)");
  if (w.at.f.size() != 0 && w.at.f.cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument(
        "core_extract: foot point is off the zero section");
  return w.df;
}

// Fibrewise sum for the second vector structure: fibre point and fibre
// velocity add, base point and base velocity must agree.
inline FibredTangent second_add(const FibredTangent& w1,
                                const FibredTangent& w2, double tol = 1e-9) {
  if ((w1.at.q - w2.at.q).cwiseAbs().maxCoeff() > tol ||
      (w1.dq - w2.dq).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument(
        "second_add: summands project to different tangent vectors");
  return {{w1.at.q, w1.at.f + w2.at.f}, w1.dq, w1.df + w2.df};
}

inline FibredTangent second_scale(double k, const FibredTangent& w) {
  return {{w.at.q, k * w.at.f}, w.dq, k * w.df};
}

// Pushes a first-order tangent vector through a smooth map.
inline TangentPoint tangent_lift(const SmoothMap& phi, const TangentPoint& w) {
  JetVector seed(w.q.size());
  for (Eigen::Index i = 0; i < w.q.size(); ++i)
    seed[i] = {w.q[i], w.v[i], 0.0, 0.0};
  JetVector out = phi(seed);
  TangentPoint r{Eigen::VectorXd(phi.dim_out), Eigen::VectorXd(phi.dim_out)};
  for (int i = 0; i < phi.dim_out; ++i) {
    r.q[i] = out[i].val;
    r.v[i] = out[i].ds;
  }
  return r;
}

// Pushes all four jet slots through a smooth map.
inline TTPoint second_tangent_lift(const SmoothMap& phi, const TTPoint& w) {
  JetVector seed(w.q.size());
  for (Eigen::Index i = 0; i < w.q.size(); ++i)
    seed[i] = {w.q[i], w.dq[i], w.v[i], w.dv[i]};
  JetVector out = phi(seed);
  const int m = phi.dim_out;
  TTPoint r{Eigen::VectorXd(m), Eigen::VectorXd(m), Eigen::VectorXd(m),
            Eigen::VectorXd(m)};
  for (int i = 0; i < m; ++i) {
    r.q[i] = out[i].val;
    r.dq[i] = out[i].ds;
    r.v[i] = out[i].dt;
    r.dv[i] = out[i].dst;
  }
  return r;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, int n,
                                     double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x[i] = u(rng);
  return x;
}

}  // namespace liouville
