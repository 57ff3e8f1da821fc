#pragma once

// Forward-mode jet arithmetic over the truncated algebra R[es,et]/(es^2, et^2).
// A JetScalar carries a value, the two first partials along the parameters s
// and t, and the mixed second partial.  This is exactly enough structure to
// represent elements of a second tangent bundle in coordinates and to push
// them through smooth maps.

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace liouville {

struct JetScalar {
  double val = 0.0;
  double ds = 0.0;   // partial in the first parameter
  double dt = 0.0;   // partial in the second parameter
  double dst = 0.0;  // mixed second partial

  constexpr JetScalar() = default;
  constexpr JetScalar(double v) : val(v) {}
  constexpr JetScalar(double v, double s, double t, double st)
      : val(v), ds(s), dt(t), dst(st) {}

  static constexpr JetScalar constant(double v) { return JetScalar(v); }

  JetScalar& operator+=(const JetScalar& o) {
    val += o.val;
    ds += o.ds;
    dt += o.dt;
    dst += o.dst;
    return *this;
  }
  JetScalar& operator-=(const JetScalar& o) {
    val -= o.val;
    ds -= o.ds;
    dt -= o.dt;
    dst -= o.dst;
    return *this;
  }
};

using JetVector = std::vector<JetScalar>;

inline JetScalar operator+(const JetScalar& a, const JetScalar& b) {
  return {a.val + b.val, a.ds + b.ds, a.dt + b.dt, a.dst + b.dst};
}
inline JetScalar operator-(const JetScalar& a, const JetScalar& b) {
  return {a.val - b.val, a.ds - b.ds, a.dt - b.dt, a.dst - b.dst};
}
inline JetScalar operator-(const JetScalar& a) {
  return {-a.val, -a.ds, -a.dt, -a.dst};
}
inline JetScalar operator*(const JetScalar& a, const JetScalar& b) {
  // Leibniz rule; the mixed term collects all ways of distributing one
  // s-derivative and one t-derivative over the two factors.
  return {a.val * b.val,
          a.ds * b.val + a.val * b.ds,
          a.dt * b.val + a.val * b.dt,
          a.dst * b.val + a.ds * b.dt + a.dt * b.ds + a.val * b.dst};
}
inline JetScalar operator*(double k, const JetScalar& a) {
  return {k * a.val, k * a.ds, k * a.dt, k * a.dst};
}
inline JetScalar operator*(const JetScalar& a, double k) { return k * a; }

// Lift a univariate smooth function given its value and first two
// derivatives at the value slot.
inline JetScalar jet_lift(const JetScalar& x, double f, double fp, double fpp) {
  return {f, fp * x.ds, fp * x.dt, fp * x.dst + fpp * x.ds * x.dt};
}

inline JetScalar inverse(const JetScalar& x) {
  if (x.val == 0.0) throw std::domain_error("jet division by zero value");
  const double iv = 1.0 / x.val;
  return jet_lift(x, iv, -iv * iv, 2.0 * iv * iv * iv);
}
inline JetScalar operator/(const JetScalar& a, const JetScalar& b) {
  return a * inverse(b);
}
inline JetScalar operator/(const JetScalar& a, double k) { return a * (1.0 / k); }
inline JetScalar operator/(double k, const JetScalar& b) {
  return k * inverse(b);
}

inline JetScalar sin(const JetScalar& x) {
  return jet_lift(x, std::sin(x.val), std::cos(x.val), -std::sin(x.val));
}
inline JetScalar cos(const JetScalar& x) {
  return jet_lift(x, std::cos(x.val), -std::sin(x.val), -std::cos(x.val));
}
inline JetScalar exp(const JetScalar& x) {
  const double e = std::exp(x.val);
  return jet_lift(x, e, e, e);
}
inline JetScalar log(const JetScalar& x) {
  if (x.val <= 0.0) throw std::domain_error("jet log of nonpositive value");
  return jet_lift(x, std::log(x.val), 1.0 / x.val, -1.0 / (x.val * x.val));
}
inline JetScalar sqrt(const JetScalar& x) {
  if (x.val < 0.0) throw std::domain_error("jet sqrt of negative value");
  if (x.val == 0.0 && (x.ds != 0.0 || x.dt != 0.0 || x.dst != 0.0))
    throw std::domain_error("jet sqrt not differentiable at zero");
  const double r = std::sqrt(x.val);
  const double d = x.val == 0.0 ? 0.0 : 0.5 / r;
  const double dd = x.val == 0.0 ? 0.0 : -0.25 / (r * x.val);
  return jet_lift(x, r, d, dd);
}
inline JetScalar pow(const JetScalar& x, int n) {
  if (n == 0) return JetScalar(1.0);
  if (n < 0) return inverse(pow(x, -n));
  JetScalar acc(1.0);
  JetScalar base = x;
  int e = n;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}
inline JetScalar pow(const JetScalar& x, double r) {
  const double ri = std::round(r);
  if (ri == r && std::abs(r) < 64.0) return pow(x, static_cast<int>(ri));
  if (x.val <= 0.0)
    throw std::domain_error("jet pow with non-integer exponent needs positive base");
  const double f = std::pow(x.val, r);
  return jet_lift(x, f, r * f / x.val, r * (r - 1.0) * f / (x.val * x.val));
}

// A smooth scalar function on R^m, evaluable over jets.
struct SmoothFn {
  int dim = 0;
  std::function<JetScalar(std::span<const JetScalar>)> fn;

  JetScalar operator()(std::span<const JetScalar> x) const {
    if (static_cast<int>(x.size()) != dim)
      throw std::invalid_argument("SmoothFn: argument has dimension " +
                                  std::to_string(x.size()) + ", expected " +
                                  std::to_string(dim));
    return fn(x);
  }
  double operator()(const Eigen::VectorXd& x) const;
};

// A smooth map R^a -> R^b, evaluable over jets.
struct SmoothMap {
  int dim_in = 0;
  int dim_out = 0;
  std::function<JetVector(std::span<const JetScalar>)> fn;

  JetVector operator()(std::span<const JetScalar> x) const {
    if (static_cast<int>(x.size()) != dim_in)
      throw std::invalid_argument("SmoothMap: argument has dimension " +
                                  std::to_string(x.size()) + ", expected " +
                                  std::to_string(dim_in));
    JetVector y = fn(x);
    if (static_cast<int>(y.size()) != dim_out)
      throw std::logic_error("SmoothMap: output dimension mismatch");
    return y;
  }
  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
};

inline JetVector to_jets(const Eigen::VectorXd& x) {
  JetVector j(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) j[i] = JetScalar(x[i]);
  return j;
}

inline Eigen::VectorXd values_of(const JetVector& j) {
  Eigen::VectorXd x(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) x[i] = j[i].val;
  return x;
}

inline double SmoothFn::operator()(const Eigen::VectorXd& x) const {
  return (*this)(std::span<const JetScalar>(to_jets(x))).val;
}
inline Eigen::VectorXd SmoothMap::operator()(const Eigen::VectorXd& x) const {
  return values_of((*this)(std::span<const JetScalar>(to_jets(x))));
}

// Evaluates f on the two-parameter affine probe encoded by the seed and
// returns the four partials at (0,0).
inline JetScalar jet_eval(const SmoothFn& f, std::span<const JetScalar> seed) {
  return f(seed);
}

Eigen::VectorXd gradient(const SmoothFn& f, const Eigen::VectorXd& point);
Eigen::MatrixXd hessian(const SmoothFn& f, const Eigen::VectorXd& point);

// Jacobian of a smooth map, assembled column by column from jet seeds.
Eigen::MatrixXd jacobian(const SmoothMap& phi, const Eigen::VectorXd& point);

// Directional derivative of a jet-evaluable callback along a coordinate
// direction, valid at jet points produced by at most one enclosing
// derivative.  The callback sees the probe in whichever of the two jet
// slots is still free; the result is re-packed so that the remaining
// incoming slot keeps propagating.
JetScalar jet_directional(
    const std::function<JetScalar(std::span<const JetScalar>)>& fn,
    std::span<const JetScalar> point, int direction);

// Solve A x = b over the jet algebra by Gaussian elimination with partial
// pivoting on the value slot.
JetVector jet_solve(std::vector<JetVector> a, JetVector b);

}  // namespace liouville
