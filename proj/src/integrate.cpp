#include "liouville/integrate.hpp"

#include <cmath>
#include <stdexcept>

namespace liouville {

namespace {

bool finite(const Eigen::VectorXd& x) { return x.allFinite(); }

void record(Trajectory& traj, double t, const Eigen::VectorXd& x,
            const StateObservable& invariant) {
  traj.times.push_back(t);
  traj.states.push_back(x);
  traj.invariant_track.push_back(invariant ? invariant(x) : 0.0);
}

int step_count(double t_end, double h) {
  if (h <= 0.0) throw std::invalid_argument("integrator: step must be > 0");
  if (t_end < 0.0)
    throw std::invalid_argument("integrator: end time must be >= 0");
  return static_cast<int>(std::llround(t_end / h));
}

}  // namespace

Trajectory rk4(const StateField& field, const Eigen::VectorXd& x0,
               double t_end, double h, const StateObservable& invariant) {
  const int steps = step_count(t_end, h);
  Trajectory traj;
  Eigen::VectorXd x = x0;
  record(traj, 0.0, x, invariant);
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXd k1 = field(x);
    const Eigen::VectorXd k2 = field(x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = field(x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = field(x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!finite(x)) {
      traj.truncated = true;
      break;
    }
    record(traj, (s + 1) * h, x, invariant);
  }
  return traj;
}

Trajectory symplectic_euler(const SmoothFn& h_fn, const Eigen::VectorXd& x0,
                            double t_end, double h) {
  if (h_fn.dim % 2 != 0 || x0.size() != h_fn.dim)
    throw std::invalid_argument(
        "symplectic_euler: canonical (q, p) state required");
  const int n = h_fn.dim / 2;
  const int steps = step_count(t_end, h);
  StateObservable energy = [h_fn](const Eigen::VectorXd& x) {
    return h_fn(x);
  };
  Trajectory traj;
  Eigen::VectorXd q = x0.head(n);
  Eigen::VectorXd p = x0.tail(n);
  Eigen::VectorXd x = x0;
  record(traj, 0.0, x, energy);
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXd state(2 * n);
    state << q, p;
    p -= h * gradient(h_fn, state).head(n);
    state.tail(n) = p;
    q += h * gradient(h_fn, state).tail(n);
    x << q, p;
    if (!finite(x)) {
      traj.truncated = true;
      break;
    }
    record(traj, (s + 1) * h, x, energy);
  }
  return traj;
}

Trajectory leapfrog(const SmoothFn& kinetic, const SmoothFn& potential,
                    const Eigen::VectorXd& x0, double t_end, double h) {
  const int n = potential.dim;
  if (kinetic.dim != n || x0.size() != 2 * n)
    throw std::invalid_argument(
        "leapfrog: kinetic and potential arities must match the state");
  const int steps = step_count(t_end, h);
  StateObservable energy = [kinetic, potential, n](const Eigen::VectorXd& x) {
    return kinetic(Eigen::VectorXd(x.tail(n))) +
           potential(Eigen::VectorXd(x.head(n)));
  };
  Trajectory traj;
  Eigen::VectorXd q = x0.head(n);
  Eigen::VectorXd p = x0.tail(n);
  Eigen::VectorXd x = x0;
  record(traj, 0.0, x, energy);
  for (int s = 0; s < steps; ++s) {
    p -= 0.5 * h * gradient(potential, q);
    q += h * gradient(kinetic, p);
    p -= 0.5 * h * gradient(potential, q);
    x << q, p;
    if (!finite(x)) {
      traj.truncated = true;
      break;
    }
    record(traj, (s + 1) * h, x, energy);
  }
  return traj;
}

double residual_along(const Trajectory& traj,
                      const std::function<double(const Eigen::VectorXd&)>&
                          membership) {
  if (traj.states.size() < 3)
    throw std::invalid_argument(
        "residual_along: at least three trajectory nodes required");
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < traj.states.size(); ++i) {
    const double span = traj.times[i + 1] - traj.times[i - 1];
    const Eigen::VectorXd xdot =
        (traj.states[i + 1] - traj.states[i - 1]) / span;
    Eigen::VectorXd point(2 * traj.states[i].size());
    point << traj.states[i], xdot;
    worst = std::max(worst, membership(point));
  }
  return worst;
}

double invariant_drift_slope(const Trajectory& traj) {
  const std::size_t n = traj.times.size();
  if (n < 2)
    throw std::invalid_argument("invariant_drift_slope: too few nodes");
  double st = 0.0, sv = 0.0, stt = 0.0, stv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    st += traj.times[i];
    sv += traj.invariant_track[i];
    stt += traj.times[i] * traj.times[i];
    stv += traj.times[i] * traj.invariant_track[i];
  }
  const double count = static_cast<double>(n);
  return (count * stv - st * sv) / (count * stt - st * st);
}

void write_trajectory(std::ostream& os, const Trajectory& traj) {
  if (traj.states.empty()) return;
  os << "time";
  for (Eigen::Index i = 0; i < traj.states[0].size(); ++i)
    os << "\tx" << i;
  os << "\tinvariant\n";
  for (std::size_t row = 0; row < traj.states.size(); ++row) {
    os << traj.times[row];
    for (Eigen::Index i = 0; i < traj.states[row].size(); ++i)
      os << "\t" << traj.states[row][i];
    os << "\t" << traj.invariant_track[row] << "\n";
  }
}

}  // namespace liouville
