#pragma once

// Fixed-step trajectory generation for extracted dynamics: classical
// Runge-Kutta, symplectic Euler and leapfrog for canonical separable
// systems, plus drift and membership diagnostics.

#include <functional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "liouville/jet.hpp"

namespace liouville {

using StateField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using StateObservable = std::function<double(const Eigen::VectorXd&)>;

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<double> invariant_track;
  bool truncated = false;  // a non-finite state ended integration early
};

// Classical fourth-order Runge-Kutta with step h up to t_end; the
// observable (typically the energy) is recorded along the way.
Trajectory rk4(const StateField& field, const Eigen::VectorXd& x0,
               double t_end, double h, const StateObservable& invariant = {});

// First-order symplectic Euler for a canonical Hamiltonian on (q, p):
// momentum kick from the new configuration gradient, then drift.
Trajectory symplectic_euler(const SmoothFn& h_fn, const Eigen::VectorXd& x0,
                            double t_end, double h);

// Kick-drift-kick leapfrog for separable H = T(p) + V(q).
Trajectory leapfrog(const SmoothFn& kinetic, const SmoothFn& potential,
                    const Eigen::VectorXd& x0, double t_end, double h);

// Max implicit-dynamics residual along a trajectory, with state velocities
// estimated by central differences at interior nodes.
double residual_along(const Trajectory& traj,
                      const std::function<double(const Eigen::VectorXd&)>&
                          membership);

// Least-squares slope of the invariant track against time.
double invariant_drift_slope(const Trajectory& traj);

// Delimited text: header row, then time, state components, invariant.
void write_trajectory(std::ostream& os, const Trajectory& traj);

}  // namespace liouville
