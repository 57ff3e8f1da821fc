#pragma once

// Model files: JSON descriptions of a mechanical model (its role, base
// dimension, defining expressions and integrator settings) plus the CLI
// entry point that drives verification, sampling, integration and
// relation composition.

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liouville/expr.hpp"
#include "liouville/liouville.hpp"

namespace liouville {

// Thrown for malformed model files and bad CLI input; mapped to exit 2.
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IntegratorSettings {
  std::string method = "rk4";
  double h = 0.01;
  double t_end = 1.0;
  Eigen::VectorXd x0;
};

struct ModelFile {
  std::string name;
  int base_dim = 0;
  std::string role;  // generating | constrained | two_point | lagrangian
                     // | hamiltonian | relation
  std::map<std::string, ExprPtr> expressions;
  std::vector<ExprPtr> constraints;     // role "constrained"
  std::vector<ExprPtr> theta_override;  // 2n coefficients, optional
  IntegratorSettings integrator;
  bool has_integrator = false;
  double tolerance = 1e-9;
  double dynamics_residual_limit = 1e-3;
  double drift_fraction_limit = 0.05;
};

ModelFile load_model(const std::string& path);

std::vector<std::string> config_vars(int n);    // q1..qn
std::vector<std::string> velocity_vars(int n);  // v1..vn
std::vector<std::string> momentum_vars(int n);  // p1..pn
// Final point q1..qn, then initial point q0_1..q0_n.
std::vector<std::string> two_point_vars(int n);

// Canonical structure of the model's dimension, or the structure built
// from the model's theta coefficient list in coordinates (q, p).
LiouvilleStructure structure_from_model(const ModelFile& model);

// Subcommands: check, generate, dynamics, relation.
// Returns 0 when every check passes, 1 on a verification failure, 2 on
// input errors (bad files, schema violations, unknown flags).
int run_cli(const std::vector<std::string>& args);

}  // namespace liouville
