#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "liouville/integrate.hpp"
#include "liouville/mechanics.hpp"
#include "liouville/model.hpp"
#include "liouville/symplin.hpp"

namespace liouville {

namespace {

SmoothFn bind_or_reject(const ExprPtr& e,
                        const std::vector<std::string>& vars,
                        const std::string& key) {
  try {
    return bind_expression(e, vars);
  } catch (const std::invalid_argument& err) {
    throw ModelError("key \"" + key + "\": " + err.what());
  }
}

std::vector<std::string> phase_vars(int n) {
  std::vector<std::string> vars = config_vars(n);
  const std::vector<std::string> p = momentum_vars(n);
  vars.insert(vars.end(), p.begin(), p.end());
  return vars;
}

std::vector<std::string> velocity_phase_vars(int n) {
  std::vector<std::string> vars = config_vars(n);
  const std::vector<std::string> v = velocity_vars(n);
  vars.insert(vars.end(), v.begin(), v.end());
  return vars;
}

// Builds the generated set a model describes; hamiltonian models have a
// vector field instead and are rejected here.
GeneratedSet set_from_model(const ModelFile& model,
                            const LiouvilleStructure& structure) {
  const int n = model.base_dim;
  if (model.role == "generating") {
    SmoothFn u = bind_or_reject(model.expressions.at("U"), config_vars(n),
                                "U");
    return generate_from_function(structure, {"U", config_vars(n), u});
  }
  if (model.role == "constrained") {
    SmoothFn u = bind_or_reject(model.expressions.at("U"), config_vars(n),
                                "U");
    std::vector<SmoothFn> g;
    for (std::size_t i = 0; i < model.constraints.size(); ++i)
      g.push_back(bind_or_reject(model.constraints[i], config_vars(n),
                                 "g[" + std::to_string(i) + "]"));
    return generate_constrained(structure, {"U", config_vars(n), u}, g);
  }
  if (model.role == "two_point" || model.role == "relation") {
    const std::string key = model.role == "relation" ? "F" : "W";
    SmoothFn w = bind_or_reject(model.expressions.at(key), two_point_vars(n),
                                key);
    return generate_two_point({key, two_point_vars(n), w});
  }
  if (model.role == "lagrangian") {
    SmoothFn lf = bind_or_reject(model.expressions.at("L"),
                                 velocity_phase_vars(n), "L");
    return lagrangian_dynamics({"L", velocity_phase_vars(n), lf});
  }
  throw ModelError("role \"" + model.role +
                   "\" does not describe a generated set");
}

VerifyReport sample_set_report(const GeneratedSet& set, int samples,
                               double tol, std::mt19937_64& rng) {
  const Form omega = exterior_derivative(set.structure.theta);
  Check residual{"sampler_residual", true, "", tol};
  Check lagrangian{"lagrangian_tangent", true, "", 1e-9};
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd params = random_vector(rng, set.param_dim, 1.0);
    const Eigen::VectorXd x = set.sampler(params);
    const double r = set.membership(x);
    if (r > tol && residual.pass) {
      std::ostringstream os;
      os << "residual " << r << " at params [" << params.transpose() << "]";
      residual = {"sampler_residual", false, os.str(), tol};
    }
    const SymplecticSpace space = make_symplectic(form_matrix(omega, x));
    if (!is_lagrangian(set.tangent_basis(x), space) && lagrangian.pass) {
      std::ostringstream os;
      os << "tangent space not Lagrangian at params [" << params.transpose()
         << "]";
      lagrangian = {"lagrangian_tangent", false, os.str(), 1e-9};
    }
  }
  return {set.structure.label + ".generated_set", {residual, lagrangian}};
}

VerifyReport hamiltonian_report(const ModelFile& model, int samples,
                                std::mt19937_64& rng) {
  const int n = model.base_dim;
  SmoothFn h = bind_or_reject(model.expressions.at("H"), phase_vars(n), "H");
  const HamiltonianDynamics ham =
      hamiltonian_dynamics({"H", phase_vars(n), h}, canonical_symplectic(n));
  Check conserve{"energy_conservation", true, "", 1e-9};
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x = random_vector(rng, 2 * n);
    const double rate = gradient(h, x).dot(ham.field(x));
    if (std::abs(rate) > 1e-9 && conserve.pass) {
      std::ostringstream os;
      os << "dH along the field is " << rate << " at [" << x.transpose()
         << "]";
      conserve = {"energy_conservation", false, os.str(), 1e-9};
    }
  }
  return {model.name + ".dynamics", {conserve}};
}

int check_model(const std::string& path) {
  const ModelFile model = load_model(path);
  const LiouvilleStructure structure = structure_from_model(model);
  std::mt19937_64 rng(model.base_dim + 7u);
  std::vector<VerifyReport> reports;
  reports.push_back(verify(structure, 40, 1e-9));

  try {
    if (model.role == "hamiltonian") {
      reports.push_back(hamiltonian_report(model, 10, rng));
    } else {
      const GeneratedSet set = set_from_model(model, structure);
      reports.push_back(sample_set_report(set, 10, 1e-8, rng));
      if (model.role == "constrained") {
        const Eigen::VectorXd params =
            random_vector(rng, set.param_dim, 1.0);
        const Eigen::VectorXd x = set.sampler(params);
        const int dim = set.tangent_basis(x).dim();
        reports.push_back(
            {model.name + ".constrained",
             {{"set_dimension", dim == model.base_dim,
               dim == model.base_dim
                   ? ""
                   : "tangent dimension " + std::to_string(dim) +
                         ", expected " + std::to_string(model.base_dim),
               0.0}}});
      }
    }
  } catch (const ModelError&) {
    throw;
  } catch (const std::exception& e) {
    reports.push_back({model.name + ".construction",
                       {{"construction", false, e.what(), 0.0}}});
  }

  bool all = true;
  for (const VerifyReport& report : reports) {
    std::cout << report_to_json(report) << "\n";
    all = all && report.all_pass();
  }
  std::cout << (all ? "PASS" : "FAIL") << " " << model.name << "\n";
  return all ? 0 : 1;
}

int generate_model(const std::string& path, int samples) {
  const ModelFile model = load_model(path);
  if (model.role == "hamiltonian")
    throw ModelError(
        "generate needs a model with a generated set; use dynamics for "
        "hamiltonian models");
  const LiouvilleStructure structure = structure_from_model(model);
  const GeneratedSet set = set_from_model(model, structure);
  std::mt19937_64 rng(20260823u);
  double worst = 0.0;
  std::cout << "params\tpoint\tresidual\n";
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd params = random_vector(rng, set.param_dim, 1.0);
    const Eigen::VectorXd x = set.sampler(params);
    const double r = set.membership(x);
    worst = std::max(worst, r);
    std::cout << params.transpose() << "\t" << x.transpose() << "\t" << r
              << "\n";
  }
  std::cout << "max_residual\t" << worst << "\n";
  return worst <= 1e-6 ? 0 : 1;
}

int dynamics_model(const std::string& path, std::string method,
                   std::string out_path) {
  const ModelFile model = load_model(path);
  const int n = model.base_dim;
  if (method.empty()) method = model.integrator.method;
  if (!model.has_integrator || model.integrator.x0.size() == 0)
    throw ModelError("dynamics requires integrator settings with \"x0\"");
  if (model.integrator.x0.size() != 2 * n)
    throw ModelError("integrator \"x0\" must have length " +
                     std::to_string(2 * n));
  if (out_path.empty()) out_path = model.name + ".traj.tsv";
  const double h = model.integrator.h;
  const double t_end = model.integrator.t_end;
  const Eigen::VectorXd x0 = model.integrator.x0;

  Trajectory traj;
  double residual = 0.0;
  if (model.role == "hamiltonian") {
    SmoothFn hfn =
        bind_or_reject(model.expressions.at("H"), phase_vars(n), "H");
    const HamiltonianDynamics ham = hamiltonian_dynamics(
        {"H", phase_vars(n), hfn}, canonical_symplectic(n));
    if (method == "rk4") {
      traj = rk4(ham.field, x0, t_end, h,
                 [hfn](const Eigen::VectorXd& x) { return hfn(x); });
    } else if (method == "symplectic-euler") {
      traj = symplectic_euler(hfn, x0, t_end, h);
    } else if (method == "leapfrog") {
      if (!model.expressions.count("kinetic") ||
          !model.expressions.count("potential"))
        throw ModelError(
            "leapfrog requires \"kinetic\" and \"potential\" expressions");
      SmoothFn t_part = bind_or_reject(model.expressions.at("kinetic"),
                                       momentum_vars(n), "kinetic");
      SmoothFn v_part = bind_or_reject(model.expressions.at("potential"),
                                       config_vars(n), "potential");
      traj = leapfrog(t_part, v_part, x0, t_end, h);
    } else {
      throw ModelError("unknown method \"" + method + "\"");
    }
    residual = residual_along(traj, ham.membership);
  } else if (model.role == "lagrangian") {
    if (method != "rk4")
      throw ModelError(
          "lagrangian models integrate with rk4; symplectic methods need a "
          "hamiltonian model");
    SmoothFn lfn = bind_or_reject(model.expressions.at("L"),
                                  velocity_phase_vars(n), "L");
    const ScalarModel lmodel{"L", velocity_phase_vars(n), lfn};
    const auto field = explicit_ode(lmodel);
    auto energy = [lfn, n](const Eigen::VectorXd& x) {
      return gradient(lfn, x).tail(n).dot(x.tail(n)) - lfn(x);
    };
    traj = rk4(field, x0, t_end, h, energy);
    const GeneratedSet set = lagrangian_dynamics(lmodel);
    const SmoothMap legendre = legendre_map(lmodel);
    // Central-difference lift into (q, qdot, p, pdot) coordinates.
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < traj.states.size(); ++i) {
      const double span = traj.times[i + 1] - traj.times[i - 1];
      const Eigen::VectorXd qdot =
          (traj.states[i + 1].head(n) - traj.states[i - 1].head(n)) / span;
      const Eigen::VectorXd pdot = (legendre(traj.states[i + 1]).tail(n) -
                                    legendre(traj.states[i - 1]).tail(n)) /
                                   span;
      Eigen::VectorXd point(4 * n);
      point << traj.states[i].head(n), qdot,
          Eigen::VectorXd(legendre(traj.states[i]).tail(n)), pdot;
      worst = std::max(worst, set.membership(point));
    }
    residual = worst;
  } else {
    throw ModelError(
        "dynamics requires a lagrangian or hamiltonian model, not role \"" +
        model.role + "\"");
  }

  std::ofstream out(out_path);
  if (!out) throw ModelError("cannot write trajectory file " + out_path);
  write_trajectory(out, traj);

  const double h0 = traj.invariant_track.front();
  double drift = 0.0;
  for (double v : traj.invariant_track)
    drift = std::max(drift, std::abs(v - h0));
  const double slope = invariant_drift_slope(traj);
  std::cout << "model\t" << model.name << "\nmethod\t" << method
            << "\nsteps\t" << traj.times.size() - 1 << "\nfinal\t"
            << traj.states.back().transpose() << "\nenergy_drift\t" << drift
            << "\ndrift_slope\t" << slope << "\nresidual\t" << residual
            << "\ntrajectory\t" << out_path << "\n";

  const double scale = std::max(1.0, std::abs(h0));
  const bool ok = !traj.truncated &&
                  residual <= model.dynamics_residual_limit &&
                  drift <= model.drift_fraction_limit * scale;
  std::cout << (ok ? "PASS" : "FAIL") << " " << model.name << "\n";
  return ok ? 0 : 1;
}

// Rows of a two-point tangent basis arrive as (q1, q0, p1, p0); relation
// composition wants ((q1, p1), (q0, p0)).
Subspace as_relation(const Subspace& graph, int n) {
  Eigen::MatrixXd basis(graph.ambient, graph.dim());
  basis.middleRows(0, n) = graph.basis.middleRows(0, n);
  basis.middleRows(n, n) = graph.basis.middleRows(2 * n, n);
  basis.middleRows(2 * n, n) = graph.basis.middleRows(n, n);
  basis.middleRows(3 * n, n) = graph.basis.middleRows(3 * n, n);
  return {graph.ambient, basis};
}

int relation_models(const std::string& path2, const std::string& path1) {
  const ModelFile outer = load_model(path2);
  const ModelFile inner = load_model(path1);
  for (const ModelFile* m : {&outer, &inner})
    if (m->role != "relation" && m->role != "two_point")
      throw ModelError("relation composition needs two_point or relation "
                       "models, not role \"" + m->role + "\"");
  if (outer.base_dim != inner.base_dim)
    throw ModelError("relation composition needs matching base dimensions");
  const int n = outer.base_dim;
  const GeneratedSet g2 = set_from_model(outer, structure_from_model(outer));
  const GeneratedSet g1 = set_from_model(inner, structure_from_model(inner));

  std::mt19937_64 rng(20260823u);
  const Eigen::VectorXd q_start = random_vector(rng, n, 1.0);
  const Eigen::VectorXd q_mid = random_vector(rng, n, 1.0);
  const Eigen::VectorXd q_final = random_vector(rng, n, 1.0);
  Eigen::VectorXd par1(2 * n), par2(2 * n);
  par1 << q_mid, q_start;
  par2 << q_final, q_mid;

  const Subspace graph1 =
      as_relation(g1.tangent_basis(g1.sampler(par1)), n);
  const Subspace graph2 =
      as_relation(g2.tangent_basis(g2.sampler(par2)), n);
  const Subspace composed =
      compose_linear_relations(graph2, 2 * n, 2 * n, graph1, 2 * n);
  const SymplecticSpace product =
      product_form(SymplecticSpace::standard(n), SymplecticSpace::standard(n));
  const bool lagrangian = is_lagrangian(composed, product);

  std::cout << "outer\t" << outer.name << "\ninner\t" << inner.name
            << "\ncomposed_dim\t" << composed.dim() << "\nlagrangian\t"
            << (lagrangian ? "yes" : "no") << "\n";
  const bool ok = lagrangian && composed.dim() == 2 * n;
  std::cout << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Liouville structure toolkit"};
  app.require_subcommand(1);

  std::string model_path, second_path, out_path, method;
  int samples = 20;

  CLI::App* check =
      app.add_subcommand("check", "verify a model's structure and sets");
  check->add_option("model", model_path, "model file")->required();

  CLI::App* generate =
      app.add_subcommand("generate", "sample a model's generated set");
  generate->add_option("model", model_path, "model file")->required();
  generate->add_option("--samples", samples, "number of samples");

  CLI::App* dynamics =
      app.add_subcommand("dynamics", "integrate a model's dynamics");
  dynamics->add_option("model", model_path, "model file")->required();
  dynamics->add_option("--method", method,
                       "rk4 | symplectic-euler | leapfrog");
  dynamics->add_option("--out", out_path, "trajectory output file");

  CLI::App* relation = app.add_subcommand(
      "relation", "compose two relation models and test the result");
  relation->add_option("outer", model_path, "outer relation model")
      ->required();
  relation->add_option("inner", second_path, "inner relation model")
      ->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return check_model(model_path);
    if (generate->parsed()) return generate_model(model_path, samples);
    if (dynamics->parsed())
      return dynamics_model(model_path, method, out_path);
    return relation_models(model_path, second_path);
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace liouville
