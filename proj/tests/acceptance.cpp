// End-to-end acceptance checks for the whole toolkit.  Each numbered check
// prints a single pass/fail line; the exit status is the failure count.

#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "liouville/integrate.hpp"
#include "liouville/mechanics.hpp"
#include "liouville/model.hpp"

using namespace liouville;

namespace {

int failures = 0;

void report(int number, const std::string& title, bool pass,
            const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " " << number << " " << title;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
  if (!pass) ++failures;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

// A 1-form on R^2 with polynomial coefficients, used as the generic test
// subject for derivation identities.
Form poly_one_form() {
  return {2, 1, [](std::span<const JetScalar> x, std::span<const int> i) {
            return i[0] == 0 ? x[0] * x[1] : x[0] + x[1] * x[1];
          }};
}

// theta = (A(q) f) . dq with A(q) = [[2, q1], [0, 2]]: a Liouville
// structure whose alpha is genuinely non-canonical and base-dependent.
LiouvilleStructure sheared_structure() {
  Form theta{4, 1, [](std::span<const JetScalar> x, std::span<const int> i) {
               if (i[0] == 0) return 2.0 * x[2] + x[0] * x[3];
               if (i[0] == 1) return 2.0 * x[3];
               return JetScalar(0.0);
             }};
  return {2, 2, theta, "sheared"};
}

LiouvilleStructure doubled_structure() {
  Form theta{2, 1, [](std::span<const JetScalar> x, std::span<const int> i) {
               return i[0] == 0 ? 2.0 * x[1] : JetScalar(0.0);
             }};
  return {1, 1, theta, "doubled"};
}

void criterion_1() {
  std::mt19937_64 rng(1);
  bool pass = true;
  for (int trial = 0; trial < 1000 && pass; ++trial) {
    const TTPoint w{random_vector(rng, 3), random_vector(rng, 3),
                    random_vector(rng, 3), random_vector(rng, 3)};
    const TTPoint once = kappa_flip(w);
    const TTPoint twice = kappa_flip(once);
    pass = (twice.q - w.q).cwiseAbs().maxCoeff() == 0.0 &&
           (twice.v - w.v).cwiseAbs().maxCoeff() == 0.0 &&
           (twice.dq - w.dq).cwiseAbs().maxCoeff() == 0.0 &&
           (twice.dv - w.dv).cwiseAbs().maxCoeff() == 0.0 &&
           (once.v - w.dq).cwiseAbs().maxCoeff() == 0.0 &&
           (once.dq - w.v).cwiseAbs().maxCoeff() == 0.0;
  }
  report(1, "second-tangent flip is an involution swapping the projections",
         pass, "1000 random points, exact");
}

void criterion_2() {
  std::mt19937_64 rng(2);
  const double h = 1e-6;
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXd q = random_vector(rng, 2);
    const Eigen::VectorXd qdot = random_vector(rng, 2);
    const Eigen::VectorXd p = random_vector(rng, 2);
    const Eigen::VectorXd pdot = random_vector(rng, 2);
    const Eigen::VectorXd v = random_vector(rng, 2);
    const Eigen::VectorXd vdot = random_vector(rng, 2);
    const double direct =
        tangent_pairing({q, p, qdot, pdot}, {q, v, qdot, vdot});
    auto paired = [&](double t) {
      return canonical_pairing({q + t * qdot, p + t * pdot},
                               {q + t * qdot, v + t * vdot}, 1e-3);
    };
    const double fd = (paired(h) - paired(-h)) / (2.0 * h);
    worst = std::max(worst,
                     std::abs(direct - fd) / std::max(1.0, std::abs(fd)));
  }
  report(2, "derivative of the pairing matches curve finite differences",
         worst < 1e-6, "200 curve pairs, rel tol 1e-6");
}

void criterion_3() {
  const LiouvilleStructure l = canonical_structure(2);
  bool pass = theta_eval(l, {{vec2(0, 0), vec2(2, 3)},
                             vec2(5, 7),
                             vec2(0, 0)}) == 31.0;
  pass = pass && verify(l, 100, 1e-9).all_pass();
  // d theta carries coefficient -1 on each (q_i, p_i) differential pair.
  const Form omega = exterior_derivative(l.theta);
  JetVector at = to_jets(Eigen::VectorXd::Zero(4));
  std::vector<int> idx{0, 2};
  pass = pass && std::abs(omega.coeff(at, idx).val + 1.0) < 1e-12;
  idx = {1, 3};
  pass = pass && std::abs(omega.coeff(at, idx).val + 1.0) < 1e-12;
  report(3, "tautological form: chart value, verticality, linearity, "
            "nondegeneracy", pass, "100 points, condition < 1e8");
}

void criterion_4() {
  const Form mu = poly_one_form();
  const Form dtmu = tangent_derivative(mu);
  std::mt19937_64 rng(4);
  const double h = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = random_vector(rng, 2);
    const Eigen::VectorXd xdot = random_vector(rng, 2);
    const Eigen::VectorXd dx = random_vector(rng, 2);
    const Eigen::VectorXd dxdot = random_vector(rng, 2);
    Eigen::VectorXd point(4), w(4);
    point << x, xdot;
    w << dx, dxdot;
    auto along = [&](double t) {
      Eigen::VectorXd base = x + t * xdot;
      std::vector<Eigen::VectorXd> vs{dx + t * dxdot};
      return eval(mu, base, vs);
    };
    const double oracle = (along(h) - along(-h)) / (2.0 * h);
    worst = std::max(worst, std::abs(eval(dtmu, point, {w}) - oracle));
  }
  // d_T of p dq has coefficients (pdot, 0, p, 0) on (q, p, qdot, pdot).
  const Form dtheta = tangent_derivative(liouville_form(1));
  JetVector at = to_jets((Eigen::VectorXd(4) << 0.3, 0.7, 1.1, 1.9).finished());
  std::vector<int> i0{0}, i1{1}, i2{2}, i3{3};
  bool coeffs = std::abs(dtheta.coeff(at, i0).val - 1.9) < 1e-12 &&
                std::abs(dtheta.coeff(at, i1).val) < 1e-12 &&
                std::abs(dtheta.coeff(at, i2).val - 0.7) < 1e-12 &&
                std::abs(dtheta.coeff(at, i3).val) < 1e-12;
  report(4, "tangent derivation matches the curve oracle and the chart "
            "expansion", worst < 1e-9 && coeffs,
         "100 points, abs tol 1e-9");
}

void criterion_5() {
  std::mt19937_64 rng(5);
  double worst = 0.0;

  const LiouvilleStructure tangent = functor_tangent(canonical_structure(1));
  const AlphaMap at = alpha(tangent);
  const Form pulled_t = pullback(at.forward, liouville_form(2));
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = random_vector(rng, 4);
    const Eigen::VectorXd w = random_vector(rng, 4);
    worst = std::max(worst, std::abs(eval(pulled_t, x, {w}) -
                                     eval(tangent.theta, x, {w})));
  }

  // Duality: the derived covector paired with a second-order velocity
  // equals the pairing derivative against the flipped vector.
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd q = random_vector(rng, 2);
    const Eigen::VectorXd p = random_vector(rng, 2);
    const Eigen::VectorXd qdot = random_vector(rng, 2);
    const Eigen::VectorXd pdot = random_vector(rng, 2);
    const Eigen::VectorXd dq = random_vector(rng, 2);
    const Eigen::VectorXd dv = random_vector(rng, 2);
    const double lhs = pdot.dot(dq) + p.dot(dv);
    const TTPoint flipped = kappa_flip({q, qdot, dq, dv});
    const double rhs = tangent_pairing({q, p, qdot, pdot}, flipped);
    worst = std::max(worst, std::abs(lhs - rhs));
  }

  const LiouvilleStructure ham = functor_hamilton(2, canonical_symplectic(1));
  const AlphaMap ab = alpha(ham);
  const Form pulled_h = pullback(ab.forward, liouville_form(2));
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd x = random_vector(rng, 4);
    const Eigen::VectorXd w = random_vector(rng, 4);
    worst = std::max(worst, std::abs(eval(pulled_h, x, {w}) -
                                     eval(ham.theta, x, {w})));
  }
  report(5, "tangent and Hamilton structures reproduce their forms through "
            "the derived isomorphisms", worst < 1e-10,
         "100 arguments each, tol 1e-10");
}

void criterion_6() {
  std::vector<LiouvilleStructure> structures{
      canonical_structure(1), canonical_structure(2), doubled_structure(),
      sheared_structure(), functor_scale(canonical_structure(2), -1.5)};
  double worst = 0.0;
  for (const LiouvilleStructure& l : structures) {
    const AlphaMap a = alpha(l);
    const Form pulled = pullback(a.forward, liouville_form(l.base_dim));
    const StructurePairing from_theta = pairing_from_theta(l);
    const StructurePairing from_omega = pairing_from_omega(l);
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 40; ++trial) {
      const Eigen::VectorXd x = random_vector(rng, l.total_dim());
      const Eigen::VectorXd w = random_vector(rng, l.total_dim());
      worst = std::max(worst,
                       std::abs(eval(pulled, x, {w}) - eval(l.theta, x, {w})));
      const FibredPoint p{x.head(l.base_dim), x.tail(l.fibre_dim)};
      const TangentPoint v{p.q, w.head(l.base_dim)};
      worst = std::max(worst,
                       std::abs(from_theta.eval(p, v) - from_omega.eval(p, v)));
    }
  }
  report(6, "pairing, isomorphism and form presentations round-trip",
         worst < 1e-10, "5 structures, tol 1e-10");
}

void criterion_7() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  bool pass = true;
  std::string detail;

  auto lagrangian_at = [](const GeneratedSet& s, const Eigen::VectorXd& x) {
    const Form omega = exterior_derivative(s.structure.theta);
    return is_lagrangian(s.tangent_basis(x),
                         make_symplectic(form_matrix(omega, x)));
  };
  auto random_quadratic = [&](int dim) {
    Eigen::MatrixXd sym(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j <= i; ++j) sym(i, j) = sym(j, i) = u(rng);
    Eigen::VectorXd lin(dim);
    for (int i = 0; i < dim; ++i) lin[i] = u(rng);
    return SmoothFn{dim, [sym, lin, dim](std::span<const JetScalar> x) {
                      JetScalar acc(0.0);
                      for (int i = 0; i < dim; ++i) {
                        acc += lin[i] * x[i];
                        for (int j = 0; j < dim; ++j)
                          acc += 0.5 * sym(i, j) * (x[i] * x[j]);
                      }
                      return acc;
                    }};
  };

  const LiouvilleStructure l2 = canonical_structure(2);
  std::vector<SmoothFn> plane{
      {2, [](std::span<const JetScalar> x) { return x[1]; }}};
  for (int round = 0; round < 10 && pass; ++round) {
    const GeneratedSet plain =
        generate_from_function(l2, {"U", {"q"}, random_quadratic(2)});
    const GeneratedSet constrained =
        generate_constrained(l2, {"U", {"q"}, random_quadratic(2)}, plane);
    const GeneratedSet two_point =
        generate_two_point({"W", {"q1", "q0"}, random_quadratic(2)});
    for (int s = 0; s < 50 && pass; ++s) {
      const Eigen::VectorXd xp = plain.sampler(random_vector(rng, 2));
      const Eigen::VectorXd xc =
          constrained.sampler(random_vector(rng, 3));
      const Eigen::VectorXd xw = two_point.sampler(random_vector(rng, 2));
      pass = lagrangian_at(plain, xp) && lagrangian_at(constrained, xc) &&
             lagrangian_at(two_point, xw) &&
             constrained.tangent_basis(xc).dim() == 2;
      if (!pass) detail = "failure in round " + std::to_string(round);
    }
  }

  // The constrained set with zero potential is the annihilator bundle.
  const GeneratedSet flat = generate_constrained(
      l2, {"U", {"q"}, {2, [](std::span<const JetScalar>) {
                          return JetScalar(0.0);
                        }}},
      plane);
  for (int s = 0; s < 20 && pass; ++s) {
    const Eigen::VectorXd x = flat.sampler(random_vector(rng, 3));
    pass = std::abs(x[1]) < 1e-12 && std::abs(x[2]) < 1e-12;
    Eigen::VectorXd member(4);
    member << u(rng), 0.0, 0.0, u(rng);
    pass = pass && flat.membership(member) < 1e-10;
    if (!pass) detail = "annihilator bundle mismatch";
  }
  report(7, "generated sets are Lagrangian with the right dimensions", pass,
         detail.empty() ? "10 rounds x 50 samples, tol 1e-9" : detail);
}

void criterion_8() {
  ScalarModel lag{"L", {"q", "v"}, {2, [](std::span<const JetScalar> x) {
                                      return 0.5 * (x[1] * x[1]) -
                                             0.5 * (x[0] * x[0]);
                                    }}};
  ScalarModel ham{"H", {"q", "p"}, {2, [](std::span<const JetScalar> x) {
                                      return 0.5 * (x[1] * x[1]) +
                                             0.5 * (x[0] * x[0]);
                                    }}};
  const double legendre_gap = consistency_check(lag, ham, 50);

  const double period = 2.0 * std::numbers::pi;
  const HamiltonianDynamics dyn =
      hamiltonian_dynamics(ham, canonical_symplectic(1));
  const Trajectory loop =
      rk4(dyn.field, vec2(1.0, 0.0), period, period / 4096.0);
  const double loop_gap =
      (loop.states.back() - vec2(1.0, 0.0)).cwiseAbs().maxCoeff();

  const Trajectory se =
      symplectic_euler(ham.value, vec2(1.0, 0.0), 100.0, 0.05);
  const double h0 = se.invariant_track.front();
  double drift = 0.0;
  for (double e : se.invariant_track) drift = std::max(drift, std::abs(e - h0));
  const double slope = std::abs(invariant_drift_slope(se));

  const bool pass = legendre_gap < 1e-9 && loop_gap < 1e-6 &&
                    drift < 0.05 * h0 && slope < 1e-4 * h0;
  std::ostringstream os;
  os << "legendre " << legendre_gap << ", period " << loop_gap << ", drift "
     << drift << ", slope " << slope;
  report(8, "Lagrangian and Hamiltonian dynamics cohere and integrate "
            "stably", pass, os.str());
}

void criterion_9() {
  // Principal function of the harmonic oscillator over a unit time window.
  const double c = std::cos(1.0), s = std::sin(1.0);
  ScalarModel w{"W", {"q1", "q0"}, {2, [c, s](std::span<const JetScalar> x) {
                  return ((x[0] * x[0] + x[1] * x[1]) * c -
                          2.0 * (x[0] * x[1])) /
                         (2.0 * s);
                }}};
  const GeneratedSet gen = generate_two_point(w);
  const HamiltonianDynamics dyn = hamiltonian_dynamics(
      {"H", {"q", "p"}, {2, [](std::span<const JetScalar> x) {
                           return 0.5 * (x[0] * x[0] + x[1] * x[1]);
                         }}},
      canonical_symplectic(1));
  double worst = 0.0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double q1 = -1.0 + 2.0 * i / 9.0;
      const double q0 = -1.0 + 2.0 * j / 9.0;
      const Eigen::VectorXd x = gen.sampler(vec2(q1, q0));
      // Coordinates (q1, q0, p1, p0): start the flow at (q0, p0).
      const Trajectory flow =
          rk4(dyn.field, vec2(q0, x[3]), 1.0, 1.0 / 2048.0);
      worst = std::max(worst, std::abs(flow.states.back()[0] - q1));
      worst = std::max(worst, std::abs(flow.states.back()[1] - x[2]));
    }
  report(9, "the harmonic principal function generates the unit-time flow",
         worst < 1e-6, "10x10 endpoint grid, tol 1e-6");
}

void criterion_10() {
  const bool pass =
      diagonal_check(canonical_structure(1), 100, 1e-9).all_pass() &&
      diagonal_check(doubled_structure(), 100, 1e-9).all_pass();
  report(10, "the diagonal identity relates the two derived structures",
         pass, "100 tangent pairs each, tol 1e-9");
}

void criterion_11() {
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream sink;
  std::streambuf* saved = std::cout.rdbuf(sink.rdbuf());
  bool pass = true;
  std::string detail;
  const std::vector<std::string> good{
      "models/harmonic_oscillator.json", "models/pendulum.json",
      "models/harmonic_lagrangian.json", "models/quadratic_well.json",
      "models/constrained_plane.json",   "models/spring_step.json",
      "models/quarter_turn.json"};
  for (const std::string& model : good)
    if (run_cli({"check", model}) != 0) {
      pass = false;
      detail = model + " did not pass check";
      break;
    }
  if (pass && run_cli({"check", "models/broken_structure.json"}) != 1) {
    pass = false;
    detail = "broken model was not rejected with exit 1";
  }
  std::cout.rdbuf(saved);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (pass && seconds >= 30.0) {
    pass = false;
    detail = "corpus took too long";
  }
  if (pass && sink.str().find("\"witness\": \"\"") == std::string::npos) {
    pass = false;
    detail = "reports missing witness fields";
  }
  std::ostringstream os;
  os << good.size() + 1 << " models in " << seconds << "s";
  report(11, "the model corpus checks end to end", pass,
         detail.empty() ? os.str() : detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  return failures;
}
