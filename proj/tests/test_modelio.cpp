#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "liouville/model.hpp"

using namespace liouville;

namespace {

std::filesystem::path fixture_dir() {
  const auto dir =
      std::filesystem::temp_directory_path() / "liouville_model_fixtures";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_fixture(const std::string& name, const std::string& body) {
  const auto path = fixture_dir() / name;
  std::ofstream out(path);
  out << body;
  return path.string();
}

// The CLI prints reports on stdout; keep test output readable.
struct CoutCapture {
  std::ostringstream sink;
  std::streambuf* saved;
  CoutCapture() : saved(std::cout.rdbuf(sink.rdbuf())) {}
  ~CoutCapture() { std::cout.rdbuf(saved); }
};

int quiet_cli(const std::vector<std::string>& args, std::string* text = nullptr) {
  CoutCapture capture;
  const int code = run_cli(args);
  if (text) *text = capture.sink.str();
  return code;
}

double eval_at(const std::string& source,
               const std::vector<std::string>& vars,
               const Eigen::VectorXd& x) {
  return bind_expression(parse_expression(source), vars)(x);
}

// Random well-formed expression source over the given variables.
std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 5);
  std::uniform_real_distribution<double> num(0.1, 3.0);
  if (depth <= 0) {
    switch (pick(rng) % 3) {
      case 0: return "x";
      case 1: return "y";
      default: {
        std::ostringstream os;
        os.precision(17);
        os << num(rng);
        return os.str();
      }
    }
  }
  switch (pick(rng)) {
    case 0: return "(" + random_expr(rng, depth - 1) + " + " +
                 random_expr(rng, depth - 1) + ")";
    case 1: return "(" + random_expr(rng, depth - 1) + " - " +
                 random_expr(rng, depth - 1) + ")";
    case 2: return "(" + random_expr(rng, depth - 1) + " * " +
                 random_expr(rng, depth - 1) + ")";
    case 3: return "sin(" + random_expr(rng, depth - 1) + ")";
    case 4: return "cos(" + random_expr(rng, depth - 1) + ")";
    default: return "(-" + random_expr(rng, depth - 1) + ")";
  }
}

}  // namespace

TEST_CASE("arithmetic and precedence of parsed expressions") {
  Eigen::VectorXd x(2);
  x << 1.0, 2.0;
  CHECK(eval_at("p^2/2 + q^2/2", {"q", "p"}, x) == doctest::Approx(2.5));
  CHECK(eval_at("2 + 3 * 4", {"q", "p"}, x) == doctest::Approx(14.0));
  CHECK(eval_at("2 ^ 3 ^ 2", {"q", "p"}, x) == doctest::Approx(512.0));
  CHECK(eval_at("-q^2", {"q", "p"}, x) == doctest::Approx(-1.0));
  CHECK(eval_at("2^-1", {"q", "p"}, x) == doctest::Approx(0.5));
  CHECK(eval_at("sqrt(q + 3) - ln(exp(p))", {"q", "p"}, x) ==
        doctest::Approx(0.0));
}

TEST_CASE("parse errors carry a location") {
  CHECK_THROWS_AS(parse_expression("((q)"), ParseError);
  try {
    parse_expression("((q)");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column >= 4);
    CHECK(std::string(e.what()).find("line 1") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_expression("q +"), ParseError);
  CHECK_THROWS_AS(parse_expression("q q"), ParseError);
  CHECK_THROWS_AS(parse_expression("sin q"), ParseError);
  CHECK_THROWS_AS(parse_expression("q # 2"), ParseError);
}

TEST_CASE("binding rejects undeclared variables") {
  const ExprPtr e = parse_expression("q1 + stray");
  CHECK_THROWS_WITH_AS(bind_expression(e, {"q1"}),
                       doctest::Contains("stray"), std::invalid_argument);
  const auto vars = free_variables(e);
  CHECK(vars.size() == 2);
}

TEST_CASE("parsed sin evaluates correctly over jets") {
  const SmoothFn f = bind_expression(parse_expression("sin(q)"), {"q"});
  JetVector seed{JetScalar{0.0, 1.0, 0.0, 0.0}};
  const JetScalar r = f(std::span<const JetScalar>(seed));
  CHECK(r.val == doctest::Approx(0.0));
  CHECK(r.ds == doctest::Approx(1.0));
  CHECK(r.dt == 0.0);
  CHECK(r.dst == 0.0);
}

TEST_CASE("printing then reparsing is idempotent") {
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 200; ++trial) {
    const std::string source = random_expr(rng, 3);
    const std::string once = print_expression(parse_expression(source));
    const std::string twice = print_expression(parse_expression(once));
    CHECK(once == twice);
  }
}

TEST_CASE("jet derivatives of parsed expressions match finite differences") {
  std::mt19937_64 rng(137);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-6;
  for (int trial = 0; trial < 40; ++trial) {
    const std::string source = random_expr(rng, 3);
    const SmoothFn f = bind_expression(parse_expression(source), {"x", "y"});
    Eigen::VectorXd at(2);
    at << u(rng), u(rng);
    JetVector seed{JetScalar{at[0], 1.0, 0.0, 0.0}, JetScalar{at[1]}};
    const double ds = f(std::span<const JetScalar>(seed)).ds;
    Eigen::VectorXd lo = at, hi = at;
    lo[0] -= h;
    hi[0] += h;
    const double fd = (f(hi) - f(lo)) / (2.0 * h);
    CHECK(ds == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("variable name helpers follow the chart convention") {
  CHECK(config_vars(2) == std::vector<std::string>{"q1", "q2"});
  CHECK(velocity_vars(1) == std::vector<std::string>{"v1"});
  CHECK(momentum_vars(2) == std::vector<std::string>{"p1", "p2"});
  CHECK(two_point_vars(2) ==
        std::vector<std::string>{"q1", "q2", "q0_1", "q0_2"});
}

TEST_CASE("model files load with a strict schema") {
  const std::string good = write_fixture("good.json", R"({
    "name": "osc", "base_dim": 1, "role": "hamiltonian",
    "H": "(p1^2 + q1^2)/2",
    "integrator": {"method": "rk4", "h": 0.01, "t_end": 1.0, "x0": [1, 0]},
    "tolerance": 1e-9,
    "limits": {"residual": 0.001, "drift_fraction": 0.05}
  })");
  const ModelFile model = load_model(good);
  CHECK(model.name == "osc");
  CHECK(model.base_dim == 1);
  CHECK(model.has_integrator);
  CHECK(model.integrator.x0.size() == 2);
  CHECK(model.dynamics_residual_limit == doctest::Approx(0.001));

  CHECK_THROWS_WITH_AS(load_model(write_fixture("missing.json",
                                                R"({"name": "x", "base_dim": 1,
                                                    "role": "hamiltonian"})")),
                       doctest::Contains("\"H\""), ModelError);
  CHECK_THROWS_WITH_AS(
      load_model(write_fixture("unknown.json",
                               R"({"name": "x", "base_dim": 1,
                                   "role": "hamiltonian", "H": "p1",
                                   "bogus": 1})")),
      doctest::Contains("bogus"), ModelError);
  CHECK_THROWS_WITH_AS(
      load_model(write_fixture("badrole.json",
                               R"({"name": "x", "base_dim": 1,
                                   "role": "mystery", "H": "p1"})")),
      doctest::Contains("mystery"), ModelError);
  CHECK_THROWS_WITH_AS(
      load_model(write_fixture("badg.json",
                               R"({"name": "x", "base_dim": 1,
                                   "role": "generating", "U": "q1",
                                   "g": ["q1"]})")),
      doctest::Contains("\"g\""), ModelError);
  CHECK_THROWS_WITH_AS(
      load_model(write_fixture("badtheta.json",
                               R"({"name": "x", "base_dim": 1,
                                   "role": "generating", "U": "q1",
                                   "theta": ["p1"]})")),
      doctest::Contains("theta"), ModelError);
  CHECK_THROWS_AS(load_model(write_fixture("notjson.json", "{ nope")),
                  ModelError);
  CHECK_THROWS_AS(load_model((fixture_dir() / "absent.json").string()),
                  ModelError);
}

TEST_CASE("a theta override changes the built structure") {
  const std::string path = write_fixture("scaled.json", R"({
    "name": "scaled", "base_dim": 1, "role": "generating", "U": "q1^2/2",
    "theta": ["2 * p1", "0"]
  })");
  const ModelFile model = load_model(path);
  const LiouvilleStructure l = structure_from_model(model);
  Eigen::VectorXd x(2), w(2);
  x << 1.0, 3.0;
  w << 1.0, 0.0;
  CHECK(eval(l.theta, x, {w}) == doctest::Approx(6.0));
  CHECK(verify(l, 20, 1e-9).all_pass());
}

TEST_CASE("the check subcommand reports verification results") {
  const std::string good = write_fixture("check_ok.json", R"({
    "name": "osc", "base_dim": 1, "role": "hamiltonian",
    "H": "(p1^2 + q1^2)/2"
  })");
  std::string text;
  CHECK(quiet_cli({"check", good}, &text) == 0);
  CHECK(text.find("PASS osc") != std::string::npos);

  const std::string broken = write_fixture("check_broken.json", R"({
    "name": "crooked", "base_dim": 1, "role": "generating", "U": "q1^2/2",
    "theta": ["p1 + 1", "0"]
  })");
  CHECK(quiet_cli({"check", broken}, &text) == 1);
  CHECK(text.find("FAIL crooked") != std::string::npos);
  CHECK(text.find("\"witness\"") != std::string::npos);

  const std::string missing = write_fixture("check_missing.json", R"({
    "name": "bad", "base_dim": 1, "role": "hamiltonian"
  })");
  CHECK(quiet_cli({"check", missing}) == 2);
}

TEST_CASE("the generate subcommand dumps samples with residuals") {
  const std::string gen = write_fixture("gen.json", R"({
    "name": "well", "base_dim": 1, "role": "generating", "U": "q1^2/2"
  })");
  std::string text;
  CHECK(quiet_cli({"generate", gen, "--samples", "5"}, &text) == 0);
  CHECK(text.find("params\tpoint\tresidual") != std::string::npos);
  CHECK(text.find("max_residual") != std::string::npos);

  const std::string ham = write_fixture("gen_ham.json", R"({
    "name": "osc", "base_dim": 1, "role": "hamiltonian", "H": "p1"
  })");
  CHECK(quiet_cli({"generate", ham}) == 2);
}

TEST_CASE("the dynamics subcommand integrates and audits a trajectory") {
  const auto traj_path = fixture_dir() / "osc.traj.tsv";
  const std::string ham = write_fixture("dyn.json", std::string(R"({
    "name": "osc", "base_dim": 1, "role": "hamiltonian",
    "H": "(p1^2 + q1^2)/2",
    "kinetic": "p1^2/2", "potential": "q1^2/2",
    "integrator": {"method": "rk4", "h": 0.001, "t_end": 2.0, "x0": [1, 0]},
    "limits": {"residual": 0.005, "drift_fraction": 0.05}
  })"));
  std::string text;
  CHECK(quiet_cli({"dynamics", ham, "--out", traj_path.string()}, &text) == 0);
  CHECK(text.find("PASS osc") != std::string::npos);
  CHECK(std::filesystem::exists(traj_path));
  std::ifstream in(traj_path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "time\tx0\tx1\tinvariant");

  CHECK(quiet_cli({"dynamics", ham, "--method", "leapfrog", "--out",
                   traj_path.string()}) == 0);
  CHECK(quiet_cli({"dynamics", ham, "--method", "symplectic-euler", "--out",
                   traj_path.string()}) == 0);
  CHECK(quiet_cli({"dynamics", ham, "--method", "midpoint", "--out",
                   traj_path.string()}) == 2);

  const std::string lag = write_fixture("dyn_lag.json", std::string(R"({
    "name": "lag_osc", "base_dim": 1, "role": "lagrangian",
    "L": "v1^2/2 - q1^2/2",
    "integrator": {"h": 0.001, "t_end": 1.0, "x0": [1, 0]}
  })"));
  CHECK(quiet_cli({"dynamics", lag, "--out",
                   (fixture_dir() / "lag.traj.tsv").string()}) == 0);

  const std::string no_integ = write_fixture("dyn_none.json", R"({
    "name": "osc", "base_dim": 1, "role": "hamiltonian",
    "H": "(p1^2 + q1^2)/2"
  })");
  CHECK(quiet_cli({"dynamics", no_integ}) == 2);
}

TEST_CASE("the relation subcommand composes two-point models") {
  const std::string spring = write_fixture("rel_spring.json", R"({
    "name": "spring", "base_dim": 1, "role": "two_point",
    "W": "(q1 - q0_1)^2/2"
  })");
  std::string text;
  CHECK(quiet_cli({"relation", spring, spring}, &text) == 0);
  CHECK(text.find("lagrangian\tyes") != std::string::npos);

  const std::string gen = write_fixture("rel_bad.json", R"({
    "name": "well", "base_dim": 1, "role": "generating", "U": "q1^2/2"
  })");
  CHECK(quiet_cli({"relation", spring, gen}) == 2);
}

TEST_CASE("unknown flags and subcommands exit with the input-error code") {
  CHECK(quiet_cli({"explode"}) == 2);
  CHECK(quiet_cli({}) == 2);
  CHECK(quiet_cli({"check"}) == 2);
  CHECK(quiet_cli({"check", "no_such_file.json"}) == 2);
}
