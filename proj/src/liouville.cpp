#include "liouville/liouville.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

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

Eigen::VectorXd concat(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd r(a.size() + b.size());
  r << a, b;
  return r;
}

// Condition number from singular values; infinite for a singular matrix.
double condition_of(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= 0.0)
    return std::numeric_limits<double>::infinity();
  return sv(0) / sv(sv.size() - 1);
}

double two_form_eval(const Form& omega, const FibredTangent& a,
                     const FibredTangent& b) {
  return eval(omega, concat(a.at.q, a.at.f),
              {concat(a.dq, a.df), concat(b.dq, b.df)});
}

}  // namespace

LiouvilleStructure canonical_structure(int n) {
  return {n, n, liouville_form(n), "canonical"};
}

double theta_eval(const LiouvilleStructure& l, const FibredTangent& w) {
  return eval(l.theta, concat(w.at.q, w.at.f), {concat(w.dq, w.df)});
}

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.pass; });
}

const Check* VerifyReport::find(const std::string& property) const {
  for (const Check& c : checks)
    if (c.property == property) return &c;
  return nullptr;
}

std::string report_to_json(const VerifyReport& report) {
  nlohmann::json doc;
  doc["label"] = report.label;
  doc["checks"] = nlohmann::json::array();
  for (const Check& c : report.checks)
    doc["checks"].push_back({{"property", c.property},
                             {"pass", c.pass},
                             {"witness", c.witness},
                             {"tolerance", c.tolerance}});
  doc["all_pass"] = report.all_pass();
  return doc.dump(2);
}

VerifyReport verify(const LiouvilleStructure& l, int samples, double tol,
                    unsigned seed) {
  if (samples < 1) throw std::invalid_argument("verify: samples must be >= 1");
  const int n = l.base_dim;
  const int k = l.fibre_dim;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  VerifyReport report{l.label, {}};

  Check vertical{"vertical", true, "", tol};
  for (int s = 0; s < samples && vertical.pass; ++s) {
    FibredPoint at{random_vector(rng, n), random_vector(rng, k)};
    FibredTangent w = vertical_lift(at, random_vector(rng, k));
    const double value = theta_eval(l, w);
    if (std::abs(value) > tol) {
      vertical.pass = false;
      std::ostringstream os;
      os << "q=" << fmt(at.q) << " f=" << fmt(at.f) << " df=" << fmt(w.df)
         << " theta=" << value;
      vertical.witness = os.str();
    }
  }
  report.checks.push_back(vertical);

  Check linear{"linear", true, "", tol};
  for (int s = 0; s < samples && linear.pass; ++s) {
    const Eigen::VectorXd q = random_vector(rng, n);
    const Eigen::VectorXd dq = random_vector(rng, n);
    FibredTangent w1{{q, random_vector(rng, k)}, dq, random_vector(rng, k)};
    FibredTangent w2{{q, random_vector(rng, k)}, dq, random_vector(rng, k)};
    const double sum_err = std::abs(theta_eval(l, second_add(w1, w2)) -
                                    theta_eval(l, w1) - theta_eval(l, w2));
    const double c = (s % 3 == 0) ? 0.0 : coef(rng);
    const double hom_err =
        std::abs(theta_eval(l, second_scale(c, w1)) - c * theta_eval(l, w1));
    if (sum_err > tol || hom_err > tol) {
      linear.pass = false;
      std::ostringstream os;
      os << "q=" << fmt(q) << " dq=" << fmt(dq) << " f1=" << fmt(w1.at.f)
         << " df1=" << fmt(w1.df) << " additivity_err=" << sum_err
         << " homogeneity_err(c=" << c << ")=" << hom_err;
      linear.witness = os.str();
    }
  }
  report.checks.push_back(linear);

  Check nondeg{"nondegenerate", true, "", 1e8};
  if (k != n) {
    nondeg.pass = false;
    nondeg.witness = "fibre dimension " + std::to_string(k) +
                     " differs from base dimension " + std::to_string(n);
  } else {
    const Form omega = exterior_derivative(l.theta);
    for (int s = 0; s < samples && nondeg.pass; ++s) {
      const Eigen::VectorXd x =
          concat(random_vector(rng, n), random_vector(rng, k));
      const double cond = condition_of(form_matrix(omega, x));
      if (!(cond < 1e8)) {
        nondeg.pass = false;
        std::ostringstream os;
        os << "point=" << fmt(x) << " condition=" << cond;
        nondeg.witness = os.str();
      }
    }
  }
  report.checks.push_back(nondeg);
  return report;
}

StructurePairing pairing_from_theta(const LiouvilleStructure& l, double tol) {
  const int n = l.base_dim;
  const int k = l.fibre_dim;
  std::mt19937_64 rng(987654321u);
  for (int s = 0; s < 10; ++s) {
    FibredPoint at{random_vector(rng, n), random_vector(rng, k)};
    const Eigen::VectorXd v = random_vector(rng, n);
    const double flat = theta_eval(l, {at, v, Eigen::VectorXd::Zero(k)});
    const double lifted = theta_eval(l, {at, v, random_vector(rng, k)});
    if (std::abs(flat - lifted) > tol)
      throw std::invalid_argument(
          "pairing_from_theta: value depends on the lift (difference " +
          std::to_string(flat - lifted) + " at q=" + fmt(at.q) +
          "); the form is not vertical");
  }
  LiouvilleStructure copy = l;
  return {n, k,
          [copy, tol](const FibredPoint& p, const TangentPoint& v) {
            if (p.q.size() != v.q.size() ||
                (p.q.size() > 0 && (p.q - v.q).cwiseAbs().maxCoeff() > tol))
              throw std::invalid_argument(
                  "structure pairing: arguments sit over different base "
                  "points");
            return theta_eval(
                copy, {p, v.v, Eigen::VectorXd::Zero(copy.fibre_dim)});
          }};
}

StructurePairing pairing_from_omega(const LiouvilleStructure& l) {
  const Form omega = exterior_derivative(l.theta);
  const int n = l.base_dim;
  const int k = l.fibre_dim;
  return {n, k,
          [omega, n, k](const FibredPoint& p, const TangentPoint& v) {
            if (p.q.size() != v.q.size() ||
                (p.q.size() > 0 && (p.q - v.q).cwiseAbs().maxCoeff() > 1e-9))
              throw std::invalid_argument(
                  "structure pairing: arguments sit over different base "
                  "points");
            FibredPoint origin = zero_section(p.q, k);
            FibredTangent fibre_leg = vertical_lift(origin, p.f);
            FibredTangent base_leg{origin, v.v, Eigen::VectorXd::Zero(k)};
            return two_form_eval(omega, fibre_leg, base_leg);
          }};
}

AlphaMap alpha(const LiouvilleStructure& l, double max_condition) {
  const int n = l.base_dim;
  const int k = l.fibre_dim;
  if (k != n)
    throw std::invalid_argument(
        "alpha: fibre dimension must equal base dimension");
  const Form theta = l.theta;

  // Column i of the momentum covector is theta contracted with the i-th
  // base coordinate direction at the given total-space point.
  auto momentum = [theta, n, k](std::span<const JetScalar> x, int i) {
    std::vector<JetVector> dir(1, JetVector(n + k, JetScalar(0.0)));
    dir[0][i] = JetScalar(1.0);
    return eval_jet(theta, x, dir);
  };

  auto fibre_matrix = [theta, n, k, momentum](std::span<const JetScalar> q) {
    std::vector<JetVector> m(n, JetVector(n));
    JetVector point(n + k, JetScalar(0.0));
    std::copy(q.begin(), q.end(), point.begin());
    for (int j = 0; j < n; ++j) {
      point[n + j] = JetScalar(1.0);
      for (int i = 0; i < n; ++i) m[i][j] = momentum(point, i);
      point[n + j] = JetScalar(0.0);
    }
    return m;
  };

  SmoothMap forward{
      n + k, 2 * n, [momentum, n, k](std::span<const JetScalar> x) {
        JetVector out(2 * n);
        for (int i = 0; i < n; ++i) out[i] = x[i];
        for (int i = 0; i < n; ++i) out[n + i] = momentum(x, i);
        return out;
      }};

  SmoothMap inverse{
      2 * n, n + k,
      [fibre_matrix, n, k, max_condition](std::span<const JetScalar> x) {
        std::vector<JetVector> m = fibre_matrix(x.subspan(0, n));
        Eigen::MatrixXd values(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) values(i, j) = m[i][j].val;
        if (!(condition_of(values) < max_condition))
          throw std::domain_error(
              "alpha inverse: singular fibre matrix at q=" +
              fmt(values_of(JetVector(x.begin(), x.begin() + n))));
        JetVector p(x.begin() + n, x.end());
        JetVector f = jet_solve(m, p);
        JetVector out(n + k);
        for (int i = 0; i < n; ++i) out[i] = x[i];
        for (int i = 0; i < k; ++i) out[n + i] = f[i];
        return out;
      }};

  auto matrix = [fibre_matrix, n, max_condition](const Eigen::VectorXd& q) {
    std::vector<JetVector> m = fibre_matrix(to_jets(q));
    Eigen::MatrixXd values(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) values(i, j) = m[i][j].val;
    if (!(condition_of(values) < max_condition))
      throw std::domain_error("alpha: singular fibre matrix at q=" + fmt(q));
    return values;
  };

  return {forward, inverse, matrix};
}

VerifyReport morphism_check(const LiouvilleStructure& target,
                            const LiouvilleStructure& source,
                            const MorphismData& rho, int samples, double tol,
                            unsigned seed) {
  if (rho.claimed_graph_dim != target.base_dim + source.base_dim)
    throw std::invalid_argument(
        "morphism_check: claimed graph dimension " +
        std::to_string(rho.claimed_graph_dim) + " differs from " +
        std::to_string(target.base_dim + source.base_dim));
  std::mt19937_64 rng(seed);
  const StructurePairing pair_target = pairing_from_theta(target);
  const StructurePairing pair_source = pairing_from_theta(source);
  const Form omega_target = exterior_derivative(target.theta);
  const Form omega_source = exterior_derivative(source.theta);

  Check pairing{"pairing", true, "", tol};
  Check one_form{"one_form", true, "", tol};
  Check two_form{"two_form", true, "", tol};
  Check graph_dim{"graph_dimension", true, "", 1e-9};

  for (int s = 0; s < samples; ++s) {
    GraphSample g = rho.sample(rng);

    for (const auto& [vt, vs] : g.base_tangents) {
      const double d =
          pair_target.eval(g.target, vt) - pair_source.eval(g.source, vs);
      if (std::abs(d) > tol && pairing.pass) {
        pairing.pass = false;
        std::ostringstream os;
        os << "q'=" << fmt(g.target.q) << " q=" << fmt(g.source.q)
           << " difference=" << d;
        pairing.witness = os.str();
      }
    }

    for (const auto& [wt, ws] : g.graph_tangents) {
      const double d = theta_eval(target, wt) - theta_eval(source, ws);
      if (std::abs(d) > tol && one_form.pass) {
        one_form.pass = false;
        std::ostringstream os;
        os << "q'=" << fmt(g.target.q) << " q=" << fmt(g.source.q)
           << " difference=" << d;
        one_form.witness = os.str();
      }
    }

    for (std::size_t a = 0; a < g.graph_tangents.size(); ++a)
      for (std::size_t b = a + 1; b < g.graph_tangents.size(); ++b) {
        const double d =
            two_form_eval(omega_target, g.graph_tangents[a].first,
                          g.graph_tangents[b].first) -
            two_form_eval(omega_source, g.graph_tangents[a].second,
                          g.graph_tangents[b].second);
        if (std::abs(d) > tol && two_form.pass) {
          two_form.pass = false;
          std::ostringstream os;
          os << "q'=" << fmt(g.target.q) << " q=" << fmt(g.source.q)
             << " difference=" << d;
          two_form.witness = os.str();
        }
      }

    if (graph_dim.pass && !g.graph_tangents.empty()) {
      const int rows = target.total_dim() + source.total_dim();
      Eigen::MatrixXd stacked(rows, g.graph_tangents.size());
      for (std::size_t c = 0; c < g.graph_tangents.size(); ++c) {
        const auto& [wt, ws] = g.graph_tangents[c];
        stacked.col(c) << wt.dq, wt.df, ws.dq, ws.df;
      }
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
      int rank = 0;
      for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] >
            1e-9 * std::max(1.0, stacked.norm()))
          ++rank;
      if (rank != rho.claimed_graph_dim) {
        graph_dim.pass = false;
        graph_dim.witness = "tangent rank " + std::to_string(rank) +
                            " at q'=" + fmt(g.target.q) +
                            ", expected " +
                            std::to_string(rho.claimed_graph_dim);
      }
    }
  }

  VerifyReport report{target.label + "<-" + source.label,
                      {pairing, one_form, two_form, graph_dim}};
  const bool agree = pairing.pass == one_form.pass &&
                     one_form.pass == two_form.pass;
  report.checks.push_back(
      {"verdict_agreement", agree,
       agree ? ""
             : "pairing=" + std::to_string(pairing.pass) +
                   " one_form=" + std::to_string(one_form.pass) +
                   " two_form=" + std::to_string(two_form.pass),
       tol});
  return report;
}

LiouvilleStructure functor_scale(const LiouvilleStructure& l, double k) {
  if (k == 0.0)
    throw std::invalid_argument("functor_scale: zero multiplier");
  return {l.base_dim, l.fibre_dim, form_scale(k, l.theta),
          "scale(" + std::to_string(k) + ")." + l.label};
}

LiouvilleStructure functor_sum(const LiouvilleStructure& l2,
                               const LiouvilleStructure& l1) {
  const int n2 = l2.base_dim, k2 = l2.fibre_dim;
  const int n1 = l1.base_dim, k1 = l1.fibre_dim;
  const int total = n2 + n1 + k2 + k1;
  // Total-space coordinates (q2, q1, f2, f1).
  SmoothMap pr2{total, n2 + k2, [n2, n1, k2](std::span<const JetScalar> x) {
                  JetVector out(x.begin(), x.begin() + n2);
                  out.insert(out.end(), x.begin() + n2 + n1,
                             x.begin() + n2 + n1 + k2);
                  return out;
                }};
  SmoothMap pr1{total, n1 + k1,
                [n2, n1, k2, k1](std::span<const JetScalar> x) {
                  JetVector out(x.begin() + n2, x.begin() + n2 + n1);
                  out.insert(out.end(), x.begin() + n2 + n1 + k2, x.end());
                  return out;
                }};
  return {n2 + n1, k2 + k1,
          form_add(pullback(pr2, l2.theta), pullback(pr1, l1.theta)),
          l2.label + "+" + l1.label};
}

LiouvilleStructure functor_difference(const LiouvilleStructure& l2,
                                      const LiouvilleStructure& l1) {
  LiouvilleStructure negated{l1.base_dim, l1.fibre_dim,
                             form_scale(-1.0, l1.theta), l1.label};
  LiouvilleStructure out = functor_sum(l2, negated);
  out.label = l2.label + "-" + l1.label;
  return out;
}

LiouvilleStructure functor_tangent(const LiouvilleStructure& l) {
  const int n = l.base_dim;
  const int k = l.fibre_dim;
  const int m = n + k;
  // tangent_derivative produces coordinates (q, f, qdot, fdot); the output
  // structure uses (q, qdot, f, fdot) so that base coordinates come first.
  SmoothMap reorder{2 * m, 2 * m, [n, k, m](std::span<const JetScalar> x) {
                      JetVector out(2 * m);
                      for (int i = 0; i < n; ++i) out[i] = x[i];
                      for (int i = 0; i < k; ++i) out[n + i] = x[2 * n + i];
                      for (int i = 0; i < n; ++i) out[n + k + i] = x[n + i];
                      for (int i = 0; i < k; ++i)
                        out[m + n + i] = x[2 * n + k + i];
                      return out;
                    }};
  return {2 * n, 2 * k, pullback(reorder, tangent_derivative(l.theta)),
          "T." + l.label};
}

LiouvilleStructure functor_hamilton(int p_dim, const Form& omega, int samples,
                                    unsigned seed) {
  if (omega.degree != 2 || omega.ambient_dim != p_dim)
    throw std::invalid_argument(
        "functor_hamilton: degree-2 form on the given space required");
  std::mt19937_64 rng(seed);
  const Form domega = exterior_derivative(omega);
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd x = random_vector(rng, p_dim);
    JetVector jx = to_jets(x);
    for (const auto& idx : increasing_tuples(p_dim, 3))
      if (std::abs(domega.coeff(jx, idx).val) > 1e-10)
        throw std::invalid_argument(
            "functor_hamilton: form is not closed at " + fmt(x));
    if (!(condition_of(form_matrix(omega, x)) < 1e8))
      throw std::invalid_argument(
          "functor_hamilton: form is degenerate at " + fmt(x));
  }
  return {p_dim, p_dim, interior_tangent(omega), "hamilton"};
}

LiouvilleStructure functor_phase(int n) {
  LiouvilleStructure l = canonical_structure(n);
  l.label = "phase";
  return l;
}

MorphismData cotangent_lift_morphism(const SmoothMap& chi,
                                     const SmoothMap& chi_inverse) {
  if (chi.dim_in != chi.dim_out || chi_inverse.dim_in != chi.dim_out ||
      chi_inverse.dim_out != chi.dim_in)
    throw std::invalid_argument(
        "cotangent_lift_morphism: base map must be a square pair");
  const int n = chi.dim_in;

  // (q, p) -> (chi(q), Dchi(q)^{-T} p), jet-evaluable.
  SmoothMap lift{2 * n, 2 * n,
                 [chi, n](std::span<const JetScalar> x) {
                   std::span<const JetScalar> q = x.subspan(0, n);
                   JetVector image = chi(q);
                   std::vector<JetVector> jt(n, JetVector(n));
                   for (int r = 0; r < n; ++r)
                     for (int c = 0; c < n; ++c)
                       jt[r][c] = jet_directional(
                           [&chi, c](std::span<const JetScalar> y) {
                             return chi(y)[c];
                           },
                           q, r);
                   JetVector p(x.begin() + n, x.end());
                   JetVector pprime = jet_solve(jt, p);
                   image.insert(image.end(), pprime.begin(), pprime.end());
                   return image;
                 }};

  auto sample = [chi, chi_inverse, lift, n](std::mt19937_64& rng) {
    Eigen::VectorXd q = random_vector(rng, n, 1.0);
    const Eigen::VectorXd image = chi(q);
    if ((chi_inverse(image) - q).cwiseAbs().maxCoeff() > 1e-6)
      throw std::invalid_argument(
          "cotangent_lift_morphism: inverse does not undo the base map at "
          "q=" + fmt(q));
    Eigen::VectorXd p = random_vector(rng, n);
    Eigen::VectorXd qp = concat(q, p);
    const Eigen::VectorXd out = lift(qp);
    GraphSample g;
    g.target = {out.head(n), out.tail(n)};
    g.source = {q, p};
    const Eigen::MatrixXd jac = jacobian(lift, qp);
    const Eigen::MatrixXd base_jac = jacobian(chi, q);
    for (int c = 0; c < 2 * n; ++c) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(2 * n, c);
      FibredTangent ws{g.source, e.head(n), e.tail(n)};
      FibredTangent wt{g.target, jac.col(c).head(n), jac.col(c).tail(n)};
      g.graph_tangents.emplace_back(wt, ws);
    }
    for (int c = 0; c < n; ++c) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(n, c);
      g.base_tangents.emplace_back(TangentPoint{g.target.q, base_jac * e},
                                   TangentPoint{q, e});
    }
    return g;
  };
  return {sample, 2 * n};
}

}  // namespace liouville
