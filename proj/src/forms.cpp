#include "liouville/forms.hpp"

#include <algorithm>
#include <stdexcept>

namespace liouville {

namespace {

JetScalar jet_det(const std::vector<JetVector>& m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return JetScalar(1.0);
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  JetScalar acc(0.0);
  for (int c = 0; c < n; ++c) {
    std::vector<JetVector> minor;
    minor.reserve(n - 1);
    for (int r = 1; r < n; ++r) {
      JetVector row;
      row.reserve(n - 1);
      for (int cc = 0; cc < n; ++cc)
        if (cc != c) row.push_back(m[r][cc]);
      minor.push_back(std::move(row));
    }
    JetScalar term = m[0][c] * jet_det(minor);
    acc += (c % 2 == 0) ? term : -term;
  }
  return acc;
}

// Derivative of every component of a smooth map along one coordinate
// direction, with the same two-slot bookkeeping as jet_directional.
JetVector map_directional(const SmoothMap& phi,
                          std::span<const JetScalar> point, int direction) {
  bool ds_free = true;
  bool dt_free = true;
  for (const JetScalar& c : point) {
    if (c.ds != 0.0 || c.dst != 0.0) ds_free = false;
    if (c.dt != 0.0 || c.dst != 0.0) dt_free = false;
  }
  JetVector probe(point.begin(), point.end());
  JetVector out;
  if (ds_free) {
    probe[direction].ds = 1.0;
    JetVector r = phi(probe);
    out.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      out[i] = {r[i].ds, 0.0, r[i].dst, 0.0};
  } else if (dt_free) {
    probe[direction].dt = 1.0;
    JetVector r = phi(probe);
    out.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      out[i] = {r[i].dt, r[i].dst, 0.0, 0.0};
  } else {
    throw std::logic_error(
        "map_directional: both jet slots busy (derivative depth > 2)");
  }
  return out;
}

void check_degree(const Form& mu, std::span<const int> idx) {
  if (static_cast<int>(idx.size()) != mu.degree)
    throw std::invalid_argument("form coefficient: index tuple size " +
                                std::to_string(idx.size()) +
                                " does not match degree " +
                                std::to_string(mu.degree));
}

}  // namespace

std::vector<std::vector<int>> increasing_tuples(int m, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > m) return out;
  std::vector<int> t(k);
  for (int i = 0; i < k; ++i) t[i] = i;
  while (true) {
    out.push_back(t);
    int i = k - 1;
    while (i >= 0 && t[i] == m - k + i) --i;
    if (i < 0) break;
    ++t[i];
    for (int j = i + 1; j < k; ++j) t[j] = t[j - 1] + 1;
  }
  if (k == 0) out = {std::vector<int>{}};
  return out;
}

Form zero_form(int ambient_dim, int degree) {
  return {ambient_dim, degree,
          [](std::span<const JetScalar>, std::span<const int>) {
            return JetScalar(0.0);
          }};
}

Form constant_form(int ambient_dim, int degree, std::span<const int> idx,
                   double value) {
  std::vector<int> target(idx.begin(), idx.end());
  return {ambient_dim, degree,
          [target, value](std::span<const JetScalar>, std::span<const int> i) {
            return std::equal(i.begin(), i.end(), target.begin(), target.end())
                       ? JetScalar(value)
                       : JetScalar(0.0);
          }};
}

Form form_add(const Form& a, const Form& b) {
  if (a.ambient_dim != b.ambient_dim || a.degree != b.degree)
    throw std::invalid_argument("form_add: degree or dimension mismatch");
  return {a.ambient_dim, a.degree,
          [a, b](std::span<const JetScalar> x, std::span<const int> i) {
            return a.coeff(x, i) + b.coeff(x, i);
          }};
}

Form form_scale(double k, const Form& a) {
  return {a.ambient_dim, a.degree,
          [k, a](std::span<const JetScalar> x, std::span<const int> i) {
            return k * a.coeff(x, i);
          }};
}

JetScalar eval_jet(const Form& mu, std::span<const JetScalar> point,
                   const std::vector<JetVector>& vectors) {
  if (static_cast<int>(point.size()) != mu.ambient_dim)
    throw std::invalid_argument("form eval: point dimension mismatch");
  if (static_cast<int>(vectors.size()) != mu.degree)
    throw std::invalid_argument("form eval: expected " +
                                std::to_string(mu.degree) + " vectors, got " +
                                std::to_string(vectors.size()));
  for (const JetVector& v : vectors)
    if (static_cast<int>(v.size()) != mu.ambient_dim)
      throw std::invalid_argument("form eval: vector dimension mismatch");
  if (mu.degree == 0) return mu.coeff(point, {});
  JetScalar acc(0.0);
  const int k = mu.degree;
  for (const auto& idx : increasing_tuples(mu.ambient_dim, k)) {
    std::vector<JetVector> minor(k, JetVector(k));
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) minor[a][b] = vectors[b][idx[a]];
    acc += mu.coeff(point, idx) * jet_det(minor);
  }
  return acc;
}

double eval(const Form& mu, const Eigen::VectorXd& point,
            const std::vector<Eigen::VectorXd>& vectors) {
  std::vector<JetVector> jv;
  jv.reserve(vectors.size());
  for (const auto& v : vectors) jv.push_back(to_jets(v));
  return eval_jet(mu, to_jets(point), jv).val;
}

Form wedge(const Form& a, const Form& b) {
  if (a.ambient_dim != b.ambient_dim)
    throw std::invalid_argument("wedge: ambient dimension mismatch");
  const int ka = a.degree;
  const int kb = b.degree;
  return {a.ambient_dim, ka + kb,
          [a, b, ka, kb](std::span<const JetScalar> x, std::span<const int> i) {
            check_degree(Form{0, ka + kb, nullptr}, i);
            // Sum over order-preserving splits of the index tuple.
            JetScalar acc(0.0);
            const int k = ka + kb;
            std::vector<int> pick(ka);
            for (int j = 0; j < ka; ++j) pick[j] = j;
            auto term = [&](const std::vector<int>& positions) {
              std::vector<int> ia, ib;
              std::vector<bool> used(k, false);
              for (int p : positions) used[p] = true;
              int inversions = 0;
              for (int p = 0; p < k; ++p)
                if (used[p])
                  ia.push_back(i[p]);
                else
                  ib.push_back(i[p]);
              // parity of the shuffle moving the picked slots to the front
              for (int p = 0; p < k; ++p)
                if (!used[p])
                  for (int q = p + 1; q < k; ++q)
                    if (used[q]) ++inversions;
              JetScalar t = a.coeff(x, ia) * b.coeff(x, ib);
              acc += (inversions % 2 == 0) ? t : -t;
            };
            if (ka == 0) {
              term({});
            } else {
              while (true) {
                term(pick);
                int j = ka - 1;
                while (j >= 0 && pick[j] == k - ka + j) --j;
                if (j < 0) break;
                ++pick[j];
                for (int l = j + 1; l < ka; ++l) pick[l] = pick[l - 1] + 1;
              }
            }
            return acc;
          }};
}

Form pullback(const SmoothMap& phi, const Form& mu) {
  if (phi.dim_out != mu.ambient_dim)
    throw std::invalid_argument("pullback: map target dimension " +
                                std::to_string(phi.dim_out) +
                                " does not match form dimension " +
                                std::to_string(mu.ambient_dim));
  return {phi.dim_in, mu.degree,
          [phi, mu](std::span<const JetScalar> x, std::span<const int> i) {
            check_degree(mu, i);
            JetVector image = phi(x);
            std::vector<JetVector> cols;
            cols.reserve(i.size());
            for (int dir : i) cols.push_back(map_directional(phi, x, dir));
            return eval_jet(mu, image, cols);
          }};
}

Form exterior_derivative(const Form& mu) {
  const Form inner = mu;
  return {mu.ambient_dim, mu.degree + 1,
          [inner](std::span<const JetScalar> x, std::span<const int> i) {
            JetScalar acc(0.0);
            std::vector<int> sub(i.begin(), i.end());
            for (std::size_t a = 0; a < i.size(); ++a) {
              sub.erase(sub.begin() + a);
              auto partial = jet_directional(
                  [&inner, &sub](std::span<const JetScalar> y) {
                    return inner.coeff(y, sub);
                  },
                  x, i[a]);
              acc += (a % 2 == 0) ? partial : -partial;
              sub.insert(sub.begin() + a, i[a]);
            }
            return acc;
          }};
}

double canonical_pairing(const CotangentPoint& p, const TangentPoint& v,
                         double tol) {
  if (p.q.size() != v.q.size() ||
      (p.q.size() > 0 && (p.q - v.q).cwiseAbs().maxCoeff() > tol))
    throw std::invalid_argument("canonical_pairing: base points differ");
  return p.p.dot(v.v);
}

double tangent_pairing(const TTStarPoint& w, const TTPoint& v, double tol) {
  if (w.q.size() != v.q.size() ||
      (w.q - v.q).cwiseAbs().maxCoeff() > tol ||
      (w.qdot - v.dq).cwiseAbs().maxCoeff() > tol)
    throw std::invalid_argument(
        "tangent_pairing: projections to the tangent base differ");
  return w.pdot.dot(v.v) + w.p.dot(v.dv);
}

Form liouville_form(int n) {
  return {2 * n, 1,
          [n](std::span<const JetScalar> x, std::span<const int> i) {
            return i[0] < n ? x[n + i[0]] : JetScalar(0.0);
          }};
}

Form canonical_symplectic(int n) {
  return exterior_derivative(liouville_form(n));
}

Form interior_tangent(const Form& mu) {
  const int m = mu.ambient_dim;
  if (mu.degree == 0) return zero_form(2 * m, 0);
  const Form inner = mu;
  return {2 * m, mu.degree - 1,
          [inner, m](std::span<const JetScalar> y, std::span<const int> i) {
            JetVector x(y.begin(), y.begin() + m);
            std::vector<JetVector> vectors;
            vectors.reserve(i.size() + 1);
            vectors.emplace_back(y.begin() + m, y.end());  // foot velocity
            for (int idx : i) {
              JetVector e(m, JetScalar(0.0));
              if (idx < m) e[idx] = JetScalar(1.0);
              vectors.push_back(std::move(e));
            }
            return eval_jet(inner, x, vectors);
          }};
}

Form tangent_derivative(const Form& mu) {
  if (mu.degree == 0) return interior_tangent(exterior_derivative(mu));
  return form_add(interior_tangent(exterior_derivative(mu)),
                  exterior_derivative(interior_tangent(mu)));
}

Eigen::MatrixXd form_matrix(const Form& omega, const Eigen::VectorXd& point) {
  if (omega.degree != 2)
    throw std::invalid_argument("form_matrix: degree-2 form required");
  const int m = omega.ambient_dim;
  Eigen::MatrixXd o = Eigen::MatrixXd::Zero(m, m);
  JetVector x = to_jets(point);
  for (const auto& idx : increasing_tuples(m, 2)) {
    const double c = omega.coeff(x, idx).val;
    o(idx[0], idx[1]) = c;
    o(idx[1], idx[0]) = -c;
  }
  return o;
}

}  // namespace liouville
