#include <random>

#include "doctest.h"
#include "liouville/bundles.hpp"

using namespace liouville;

namespace {

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}

}  // namespace

TEST_CASE("kappa flip swaps the two first-order slots") {
  const TTPoint w{vec1(1), vec1(2), vec1(3), vec1(4)};
  const TTPoint f = kappa_flip(w);
  CHECK(f.q[0] == 1.0);
  CHECK(f.v[0] == 3.0);
  CHECK(f.dq[0] == 2.0);
  CHECK(f.dv[0] == 4.0);

  const TTPoint fixed{vec1(1), vec1(2), vec1(2), vec1(4)};
  const TTPoint g = kappa_flip(fixed);
  CHECK(g.v[0] == 2.0);
  CHECK(g.dq[0] == 2.0);
}

TEST_CASE("kappa flip is an involution exchanging the two projections") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const TTPoint w{random_vector(rng, 3), random_vector(rng, 3),
                    random_vector(rng, 3), random_vector(rng, 3)};
    const TTPoint back = kappa_flip(kappa_flip(w));
    CHECK((back.q - w.q).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.v - w.v).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.dq - w.dq).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.dv - w.dv).cwiseAbs().maxCoeff() == 0.0);
    // tau_TQ of the flip is T tau_Q of the original and vice versa.
    const TTPoint f = kappa_flip(w);
    CHECK((f.v - w.dq).cwiseAbs().maxCoeff() == 0.0);
    CHECK((f.dq - w.v).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("vertical lift has zero base velocity and passes is_vertical") {
  const FibredPoint p0{vec1(0), vec1(1)};
  const FibredTangent w = vertical_lift(p0, vec1(5));
  CHECK(w.dq[0] == 0.0);
  CHECK(w.df[0] == 5.0);
  CHECK(is_vertical(w));

  const FibredTangent zero = vertical_lift(p0, vec1(0));
  CHECK(zero.df[0] == 0.0);

  CHECK_THROWS_AS(vertical_lift(p0, Eigen::VectorXd::Zero(2)),
                  std::invalid_argument);
}

TEST_CASE("core extraction demands verticality and the zero section") {
  const FibredTangent core{{vec1(1), vec1(0)}, vec1(0), vec1(7)};
  CHECK(core_extract(core)[0] == 7.0);

  const FibredTangent off_section{{vec1(1), vec1(2)}, vec1(0), vec1(7)};
  CHECK(is_vertical(off_section));
  CHECK_THROWS_WITH_AS(core_extract(off_section),
                       doctest::Contains("zero section"),
                       std::invalid_argument);

  const FibredTangent tilted{{vec1(1), vec1(0)}, vec1(3), vec1(0)};
  CHECK(!is_vertical(tilted));
  CHECK_THROWS_WITH_AS(core_extract(tilted), doctest::Contains("vertical"),
                       std::invalid_argument);
}

TEST_CASE("second vector structure adds fibrewise") {
  const FibredTangent w1{{vec1(1), vec1(2)}, vec1(3), vec1(4)};
  const FibredTangent w2{{vec1(1), vec1(5)}, vec1(3), vec1(6)};
  const FibredTangent sum = second_add(w1, w2);
  CHECK(sum.at.q[0] == 1.0);
  CHECK(sum.at.f[0] == 7.0);
  CHECK(sum.dq[0] == 3.0);
  CHECK(sum.df[0] == 10.0);

  const FibredTangent scaled = second_scale(0.0, w1);
  CHECK(scaled.at.f[0] == 0.0);
  CHECK(scaled.df[0] == 0.0);
  CHECK(scaled.dq[0] == 3.0);

  const FibredTangent other_base{{vec1(2), vec1(5)}, vec1(3), vec1(6)};
  CHECK_THROWS_AS(second_add(w1, other_base), std::invalid_argument);
}

TEST_CASE("tangent lift applies the chain rule") {
  SmoothMap sq{1, 1, [](std::span<const JetScalar> x) {
                 return JetVector{x[0] * x[0]};
               }};
  const TangentPoint lifted = tangent_lift(sq, {vec1(3), vec1(1)});
  CHECK(lifted.q[0] == doctest::Approx(9.0));
  CHECK(lifted.v[0] == doctest::Approx(6.0));

  SmoothMap id{2, 2, [](std::span<const JetScalar> x) {
                 return JetVector(x.begin(), x.end());
               }};
  std::mt19937_64 rng(29);
  const TangentPoint w{random_vector(rng, 2), random_vector(rng, 2)};
  const TangentPoint same = tangent_lift(id, w);
  CHECK((same.q - w.q).cwiseAbs().maxCoeff() == 0.0);
  CHECK((same.v - w.v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("second tangent lift commutes with kappa") {
  SmoothMap phi{2, 2, [](std::span<const JetScalar> x) {
                  return JetVector{x[0] * x[1], x[0] + x[1] * x[1]};
                }};
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const TTPoint w{random_vector(rng, 2), random_vector(rng, 2),
                    random_vector(rng, 2), random_vector(rng, 2)};
    const TTPoint a = second_tangent_lift(phi, kappa_flip(w));
    const TTPoint b = kappa_flip(second_tangent_lift(phi, w));
    CHECK((a.q - b.q).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK((a.v - b.v).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK((a.dq - b.dq).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK((a.dv - b.dv).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  }
}

TEST_CASE("iterated zero sections meet in the all-zero record") {
  const FibredPoint origin = zero_section(vec1(0), 1);
  const FibredTangent core_zero = vertical_lift(origin, vec1(0));
  CHECK(core_zero.at.q[0] == 0.0);
  CHECK(core_zero.at.f[0] == 0.0);
  CHECK(core_zero.dq[0] == 0.0);
  CHECK(core_zero.df[0] == 0.0);
  CHECK(core_extract(core_zero)[0] == 0.0);
}
