#pragma once

// Liouville structures on trivialized vector fibrations: the structure
// record, property verification, the pairing and fibration-isomorphism
// presentations, morphism checks over relation samplers, and the scale,
// sum, difference, tangent, Hamilton and phase constructions.

#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "liouville/bundles.hpp"
#include "liouville/forms.hpp"
#include "liouville/jet.hpp"

namespace liouville {

// A vector fibration P = R^n x R^k together with a one-form theta on the
// total space.  The defining properties (verticality, fibre linearity,
// nondegeneracy of d theta) are checked by verify, not by the constructor.
struct LiouvilleStructure {
  int base_dim = 0;
  int fibre_dim = 0;
  Form theta;  // degree 1 on R^{base_dim + fibre_dim}
  std::string label;

  int total_dim() const { return base_dim + fibre_dim; }
};

LiouvilleStructure canonical_structure(int n);

// Evaluates theta on a tangent vector of the total space.
double theta_eval(const LiouvilleStructure& l, const FibredTangent& w);

struct Check {
  std::string property;
  bool pass = false;
  std::string witness;  // offending input, empty on pass
  double tolerance = 0.0;
};

struct VerifyReport {
  std::string label;
  std::vector<Check> checks;

  bool all_pass() const;
  const Check* find(const std::string& property) const;
};

std::string report_to_json(const VerifyReport& report);

VerifyReport verify(const LiouvilleStructure& l, int samples, double tol,
                    unsigned seed = 20260823);

// Fibre-bilinear pairing between points of P and base tangent vectors.
struct StructurePairing {
  int base_dim = 0;
  int fibre_dim = 0;
  std::function<double(const FibredPoint&, const TangentPoint&)> eval;
};

// Pairing by evaluating theta on any lift of the velocity; independence of
// the lift is spot-checked at random inputs on construction.
StructurePairing pairing_from_theta(const LiouvilleStructure& l,
                                    double tol = 1e-9);

// Pairing by evaluating d theta at a zero-section point on the vertical
// lift of the fibre point against the zero-section lift of the velocity.
StructurePairing pairing_from_omega(const LiouvilleStructure& l);

// The fibrewise linear map P -> T*Q characterized by
// <alpha(p), v> = <p, v>, with its inverse.  Both are jet-evaluable, so
// pullbacks of forms along them are exact.
struct AlphaMap {
  SmoothMap forward;  // R^{n+k} -> R^{2n}, (q, f) -> (q, p)
  SmoothMap inverse;  // R^{2n} -> R^{n+k}
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> matrix;  // f -> p
};

AlphaMap alpha(const LiouvilleStructure& l, double max_condition = 1e8);

// One sampled point of a fibration relation together with tangent data.
struct GraphSample {
  FibredPoint target;
  FibredPoint source;
  // Tangent vectors to the graph at (target, source), as component pairs.
  std::vector<std::pair<FibredTangent, FibredTangent>> graph_tangents;
  // Velocity pairs related by the underlying base relation.
  std::vector<std::pair<TangentPoint, TangentPoint>> base_tangents;
};

struct MorphismData {
  std::function<GraphSample(std::mt19937_64&)> sample;
  int claimed_graph_dim = 0;
};

// Checks the three equivalent morphism conditions at sampled graph points:
// equality of pairings along the base relation, vanishing of the one-form
// difference on graph tangents, and vanishing of the two-form difference
// on graph tangent pairs.  The verdicts must agree.
VerifyReport morphism_check(const LiouvilleStructure& target,
                            const LiouvilleStructure& source,
                            const MorphismData& rho, int samples, double tol,
                            unsigned seed = 20260823);

LiouvilleStructure functor_scale(const LiouvilleStructure& l, double k);
LiouvilleStructure functor_sum(const LiouvilleStructure& l2,
                               const LiouvilleStructure& l1);
LiouvilleStructure functor_difference(const LiouvilleStructure& l2,
                                      const LiouvilleStructure& l1);

// The structure on TP -> TQ carrying the tangent-derivative form, in
// coordinates (q, qdot, f, fdot) of the total space.
LiouvilleStructure functor_tangent(const LiouvilleStructure& l);

// The structure on TP -> P carrying the contraction of a closed
// nondegenerate two-form, in coordinates (x, xdot).
LiouvilleStructure functor_hamilton(int p_dim, const Form& omega,
                                    int samples = 20,
                                    unsigned seed = 20260823);

LiouvilleStructure functor_phase(int n);

// Graph sampler of the cotangent lift of a base diffeomorphism:
// (q, p) -> (chi(q), Dchi(q)^{-T} p).
MorphismData cotangent_lift_morphism(const SmoothMap& chi,
                                     const SmoothMap& chi_inverse);

}  // namespace liouville
