#include "sparsecqp/feasible.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparsecqp/errors.hpp"

namespace sparsecqp {

Polytope build_polytope(const Observation& obs, const Vector& upper) {
  const int m = obs.m();
  const int n = obs.n();
  if (obs.Qy.size() != m) throw InvalidDimension("Qy length does not match QA rows");
  if (upper.size() != n) throw InvalidDimension("upper bound length does not match QA columns");
  // Zero bounds are accepted: they give the exact-data limit C = (A; -A), g = (y; -y).
  if (!(obs.deltaA >= 0.0) || !(obs.deltaY >= 0.0)) {
    throw InvalidArgument("perturbation bounds must be nonnegative");
  }

  Polytope poly;
  poly.C.resize(2 * m, n);
  poly.C.topRows(m) = obs.QA.array() - obs.deltaA;
  poly.C.bottomRows(m) = -obs.QA.array() - obs.deltaA;
  poly.g.resize(2 * m);
  poly.g.head(m) = obs.Qy.array() + obs.deltaY;
  poly.g.tail(m) = -obs.Qy.array() + obs.deltaY;
  poly.lower = Vector::Zero(n);
  poly.upper = upper;
  if ((poly.upper.array() < poly.lower.array()).any()) {
    throw InvalidArgument("box upper bound below lower bound");
  }
  return poly;
}

Polytope build_cqp_polytope(const Observation& obs) {
  return build_polytope(obs, Vector::Constant(obs.n(), obs.prior.d()));
}

Polytope build_l1_polytope(const Observation& obs) {
  return build_polytope(obs, Vector::Constant(obs.n(), INFINITY));
}

Polytope box_polytope(const Vector& lower, const Vector& upper) {
  if (lower.size() != upper.size()) throw InvalidDimension("box bound lengths differ");
  Polytope poly;
  poly.C.resize(0, lower.size());
  poly.g.resize(0);
  poly.lower = lower;
  poly.upper = upper;
  return poly;
}

double max_violation(const Vector& x, const Polytope& poly) {
  if (x.size() != poly.n()) {
    throw InvalidDimension("point has length " + std::to_string(x.size()) + ", polytope dimension is " +
                           std::to_string(poly.n()));
  }
  double worst = -INFINITY;
  if (poly.rows() > 0) worst = (poly.C * x - poly.g).maxCoeff();
  for (int i = 0; i < x.size(); ++i) {
    worst = std::max({worst, poly.lower(i) - x(i), x(i) - poly.upper(i)});
  }
  return worst;
}

bool is_member(const Vector& x, const Polytope& poly, double tol) {
  if (tol < 0.0) throw InvalidArgument("membership tolerance must be nonnegative");
  return max_violation(x, poly) <= tol;
}

}  // namespace sparsecqp
