#pragma once

#include "sparsecqp/model.hpp"

namespace sparsecqp {

/// Feasible set {x : C x <= g, lower <= x <= upper} of the errors-in-variables model.
///
/// For nonnegative x the rows encode |QA x - Qy|_j <= deltaY + deltaA * sum(x):
///   C = [ QA - deltaA * 1 1^T ; -QA - deltaA * 1 1^T ],  g = [ Qy + deltaY ; -Qy + deltaY ].
/// The box is kept apart from (C, g) so solvers can treat it as variable bounds.
struct Polytope {
  Matrix C;
  Vector g;
  Vector lower;
  Vector upper;

  int n() const { return static_cast<int>(C.cols()); }
  int rows() const { return static_cast<int>(C.rows()); }
};

inline constexpr double kDefaultMembershipTol = 1e-9;

/// Polytope for the given box upper bounds (entries may be +inf); lower bounds are 0.
Polytope build_polytope(const Observation& obs, const Vector& upper);

/// Box [0, d]^n: the concave program's feasible set.
Polytope build_cqp_polytope(const Observation& obs);

/// Nonnegative orthant: the l1 baseline's feasible set.
Polytope build_l1_polytope(const Observation& obs);

/// Pure box polytope with no inequality rows.
Polytope box_polytope(const Vector& lower, const Vector& upper);

bool is_member(const Vector& x, const Polytope& poly, double tol = kDefaultMembershipTol);

/// Largest violation of any row or bound (<= 0 means strictly inside).
double max_violation(const Vector& x, const Polytope& poly);

}  // namespace sparsecqp
