#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "sparsecqp/model.hpp"

namespace sparsecqp {

/// min c^T x  s.t.  A x <= b,  lower <= x <= upper  (bounds may be infinite).
struct LpProblem {
  Vector c;
  Matrix A;
  Vector b;
  Vector lower;
  Vector upper;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string_view to_string(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector x;       ///< valid iff Optimal
  double value = 0.0;
  int iterations = 0;
  /// Row multipliers y (y <= 0) with reduced costs c - A^T y; valid iff Optimal.
  Vector duals;
  Vector reducedCosts;
  /// Final basis as column indices: [0, n) structural, [n, n+p) slacks, beyond that artificials.
  std::vector<int> basis;
};

struct LpOptions {
  double optimalityTol = 1e-9;
  double feasibilityTol = 1e-7;
  double pivotTol = 1e-12;
  /// When set, the final basis is dumped here as text.
  std::ostream* debug = nullptr;
};

/// Dense bounded-variable primal simplex with a phase-one auxiliary problem.
/// Dantzig pricing switches to Bland's rule after 10*(p+n) iterations.
/// Throws NumericalFailure when no usable pivot remains.
LpResult solve_lp(const LpProblem& prob, const LpOptions& opts = {});

}  // namespace sparsecqp
