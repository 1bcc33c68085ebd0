#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "sparsecqp/feasible.hpp"
#include "sparsecqp/model.hpp"

namespace sparsecqp {

enum class SolveStatus { GlobalOptimal, Feasible, Infeasible };

std::string_view to_string(SolveStatus status);

/// One processed branch-and-bound node (recorded only on request).
struct NodeRecord {
  std::int64_t id = 0;
  std::int64_t parent = -1;
  double lowerBound = 0.0;
};

struct Solution {
  Vector x;
  double objective = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
  std::int64_t nodes = 0;
  double wallTime = 0.0;
  /// Final certified lower bound (branch-and-bound only).
  double lowerBound = 0.0;
  std::vector<NodeRecord> trace;
};

enum class BranchRule { WidestGap };

struct BnbConfig {
  double absGap = 1e-8;
  std::int64_t maxNodes = 1'000'000;
  BranchRule branchRule = BranchRule::WidestGap;
  bool recordTrace = false;
};

/// sum_i (d * x_i - x_i^2); equals d*||x||_1 - ||x||_2^2 for x >= 0.
double objective_cqp(const Vector& x, double d);

/// Entries above this value count as nonzero when extracting a support.
double support_threshold(double d);

/// Indices i with x_i > support_threshold(d).
std::vector<int> support_of(const Vector& x, double d);

/// l1 baseline: min sum(x) over a polytope with lower = 0 and upper = +inf.
Solution solve_l1(const Polytope& poly);

/// Global minimum of sum_i (d x_i - x_i^2) over a polytope with box [0, d]^n,
/// by spatial branch-and-bound with chord underestimators.
///
/// Status is GlobalOptimal when the gap is closed to cfg.absGap, Feasible when
/// the node budget ran out first (best incumbent returned), Infeasible when the
/// root relaxation is infeasible.
Solution solve_cqp(const Polytope& poly, double d, const BnbConfig& cfg = {});

/// Reference minimizer: enumerates every vertex of the polytope and keeps the
/// best. Throws DimensionTooLarge for n > 12.
Solution oracle_vertex_min(const Polytope& poly, double d);

/// Least-squares fit of QA restricted to `support` against Qy, zero-padded.
/// Throws RankDeficient if the restricted columns are dependent.
Vector refine_on_support(const Observation& obs, const std::vector<int>& support);

}  // namespace sparsecqp
