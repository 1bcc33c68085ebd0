#include "sparsecqp/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <string>

#include "sparsecqp/errors.hpp"
#include "sparsecqp/lp.hpp"

namespace sparsecqp {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::GlobalOptimal:
      return "GlobalOptimal";
    case SolveStatus::Feasible:
      return "Feasible";
    case SolveStatus::Infeasible:
      return "Infeasible";
  }
  return "?";
}

double objective_cqp(const Vector& x, double d) { return (d * x.array() - x.array().square()).sum(); }

double support_threshold(double d) { return 1e-6 * std::max(d, 1.0); }

std::vector<int> support_of(const Vector& x, double d) {
  const double thr = support_threshold(d);
  std::vector<int> s;
  for (int i = 0; i < x.size(); ++i)
    if (x(i) > thr) s.push_back(i);
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

LpProblem relaxation_base(const Polytope& poly) {
  LpProblem lp;
  lp.A = poly.C;
  lp.b = poly.g;
  lp.lower = poly.lower;
  lp.upper = poly.upper;
  lp.c = Vector::Zero(poly.n());
  return lp;
}

}  // namespace

Solution solve_l1(const Polytope& poly) {
  const auto start = Clock::now();
  LpProblem lp = relaxation_base(poly);
  lp.c.setOnes();
  const LpResult res = solve_lp(lp);

  Solution sol;
  sol.nodes = 1;
  if (res.status == LpStatus::Optimal) {
    sol.x = res.x;
    sol.objective = res.x.sum();
    sol.lowerBound = sol.objective;
    sol.status = SolveStatus::GlobalOptimal;
  } else if (res.status == LpStatus::Unbounded) {
    throw InvalidArgument("l1 problem is unbounded: lower bounds must be finite");
  }
  sol.wallTime = seconds_since(start);
  return sol;
}

namespace {

struct Node {
  std::int64_t id;
  double lowerBound;
  Vector lower;
  Vector upper;
  Vector point;  // relaxation minimizer on this box
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.lowerBound != b.lowerBound) return a.lowerBound > b.lowerBound;
    return a.id > b.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const Polytope& poly, double d, const BnbConfig& cfg)
      : poly_(poly), d_(d), cfg_(cfg), lp_(relaxation_base(poly)) {}

  Solution run() {
    const auto start = Clock::now();
    Solution sol;
    Node root{0, -INFINITY, poly_.lower, poly_.upper, {}};
    if (!relax(root, -1)) {
      sol.status = SolveStatus::Infeasible;
      sol.nodes = processed_;
      sol.trace = std::move(trace_);
      sol.wallTime = seconds_since(start);
      return sol;
    }
    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    open.push(std::move(root));

    bool exhausted = false;
    while (!open.empty()) {
      if (open.top().lowerBound >= incumbentValue_ - cfg_.absGap) break;
      if (processed_ >= cfg_.maxNodes) {
        exhausted = true;
        break;
      }
      Node node = open.top();
      open.pop();

      const int coord = branchCoordinate(node);
      if (coord < 0) continue;  // relaxation is exact on this box
      const double lo = node.lower(coord);
      const double hi = node.upper(coord);
      const double width = hi - lo;
      const double split = std::clamp(node.point(coord), lo + 0.2 * width, hi - 0.2 * width);

      Node left{nextId_++, node.lowerBound, node.lower, node.upper, {}};
      left.upper(coord) = split;
      Node right{nextId_++, node.lowerBound, node.lower, node.upper, {}};
      right.lower(coord) = split;
      for (Node* child : {&left, &right}) {
        const double parentBound = node.lowerBound;
        if (!relax(*child, node.id)) continue;
        child->lowerBound = std::max(child->lowerBound, parentBound);
        if (child->lowerBound < incumbentValue_ - cfg_.absGap) open.push(std::move(*child));
      }
    }

    sol.x = incumbent_;
    sol.objective = incumbentValue_;
    sol.lowerBound = open.empty() ? incumbentValue_ : std::min(incumbentValue_, open.top().lowerBound);
    sol.status = exhausted ? SolveStatus::Feasible : SolveStatus::GlobalOptimal;
    sol.nodes = processed_;
    sol.trace = std::move(trace_);
    sol.wallTime = seconds_since(start);
    return sol;
  }

 private:
  // Chord of t -> d t - t^2 on [l, u] is (d - l - u) t + l u.
  bool relax(Node& node, std::int64_t parent) {
    lp_.lower = node.lower;
    lp_.upper = node.upper;
    lp_.c = d_ - (node.lower + node.upper).array();
    const double constant = node.lower.dot(node.upper);
    const LpResult res = solve_lp(lp_);
    ++processed_;
    if (res.status != LpStatus::Optimal) {
      if (cfg_.recordTrace) trace_.push_back({node.id, parent, INFINITY});
      return false;
    }
    node.point = res.x.cwiseMax(node.lower).cwiseMin(node.upper);
    node.lowerBound = res.value + constant;
    if (cfg_.recordTrace) trace_.push_back({node.id, parent, node.lowerBound});

    offerIncumbent(node.point);
    Vector rounded = node.point.unaryExpr([&](double v) { return v >= d_ / 2.0 ? d_ : 0.0; });
    if (is_member(rounded, poly_)) offerIncumbent(rounded);
    return true;
  }

  void offerIncumbent(const Vector& x) {
    const double value = objective_cqp(x, d_);
    if (value < incumbentValue_) {
      incumbentValue_ = value;
      incumbent_ = x;
    }
  }

  // Widest chord gap (u-l)^2/4 among coordinates where the relaxation is not
  // already exact at the relaxation point; lowest index on ties.
  int branchCoordinate(const Node& node) const {
    int best = -1;
    double bestGap = 0.0;
    for (int i = 0; i < node.point.size(); ++i) {
      const double l = node.lower(i);
      const double u = node.upper(i);
      const double t = node.point(i);
      if ((t - l) * (u - t) <= 0.0) continue;
      const double gap = (u - l) * (u - l) / 4.0;
      if (gap > bestGap) {
        bestGap = gap;
        best = i;
      }
    }
    return best;
  }

  const Polytope& poly_;
  double d_;
  BnbConfig cfg_;
  LpProblem lp_;
  Vector incumbent_;
  double incumbentValue_ = INFINITY;
  std::int64_t processed_ = 0;
  std::int64_t nextId_ = 1;
  std::vector<NodeRecord> trace_;
};

}  // namespace

Solution solve_cqp(const Polytope& poly, double d, const BnbConfig& cfg) {
  if (!(cfg.absGap > 0.0)) throw InvalidArgument("absGap must be positive");
  if (!(d > 0.0)) throw InvalidArgument("d must be positive");
  for (int i = 0; i < poly.n(); ++i) {
    if (poly.lower(i) < 0.0 || !std::isfinite(poly.upper(i)) || poly.upper(i) > d) {
      throw InvalidArgument("concave program requires box bounds within [0, d]");
    }
  }
  BranchAndBound bnb(poly, d, cfg);
  return bnb.run();
}

namespace {

class VertexEnumerator {
 public:
  VertexEnumerator(const Polytope& poly, double d) : poly_(poly), d_(d), n_(poly.n()), p_(poly.rows()) {}

  Solution run() {
    state_.assign(static_cast<std::size_t>(n_), 0);
    assignCoordinate(0);
    Solution sol;
    sol.nodes = visited_;
    if (found_) {
      sol.x = best_;
      sol.objective = bestValue_;
      sol.lowerBound = bestValue_;
      sol.status = SolveStatus::GlobalOptimal;
    }
    return sol;
  }

 private:
  // state: 0 = at lower bound, 1 = at upper bound, 2 = determined by active rows.
  void assignCoordinate(int i) {
    if (i == n_) {
      chooseRows();
      return;
    }
    if (std::isfinite(poly_.lower(i))) {
      state_[i] = 0;
      assignCoordinate(i + 1);
    }
    if (std::isfinite(poly_.upper(i)) && poly_.upper(i) != poly_.lower(i)) {
      state_[i] = 1;
      assignCoordinate(i + 1);
    }
    state_[i] = 2;
    assignCoordinate(i + 1);
  }

  void chooseRows() {
    freeIdx_.clear();
    for (int i = 0; i < n_; ++i)
      if (state_[i] == 2) freeIdx_.push_back(i);
    const int f = static_cast<int>(freeIdx_.size());
    if (f > p_) return;
    rows_.clear();
    pickRow(0, f);
  }

  void pickRow(int from, int remaining) {
    if (remaining == 0) {
      evaluate();
      return;
    }
    for (int r = from; r <= p_ - remaining; ++r) {
      rows_.push_back(r);
      pickRow(r + 1, remaining - 1);
      rows_.pop_back();
    }
  }

  void evaluate() {
    ++visited_;
    Vector x(n_);
    for (int i = 0; i < n_; ++i) {
      if (state_[i] == 0) x(i) = poly_.lower(i);
      else if (state_[i] == 1) x(i) = poly_.upper(i);
      else x(i) = 0.0;
    }
    const int f = static_cast<int>(freeIdx_.size());
    if (f > 0) {
      Matrix sub(f, f);
      Vector rhs(f);
      for (int a = 0; a < f; ++a) {
        const int r = rows_[a];
        rhs(a) = poly_.g(r) - poly_.C.row(r).dot(x);
        for (int b = 0; b < f; ++b) sub(a, b) = poly_.C(r, freeIdx_[b]);
      }
      Eigen::FullPivLU<Matrix> lu(sub);
      if (!lu.isInvertible()) return;
      const Vector xf = lu.solve(rhs);
      for (int b = 0; b < f; ++b) x(freeIdx_[b]) = xf(b);
    }
    if (!is_member(x, poly_)) return;
    const double value = objective_cqp(x, d_);
    if (!found_ || value < bestValue_ - 1e-12) {
      found_ = true;
      bestValue_ = value;
      best_ = x;
    }
  }

  const Polytope& poly_;
  double d_;
  int n_;
  int p_;
  std::vector<int> state_;
  std::vector<int> freeIdx_;
  std::vector<int> rows_;
  Vector best_;
  double bestValue_ = INFINITY;
  bool found_ = false;
  std::int64_t visited_ = 0;
};

}  // namespace

Solution oracle_vertex_min(const Polytope& poly, double d) {
  if (poly.n() > 12) throw DimensionTooLarge("vertex enumeration supports n <= 12");
  const auto start = Clock::now();
  VertexEnumerator vertices(poly, d);
  Solution sol = vertices.run();
  sol.wallTime = seconds_since(start);
  return sol;
}

Vector refine_on_support(const Observation& obs, const std::vector<int>& support) {
  const int n = obs.n();
  Vector x = Vector::Zero(n);
  if (support.empty()) return x;
  Matrix sub(obs.m(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t c = 0; c < support.size(); ++c) {
    const int idx = support[c];
    if (idx < 0 || idx >= n) throw InvalidDimension("support index " + std::to_string(idx) + " out of range");
    sub.col(static_cast<Eigen::Index>(c)) = obs.QA.col(idx);
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(sub);
  if (qr.rank() < static_cast<Eigen::Index>(support.size())) {
    throw RankDeficient("restricted matrix has rank " + std::to_string(qr.rank()) + " < support size " +
                        std::to_string(support.size()));
  }
  const Vector xs = qr.solve(obs.Qy);
  for (std::size_t c = 0; c < support.size(); ++c) x(support[c]) = xs(static_cast<Eigen::Index>(c));
  return x;
}

}  // namespace sparsecqp
