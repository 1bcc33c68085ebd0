#include "sparsecqp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "sparsecqp/errors.hpp"

namespace sparsecqp {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal:
      return "Optimal";
    case LpStatus::Infeasible:
      return "Infeasible";
    case LpStatus::Unbounded:
      return "Unbounded";
  }
  return "?";
}

namespace {

enum class VarState { Basic, AtLower, AtUpper, FreeZero };

constexpr int kRefactorEvery = 50;
constexpr double kRatioTie = 1e-12;

// Equality form  [A | I | -E] (x, s, t) = b  with slacks s >= 0 and artificials
// t >= 0 attached only to rows that start out violated.
class BoundedSimplex {
 public:
  BoundedSimplex(const LpProblem& prob, const LpOptions& opts) : prob_(prob), opts_(opts) {
    n_ = static_cast<int>(prob.c.size());
    p_ = static_cast<int>(prob.A.rows());
    validate();

    x_.resize(n_ + p_);
    lo_.resize(n_ + p_);
    hi_.resize(n_ + p_);
    state_.assign(static_cast<std::size_t>(n_ + p_), VarState::AtLower);
    for (int j = 0; j < n_; ++j) {
      lo_(j) = prob.lower(j);
      hi_(j) = prob.upper(j);
      if (std::isfinite(lo_(j))) {
        x_(j) = lo_(j);
        state_[j] = VarState::AtLower;
      } else if (std::isfinite(hi_(j))) {
        x_(j) = hi_(j);
        state_[j] = VarState::AtUpper;
      } else {
        x_(j) = 0.0;
        state_[j] = VarState::FreeZero;
      }
    }
    for (int i = 0; i < p_; ++i) {
      lo_(n_ + i) = 0.0;
      hi_(n_ + i) = INFINITY;
    }

    const Vector residual = p_ > 0 ? Vector(prob.b - prob.A * x_.head(n_)) : Vector(0);
    std::vector<int> artificialRows;
    for (int i = 0; i < p_; ++i)
      if (residual(i) < 0.0) artificialRows.push_back(i);
    const int nArt = static_cast<int>(artificialRows.size());
    total_ = n_ + p_ + nArt;

    aeq_ = Matrix::Zero(p_, total_);
    if (p_ > 0) aeq_.leftCols(n_) = prob.A;
    for (int i = 0; i < p_; ++i) aeq_(i, n_ + i) = 1.0;

    x_.conservativeResize(total_);
    lo_.conservativeResize(total_);
    hi_.conservativeResize(total_);
    state_.resize(static_cast<std::size_t>(total_), VarState::AtLower);
    basis_.assign(static_cast<std::size_t>(p_), -1);
    for (int i = 0; i < p_; ++i) {
      x_(n_ + i) = std::max(residual(i), 0.0);
      basis_[i] = n_ + i;
      state_[n_ + i] = VarState::Basic;
    }
    for (int a = 0; a < nArt; ++a) {
      const int row = artificialRows[a];
      const int col = n_ + p_ + a;
      aeq_(row, col) = -1.0;
      lo_(col) = 0.0;
      hi_(col) = INFINITY;
      x_(col) = -residual(row);
      state_[n_ + row] = VarState::AtLower;
      x_(n_ + row) = 0.0;
      state_[col] = VarState::Basic;
      basis_[row] = col;
    }
    firstArtificial_ = n_ + p_;
    refactor();
  }

  LpResult run() {
    LpResult result;
    if (total_ > firstArtificial_) {
      Vector phaseOne = Vector::Zero(total_);
      phaseOne.tail(total_ - firstArtificial_).setOnes();
      iterate(phaseOne, true);
      const double infeasibility = x_.tail(total_ - firstArtificial_).sum();
      const double scale = std::max(1.0, p_ > 0 ? prob_.b.cwiseAbs().maxCoeff() : 0.0);
      if (infeasibility > opts_.feasibilityTol * scale) {
        result.status = LpStatus::Infeasible;
        result.iterations = iterations_;
        result.basis = basis_;
        dump(result);
        return result;
      }
      for (int j = firstArtificial_; j < total_; ++j) {
        hi_(j) = 0.0;
        if (state_[j] != VarState::Basic) {
          x_(j) = 0.0;
          state_[j] = VarState::AtLower;
        }
      }
      refactor();
    }

    Vector cost = Vector::Zero(total_);
    cost.head(n_) = prob_.c;
    const bool bounded = iterate(cost, false);
    result.iterations = iterations_;
    result.basis = basis_;
    result.x = x_.head(n_);
    if (!bounded) {
      result.status = LpStatus::Unbounded;
      result.value = -INFINITY;
      dump(result);
      return result;
    }
    result.status = LpStatus::Optimal;
    result.value = prob_.c.dot(result.x);
    result.duals = duals_;
    result.reducedCosts = prob_.c - (p_ > 0 ? Vector(prob_.A.transpose() * duals_) : Vector::Zero(n_));
    dump(result);
    return result;
  }

 private:
  void validate() const {
    if (prob_.lower.size() != n_ || prob_.upper.size() != n_ || prob_.A.cols() != n_ ||
        prob_.b.size() != p_) {
      throw InvalidDimension("LP data dimensions are inconsistent");
    }
    for (int j = 0; j < n_; ++j) {
      if (prob_.lower(j) > prob_.upper(j)) throw InvalidArgument("LP bound lower > upper");
      if (prob_.lower(j) == INFINITY || prob_.upper(j) == -INFINITY) {
        throw InvalidArgument("LP bound excludes every finite value");
      }
    }
    if (!prob_.c.allFinite() || !prob_.A.allFinite() || !prob_.b.allFinite()) {
      throw InvalidArgument("LP data must be finite");
    }
  }

  // Recomputes the tableau, basic values and duals from the original columns.
  void refactor() {
    if (p_ == 0) {
      tableau_.resize(0, total_);
      duals_.resize(0);
      return;
    }
    Matrix B(p_, p_);
    for (int r = 0; r < p_; ++r) B.col(r) = aeq_.col(basis_[r]);
    Eigen::FullPivLU<Matrix> lu(B);
    if (!lu.isInvertible()) throw NumericalFailure("simplex basis became singular");
    tableau_ = lu.solve(aeq_);
    Vector rhs = prob_.b;
    for (int j = 0; j < total_; ++j)
      if (state_[j] != VarState::Basic && x_(j) != 0.0) rhs -= aeq_.col(j) * x_(j);
    const Vector xb = lu.solve(rhs);
    for (int r = 0; r < p_; ++r) x_(basis_[r]) = xb(r);
    sinceRefactor_ = 0;
  }

  void computeDuals(const Vector& cost) {
    if (p_ == 0) return;
    Vector cb(p_);
    for (int r = 0; r < p_; ++r) cb(r) = cost(basis_[r]);
    Matrix B(p_, p_);
    for (int r = 0; r < p_; ++r) B.col(r) = aeq_.col(basis_[r]);
    duals_ = B.transpose().fullPivLu().solve(cb);
  }

  // Returns false if the objective is unbounded below.
  bool iterate(const Vector& cost, bool phaseOne) {
    const int blandAfter = 10 * (p_ + n_);
    const int limit = 200 * (p_ + total_) + 1000;
    bool verified = false;
    int local = 0;
    while (true) {
      if (iterations_ > limit) throw NumericalFailure("simplex iteration limit exceeded");
      const bool bland = local >= blandAfter;

      Vector reduced = cost;
      for (int r = 0; r < p_; ++r) {
        const double cb = cost(basis_[r]);
        if (cb != 0.0) reduced -= cb * tableau_.row(r).transpose();
      }

      int entering = -1;
      double enteringScore = 0.0;
      int direction = 0;
      for (int j = 0; j < total_; ++j) {
        const VarState s = state_[j];
        if (s == VarState::Basic || lo_(j) == hi_(j)) continue;
        int dir = 0;
        if (s == VarState::AtLower && reduced(j) < -opts_.optimalityTol) dir = 1;
        else if (s == VarState::AtUpper && reduced(j) > opts_.optimalityTol) dir = -1;
        else if (s == VarState::FreeZero && std::abs(reduced(j)) > opts_.optimalityTol)
          dir = reduced(j) < 0.0 ? 1 : -1;
        if (dir == 0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(reduced(j)) > enteringScore) {
          enteringScore = std::abs(reduced(j));
          entering = j;
          direction = dir;
        }
      }

      if (entering < 0) {
        if (verified || sinceRefactor_ == 0) {
          computeDuals(cost);
          return true;
        }
        refactor();
        verified = true;
        continue;
      }
      verified = false;

      // Ratio test.
      double theta = INFINITY;
      int leavingRow = -1;
      double leavingPivot = 0.0;
      if (std::isfinite(lo_(entering)) && std::isfinite(hi_(entering))) theta = hi_(entering) - lo_(entering);
      for (int r = 0; r < p_; ++r) {
        const double alpha = tableau_(r, entering);
        if (std::abs(alpha) <= opts_.pivotTol) continue;
        const int b = basis_[r];
        const double change = -direction * alpha;
        double ratio = INFINITY;
        if (change < 0.0 && std::isfinite(lo_(b))) ratio = std::max(0.0, (x_(b) - lo_(b)) / -change);
        else if (change > 0.0 && std::isfinite(hi_(b))) ratio = std::max(0.0, (hi_(b) - x_(b)) / change);
        if (!std::isfinite(ratio)) continue;
        if (ratio < theta - kRatioTie) {
          theta = ratio;
          leavingRow = r;
          leavingPivot = alpha;
        } else if (leavingRow >= 0 && ratio <= theta + kRatioTie &&
                   (bland ? b < basis_[leavingRow] : std::abs(alpha) > std::abs(leavingPivot))) {
          theta = std::min(theta, ratio);
          leavingRow = r;
          leavingPivot = alpha;
        }
      }

      if (!std::isfinite(theta)) {
        if (phaseOne) throw NumericalFailure("phase-one problem reported unbounded");
        return false;
      }

      ++iterations_;
      ++local;
      ++sinceRefactor_;

      const bool flip = leavingRow < 0;
      const double step = direction * theta;
      if (step != 0.0) {
        for (int r = 0; r < p_; ++r) x_(basis_[r]) -= step * tableau_(r, entering);
      }
      if (flip) {
        if (direction > 0) {
          x_(entering) = hi_(entering);
          state_[entering] = VarState::AtUpper;
        } else {
          x_(entering) = lo_(entering);
          state_[entering] = VarState::AtLower;
        }
        continue;
      }

      x_(entering) += step;
      const int leaving = basis_[leavingRow];
      const double change = -direction * leavingPivot;
      if (change < 0.0) {
        x_(leaving) = lo_(leaving);
        state_[leaving] = VarState::AtLower;
      } else {
        x_(leaving) = hi_(leaving);
        state_[leaving] = VarState::AtUpper;
      }
      pivot(leavingRow, entering);
      basis_[leavingRow] = entering;
      state_[entering] = VarState::Basic;

      if (sinceRefactor_ >= kRefactorEvery) refactor();
    }
  }

  void pivot(int row, int col) {
    const double piv = tableau_(row, col);
    if (std::abs(piv) <= opts_.pivotTol) throw NumericalFailure("pivot magnitude below tolerance");
    tableau_.row(row) /= piv;
    for (int r = 0; r < p_; ++r) {
      if (r == row) continue;
      const double f = tableau_(r, col);
      if (f != 0.0) tableau_.row(r) -= f * tableau_.row(row);
    }
  }

  void dump(const LpResult& result) const {
    if (opts_.debug == nullptr) return;
    std::ostream& os = *opts_.debug;
    os << "status " << to_string(result.status) << " iterations " << result.iterations << '\n';
    os << "basis";
    for (int b : basis_) os << ' ' << b;
    os << '\n';
    for (int j = 0; j < total_; ++j) {
      const char* tag = state_[j] == VarState::Basic     ? "B"
                        : state_[j] == VarState::AtLower ? "L"
                        : state_[j] == VarState::AtUpper ? "U"
                                                         : "F";
      os << "  col " << j << ' ' << tag << ' ' << x_(j) << '\n';
    }
  }

  const LpProblem& prob_;
  const LpOptions& opts_;
  int n_ = 0;
  int p_ = 0;
  int total_ = 0;
  int firstArtificial_ = 0;
  int iterations_ = 0;
  int sinceRefactor_ = 0;
  Matrix aeq_;
  Matrix tableau_;
  Vector x_;
  Vector lo_;
  Vector hi_;
  Vector duals_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
};

}  // namespace

LpResult solve_lp(const LpProblem& prob, const LpOptions& opts) {
  BoundedSimplex simplex(prob, opts);
  return simplex.run();
}

}  // namespace sparsecqp
