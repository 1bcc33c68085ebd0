#include "sparsecqp/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sparsecqp/errors.hpp"
#include "sparsecqp/lp.hpp"

namespace sparsecqp {

std::string_view to_string(Proposition p) {
  switch (p) {
    case Proposition::P1:
      return "P1";
    case Proposition::P2:
      return "P2";
    case Proposition::P3:
      return "P3";
  }
  return "?";
}

namespace {

void require_enumerable(const Matrix& A) {
  if (A.cols() > kMaxConditionDim) {
    throw DimensionTooLarge("condition checks enumerate 3^n patterns; n = " + std::to_string(A.cols()) +
                            " exceeds " + std::to_string(kMaxConditionDim));
  }
  if (A.cols() < 1 || A.rows() < 1) throw InvalidDimension("condition checks need a non-empty matrix");
}

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Mixed-radix odometer over {0, 1, 2}^n, coordinate 0 least significant.
bool advance(std::vector<int>& digits) {
  for (int& digit : digits) {
    if (++digit < 3) return true;
    digit = 0;
  }
  return false;
}

ConditionReport finish(Proposition prop, const Matrix& cols, const Vector& gamma, double threshold) {
  ConditionReport rep;
  rep.proposition = prop;
  rep.threshold = threshold;
  rep.worstGamma = gamma;
  rep.margin = inf_norm(cols * gamma) - threshold;
  rep.holds = rep.margin > 0.0;
  return rep;
}

struct PieceBox {
  double lower;
  double upper;
};

// Minimizes ||cols * gamma||_inf over the admissible part of Q^n.
ConditionReport minimize_over_pieces(Proposition prop, const Matrix& cols, const MagnitudePrior& prior,
                                     double threshold, GammaSet set) {
  require_enumerable(cols);
  const int n = static_cast<int>(cols.cols());
  const int m = static_cast<int>(cols.rows());
  const double d = prior.d();
  const double half = (prior.beta() - prior.alpha()) / 2.0;
  const PieceBox pieces[3] = {{-d, -d}, {-half, half}, {prior.alpha(), prior.beta()}};

  // min t  s.t.  -t <= cols * gamma <= t,  gamma in the piece box,  t >= 0.
  LpProblem lp;
  lp.c = Vector::Zero(n + 1);
  lp.c(n) = 1.0;
  lp.A.resize(2 * m, n + 1);
  lp.A.topLeftCorner(m, n) = cols;
  lp.A.bottomLeftCorner(m, n) = -cols;
  lp.A.col(n).setConstant(-1.0);
  lp.b = Vector::Zero(2 * m);
  lp.lower.resize(n + 1);
  lp.upper.resize(n + 1);
  lp.lower(n) = 0.0;
  lp.upper(n) = INFINITY;

  double best = INFINITY;
  Vector bestGamma;
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  do {
    const bool mismatch = std::any_of(digits.begin(), digits.end(), [](int p) { return p != 1; });
    if (!mismatch) {
      // All coordinates in the middle interval. Only the literal reading
      // admits it, and only when the interval is not {0}.
      if (set == GammaSet::Literal && half > 0.0) {
        Vector gamma = Vector::Zero(n);
        gamma(0) = std::min(1e-12, half);
        const double value = inf_norm(cols * gamma);
        if (value < best) {
          best = value;
          bestGamma = gamma;
        }
      }
      continue;
    }

    bool allFixed = true;
    for (int i = 0; i < n; ++i) {
      const PieceBox& box = pieces[digits[i]];
      lp.lower(i) = box.lower;
      lp.upper(i) = box.upper;
      allFixed = allFixed && box.lower == box.upper;
    }
    Vector gamma;
    double value;
    if (allFixed) {
      gamma = lp.lower.head(n);
      value = inf_norm(cols * gamma);
    } else {
      const LpResult res = solve_lp(lp);
      if (res.status != LpStatus::Optimal) throw NumericalFailure("piece LP did not reach an optimum");
      gamma = res.x.head(n);
      value = inf_norm(cols * gamma);
    }
    if (value < best) {
      best = value;
      bestGamma = std::move(gamma);
    }
  } while (advance(digits));

  return finish(prop, cols, bestGamma, threshold);
}

}  // namespace

ConditionReport check_prop1(const Matrix& A, double d, double deltaY) {
  require_enumerable(A);
  if (!(d > 0.0)) throw InvalidArgument("d must be positive");
  if (!(deltaY >= 0.0)) throw InvalidArgument("deltaY must be nonnegative");
  const int n = static_cast<int>(A.cols());
  constexpr double kSign[3] = {0.0, 1.0, -1.0};

  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  Vector gamma(n);
  Vector bestGamma;
  double best = INFINITY;
  while (advance(digits)) {
    for (int i = 0; i < n; ++i) gamma(i) = kSign[digits[i]];
    const double value = inf_norm(A * gamma);
    if (value < best) {
      best = value;
      bestGamma = gamma;
    }
  }
  return finish(Proposition::P1, A, bestGamma, 2.0 * deltaY / d);
}

ConditionReport check_prop2(const Matrix& A, const MagnitudePrior& prior, double deltaY, GammaSet set) {
  if (!(deltaY >= 0.0)) throw InvalidArgument("deltaY must be nonnegative");
  return minimize_over_pieces(Proposition::P2, A, prior, 2.0 * deltaY, set);
}

ConditionReport check_prop3(const Matrix& QA, const MagnitudePrior& prior, double deltaY, double deltaA,
                            GammaSet set) {
  if (!(deltaY >= 0.0) || !(deltaA >= 0.0)) throw InvalidArgument("perturbation bounds must be nonnegative");
  const double threshold = 2.0 * deltaY + deltaA * prior.beta() * static_cast<double>(QA.cols());
  return minimize_over_pieces(Proposition::P3, QA, prior, threshold, set);
}

}  // namespace sparsecqp
