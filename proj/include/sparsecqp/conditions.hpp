#pragma once

#include <string_view>

#include "sparsecqp/model.hpp"

namespace sparsecqp {

enum class Proposition { P1, P2, P3 };

std::string_view to_string(Proposition p);

/// Outcome of a sufficient-condition check.
///
/// `margin` is min ||sum_i gamma_i col_i||_inf over the admissible gamma set
/// minus `threshold`; the condition holds iff margin > 0. `worstGamma` attains
/// that minimum (for the literal Prop. 2/3 reading with alpha < beta the
/// infimum is not attained and a vanishing gamma is reported instead).
struct ConditionReport {
  Proposition proposition = Proposition::P1;
  bool holds = false;
  double margin = 0.0;
  double threshold = 0.0;
  Vector worstGamma;
};

/// Which gamma vectors Propositions 2 and 3 quantify over.
enum class GammaSet {
  /// At least one coordinate in {-d} or [alpha, beta]: the differences
  /// x_true - z with z a {0, d} corner of a different support.
  SupportMismatch,
  /// Every non-null gamma in Q^n.
  Literal,
};

inline constexpr int kMaxConditionDim = 12;

/// min over non-null gamma in {0, +-1}^n of ||A gamma||_inf against 2 deltaY / d.
ConditionReport check_prop1(const Matrix& A, double d, double deltaY);

/// Same minimization over gamma in Q^n, Q = {-d} u [(a-b)/2, (b-a)/2] u [a, b],
/// against 2 deltaY. Each of the 3^n piece assignments is an LP.
ConditionReport check_prop2(const Matrix& A, const MagnitudePrior& prior, double deltaY,
                            GammaSet set = GammaSet::SupportMismatch);

/// check_prop2 on the quantized matrix with threshold 2 deltaY + deltaA * beta * n.
ConditionReport check_prop3(const Matrix& QA, const MagnitudePrior& prior, double deltaY, double deltaA,
                            GammaSet set = GammaSet::SupportMismatch);

}  // namespace sparsecqp
