#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include <Eigen/Dense>

namespace sparsecqp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Magnitude prior: every nonzero parameter lies in [alpha, beta].
class MagnitudePrior {
 public:
  MagnitudePrior(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  /// Midpoint (alpha + beta) / 2, used as the box width of the concave program.
  double d() const { return d_; }

 private:
  double alpha_;
  double beta_;
  double d_;
};

/// Uniform symmetric quantizer with `levels` equidistant points on [-range, range].
///
/// `bound` is the perturbation bound advertised to the feasible set. It defaults
/// to step/2 (the nearest-point guarantee) and may be set larger, e.g. to a full
/// step.
class QuantSpec {
 public:
  QuantSpec(std::int64_t levels, double range, std::optional<double> bound = {});

  /// Codebook of `levels` points whose half-width is the largest |entry| of
  /// `data` (1 if the data are all zero).
  static QuantSpec covering(std::int64_t levels, std::span<const double> data,
                            bool fullStepBound = false);

  /// Codebook made of the multiples of `step` that cover `data`.
  static QuantSpec multiplesOf(double step, std::span<const double> data,
                               std::optional<double> bound = {});

  std::int64_t levels() const { return levels_; }
  double range() const { return range_; }
  double step() const { return step_; }
  double bound() const { return bound_; }

  /// j-th codebook point, j in [0, levels).
  double point(std::int64_t j) const;

 private:
  std::int64_t levels_;
  double range_;
  double step_;
  double bound_;
};

/// Ground truth: y = A * xTrue with a k-sparse xTrue.
struct Instance {
  Matrix A;
  Vector xTrue;
  Vector y;
  int k = 0;
  std::optional<MagnitudePrior> prior;
  std::optional<std::uint64_t> seed;

  int n() const { return static_cast<int>(A.cols()); }
  int m() const { return static_cast<int>(A.rows()); }

  /// Builds an instance from A and xTrue; y and k are derived.
  static Instance fromTruth(Matrix A, Vector xTrue);
};

/// Quantized data with perturbation bounds and magnitude prior.
struct Observation {
  Matrix QA;
  Vector Qy;
  double deltaA = 0.0;
  double deltaY = 0.0;
  MagnitudePrior prior{1.0, 1.0};

  int n() const { return static_cast<int>(QA.cols()); }
  int m() const { return static_cast<int>(QA.rows()); }
};

/// Nearest codebook point; midpoints go to the point closer to zero.
/// Throws SaturationError if |v| > spec.range().
double quantize_value(double v, const QuantSpec& spec);

Observation quantize(const Instance& inst, const QuantSpec& specA, const QuantSpec& specY,
                     const MagnitudePrior& prior);

/// Random instance: A_ij ~ N(0, 1/m), uniformly random k-subset support,
/// nonzeros uniform on [alpha, beta]. Deterministic given the seed.
Instance generate(int n, int m, int k, const MagnitudePrior& prior, std::uint64_t seed);

inline std::span<const double> values(const Matrix& M) { return {M.data(), static_cast<std::size_t>(M.size())}; }
inline std::span<const double> values(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace sparsecqp
