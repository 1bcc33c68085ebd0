#include "sparsecqp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "sparsecqp/errors.hpp"

namespace sparsecqp {

MagnitudePrior::MagnitudePrior(double alpha, double beta)
    : alpha_(alpha), beta_(beta), d_((alpha + beta) / 2.0) {
  if (!(alpha > 0.0) || !(beta >= alpha) || !std::isfinite(beta)) {
    throw InvalidArgument("magnitude prior requires 0 < alpha <= beta, got [" +
                          std::to_string(alpha) + ", " + std::to_string(beta) + "]");
  }
}

QuantSpec::QuantSpec(std::int64_t levels, double range, std::optional<double> bound)
    : levels_(levels), range_(range) {
  if (levels < 2) throw InvalidArgument("quantizer needs at least 2 levels");
  if (!(range > 0.0) || !std::isfinite(range)) throw InvalidArgument("quantizer range must be positive");
  step_ = 2.0 * range / static_cast<double>(levels - 1);
  bound_ = bound.value_or(step_ / 2.0);
  if (!(bound_ >= step_ / 2.0)) {
    throw InvalidArgument("quantization bound must be at least step/2");
  }
}

namespace {

double max_abs(std::span<const double> data) {
  double r = 0.0;
  for (double v : data) r = std::max(r, std::abs(v));
  return r;
}

}  // namespace

QuantSpec QuantSpec::covering(std::int64_t levels, std::span<const double> data, bool fullStepBound) {
  double range = max_abs(data);
  if (range == 0.0) range = 1.0;
  QuantSpec spec(levels, range);
  if (fullStepBound) spec.bound_ = spec.step_;
  return spec;
}

QuantSpec QuantSpec::multiplesOf(double step, std::span<const double> data, std::optional<double> bound) {
  if (!(step > 0.0)) throw InvalidArgument("quantization step must be positive");
  auto cells = static_cast<std::int64_t>(std::ceil(max_abs(data) / step - 1e-9));
  cells = std::max<std::int64_t>(cells, 1);
  QuantSpec spec(2 * cells + 1, static_cast<double>(cells) * step, bound);
  return spec;
}

double QuantSpec::point(std::int64_t j) const {
  // Written so that point(levels-1-j) == -point(j) bit for bit.
  const auto denom = static_cast<double>(levels_ - 1);
  return range_ * (static_cast<double>(2 * j - (levels_ - 1)) / denom);
}

double quantize_value(double v, const QuantSpec& spec) {
  if (!(std::abs(v) <= spec.range())) {
    throw SaturationError("value " + std::to_string(v) + " outside quantizer range " +
                          std::to_string(spec.range()));
  }
  const auto last = spec.levels() - 1;
  const auto guess = static_cast<std::int64_t>(std::floor((v + spec.range()) / spec.step()));
  double best = 0.0;
  double bestDist = INFINITY;
  // Rounding in the index guess can be off by one either way.
  for (auto j = guess - 1; j <= guess + 2; ++j) {
    if (j < 0 || j > last) continue;
    const double p = spec.point(j);
    const double dist = std::abs(v - p);
    if (dist < bestDist || (dist == bestDist && std::abs(p) < std::abs(best))) {
      best = p;
      bestDist = dist;
    }
  }
  return best;
}

Observation quantize(const Instance& inst, const QuantSpec& specA, const QuantSpec& specY,
                     const MagnitudePrior& prior) {
  Observation obs;
  obs.QA = inst.A.unaryExpr([&](double v) { return quantize_value(v, specA); });
  obs.Qy = inst.y.unaryExpr([&](double v) { return quantize_value(v, specY); });
  obs.deltaA = specA.bound();
  obs.deltaY = specY.bound();
  obs.prior = prior;
  return obs;
}

Instance Instance::fromTruth(Matrix A, Vector xTrue) {
  if (A.cols() != xTrue.size()) throw InvalidDimension("A has " + std::to_string(A.cols()) +
                                                       " columns but xTrue has length " +
                                                       std::to_string(xTrue.size()));
  Instance inst;
  inst.y = A * xTrue;
  inst.k = static_cast<int>((xTrue.array() != 0.0).count());
  inst.A = std::move(A);
  inst.xTrue = std::move(xTrue);
  return inst;
}

Instance generate(int n, int m, int k, const MagnitudePrior& prior, std::uint64_t seed) {
  if (n < 1 || m < 1) throw InvalidDimension("n and m must be positive");
  if (k < 0 || k > n) throw InvalidDimension("k exceeds n");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(1.0 / m));
  std::uniform_real_distribution<double> magnitude(prior.alpha(), prior.beta());

  Matrix A(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);

  // Partial Fisher-Yates: the first k slots form a uniform k-subset.
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
  }
  Vector x = Vector::Zero(n);
  for (int i = 0; i < k; ++i) {
    x(idx[static_cast<std::size_t>(i)]) = prior.alpha() == prior.beta() ? prior.alpha() : magnitude(rng);
  }

  Instance inst = Instance::fromTruth(std::move(A), std::move(x));
  inst.k = k;
  inst.prior = prior;
  inst.seed = seed;
  return inst;
}

}  // namespace sparsecqp
