#include <doctest.h>

#include <random>

#include "sparsecqp/errors.hpp"
#include "sparsecqp/feasible.hpp"
#include "support/oracles.hpp"

using namespace sparsecqp;

namespace {

Observation two_column_example() {
  Observation obs;
  obs.QA.resize(1, 2);
  obs.QA << 0.2, 1.2;
  obs.Qy.resize(1);
  obs.Qy << 0.2;
  obs.deltaA = 0.1;
  obs.deltaY = 0.1;
  obs.prior = MagnitudePrior(1.0, 1.0);
  return obs;
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Observation random_observation(std::uint64_t seed, std::int64_t levels, bool full = false) {
  const MagnitudePrior prior(0.8, 1.2);
  const Instance inst = generate(10, 4, 2, prior, seed);
  return quantize(inst, QuantSpec::covering(levels, values(inst.A), full),
                  QuantSpec::covering(levels, values(inst.y), full), prior);
}

}  // namespace

TEST_CASE("polytope of the two-column example") {
  const Polytope poly = build_polytope(two_column_example(), Vector::Ones(2));
  REQUIRE(poly.C.rows() == 2);
  CHECK(poly.C(0, 0) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(poly.C(0, 1) == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(poly.C(1, 0) == doctest::Approx(-0.3).epsilon(1e-15));
  CHECK(poly.C(1, 1) == doctest::Approx(-1.3).epsilon(1e-15));
  CHECK(poly.g(0) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(poly.g(1) == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(poly.lower.isZero(0));
  CHECK(poly.upper == Vector::Ones(2));
}

TEST_CASE("zero perturbation forces A x = y") {
  const Instance inst = generate(6, 3, 2, MagnitudePrior(1.0, 1.0), 4);
  Observation obs;
  obs.QA = inst.A;
  obs.Qy = inst.y;
  obs.deltaA = 0.0;
  obs.deltaY = 0.0;
  const Polytope poly = build_l1_polytope(obs);
  CHECK(poly.C.topRows(3) == inst.A);
  CHECK(poly.C.bottomRows(3) == -inst.A);
  CHECK(poly.g.head(3) == inst.y);
  CHECK(poly.g.tail(3) == -inst.y);
  CHECK(is_member(inst.xTrue, poly, 1e-12));
  Vector off = inst.xTrue;
  off(0) += 1e-3;
  CHECK_FALSE(is_member(off, poly, 1e-9));
}

TEST_CASE("cqp and l1 boxes") {
  Observation obs = random_observation(3, 500);
  const Polytope cqp = build_cqp_polytope(obs);
  CHECK(cqp.upper == Vector::Constant(10, 1.0));
  const Polytope l1 = build_l1_polytope(obs);
  CHECK(l1.upper.array().isInf().all());
  CHECK(cqp.C.rows() == 8);
  CHECK(cqp.C.cols() == 10);
}

TEST_CASE("second row block mirrors the first") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Observation obs = random_observation(seed, 100 + 50 * static_cast<std::int64_t>(seed), seed % 2);
    const Polytope poly = build_cqp_polytope(obs);
    const int m = obs.m();
    for (int j = 0; j < m; ++j) {
      const Vector expected = -poly.C.row(j).transpose() - Vector::Constant(obs.n(), 2.0 * obs.deltaA);
      REQUIRE((poly.C.row(m + j).transpose() - expected).cwiseAbs().maxCoeff() <= 1e-15);
      REQUIRE(std::abs(poly.g(m + j) - (-poly.g(j) + 2.0 * obs.deltaY)) <= 1e-15);
    }
  }
}

TEST_CASE("membership in the two-column example") {
  const Polytope poly = build_polytope(two_column_example(), Vector::Ones(2));
  CHECK(is_member(vec2(1.0, 0.0), poly));
  CHECK(is_member(vec2(0.0, 0.0769231), poly));
  CHECK_FALSE(is_member(vec2(0.0, 0.0), poly));
  CHECK_FALSE(is_member(vec2(0.0, 1.0), poly));
  CHECK_FALSE(is_member(vec2(1.5, 0.0), poly));  // outside the box
  CHECK(max_violation(vec2(0.0, 0.0), poly) == doctest::Approx(0.1));
}

TEST_CASE("membership validates input") {
  const Polytope poly = build_polytope(two_column_example(), Vector::Ones(2));
  CHECK_THROWS_AS(is_member(Vector::Zero(3), poly), InvalidDimension);
  CHECK_THROWS_AS(is_member(Vector::Zero(2), poly, -1.0), InvalidArgument);
  Observation bad = two_column_example();
  bad.deltaA = -0.1;
  CHECK_THROWS_AS(build_cqp_polytope(bad), InvalidArgument);
  CHECK_THROWS_AS(build_polytope(two_column_example(), Vector::Ones(3)), InvalidDimension);
}

TEST_CASE("the truth is always feasible") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const MagnitudePrior prior(1.0, 1.0);
    const Instance inst = generate(10, 4, 2, prior, seed);
    const std::int64_t levels = 100 + 20 * static_cast<std::int64_t>(seed);
    const Observation obs = quantize(inst, QuantSpec::covering(levels, values(inst.A), seed % 2),
                                     QuantSpec::covering(levels, values(inst.y), seed % 2), prior);
    REQUIRE(is_member(inst.xTrue, build_cqp_polytope(obs), 1e-12));
    REQUIRE(is_member(inst.xTrue, build_l1_polytope(obs), 1e-12));
  }
}

TEST_CASE("row form and residual form of membership agree") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const Observation obs = random_observation(static_cast<std::uint64_t>(t % 25), 60);
    const Polytope poly = build_l1_polytope(obs);
    // Scale so that roughly half of the draws are feasible.
    Vector x(10);
    for (int i = 0; i < 10; ++i) x(i) = u(rng) < 0.7 ? 0.0 : 2.0 * u(rng);
    REQUIRE(is_member(x, poly, 0.0) == testing::member_residual_form(x, obs, 0.0));
  }
}
