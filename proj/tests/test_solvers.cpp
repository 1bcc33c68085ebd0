#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "sparsecqp/conditions.hpp"
#include "sparsecqp/errors.hpp"
#include "sparsecqp/solvers.hpp"
#include "support/oracles.hpp"

using namespace sparsecqp;

namespace {

Observation two_column_example(double delta = 0.1) {
  Observation obs;
  obs.QA.resize(1, 2);
  obs.QA << 0.2, 1.2;
  obs.Qy.resize(1);
  obs.Qy << 0.2;
  obs.deltaA = delta;
  obs.deltaY = delta;
  obs.prior = MagnitudePrior(1.0, 1.0);
  return obs;
}

struct Case {
  Instance inst;
  Observation obs;
};

Case random_case(std::mt19937_64& rng, const MagnitudePrior& prior, bool full) {
  std::uniform_int_distribution<int> dimN(2, 6);
  const int n = dimN(rng);
  const int m = std::uniform_int_distribution<int>(1, std::min(3, n - 1))(rng);
  const int k = std::uniform_int_distribution<int>(0, std::min(2, n))(rng);
  const std::int64_t levels = std::uniform_int_distribution<std::int64_t>(20, 3000)(rng);
  Instance inst = generate(n, m, k, prior, rng());
  Observation obs = quantize(inst, QuantSpec::covering(levels, values(inst.A), full),
                             QuantSpec::covering(levels, values(inst.y), full), prior);
  return {std::move(inst), std::move(obs)};
}

}  // namespace

TEST_CASE("objective examples") {
  CHECK(objective_cqp(Vector::Zero(5), 1.0) == 0.0);
  Vector x = Vector::Zero(4);
  x(0) = 0.5;
  CHECK(objective_cqp(x, 1.0) == 0.25);
  testing::for_each_corner(5, 1.3, [](const Vector& z) { CHECK(objective_cqp(z, 1.3) == 0.0); });
}

TEST_CASE("objective floor and corner characterization") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10000; ++t) {
    const double d = 0.5 + u(rng);
    Vector x(6);
    for (int i = 0; i < 6; ++i) {
      const double r = u(rng);
      x(i) = r < 0.3 ? 0.0 : r < 0.6 ? d : d * u(rng);
    }
    const bool corner = ((x.array() == 0.0) || (x.array() == d)).all();
    const double f = objective_cqp(x, d);
    REQUIRE(f >= 0.0);
    REQUIRE((f == 0.0) == corner);
  }
}

TEST_CASE("chord underestimator validity") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10000; ++t) {
    const double d = 0.5 + u(rng);
    double l = d * u(rng), r = d * u(rng);
    if (l > r) std::swap(l, r);
    if (r - l < 1e-6) continue;
    const auto phi = [d](double s) { return d * s - s * s; };
    const auto chord = [&](double s) { return (d - l - r) * s + l * r; };
    const double s = l + (r - l) * u(rng);
    REQUIRE(chord(s) <= phi(s) + 1e-15);
    REQUIRE(std::abs(chord(s) - testing::chord_two_point(s, l, r, d)) <= 1e-12);
    REQUIRE(std::abs(chord(l) - phi(l)) <= 1e-14);
    REQUIRE(std::abs(chord(r) - phi(r)) <= 1e-14);
    const double mid = 0.5 * (l + r);
    REQUIRE(std::abs(phi(mid) - chord(mid) - (r - l) * (r - l) / 4.0) <= 1e-14);
  }
}

TEST_CASE("support extraction") {
  CHECK(support_threshold(1.0) == 1e-6);
  CHECK(support_threshold(4.0) == 4e-6);
  CHECK(support_threshold(0.5) == 1e-6);
  Vector x(4);
  x << 0.0, 2e-6, 5e-7, 1.0;
  CHECK(support_of(x, 1.0) == std::vector<int>{1, 3});
}

TEST_CASE("l1 on the two-column example") {
  const Solution sol = solve_l1(build_l1_polytope(two_column_example()));
  REQUIRE(sol.status == SolveStatus::GlobalOptimal);
  CHECK(sol.x(0) == doctest::Approx(0.0));
  CHECK(sol.x(1) == doctest::Approx(0.076923).epsilon(1e-4));
  CHECK(sol.objective == doctest::Approx(1.0 / 13.0));
  CHECK(sol.nodes == 1);
}

TEST_CASE("l1 returns zero when the origin is feasible") {
  Observation obs = two_column_example();
  obs.Qy(0) = 0.0;
  const Solution sol = solve_l1(build_l1_polytope(obs));
  REQUIRE(sol.status == SolveStatus::GlobalOptimal);
  CHECK(sol.x.isZero(0));
}

TEST_CASE("l1 reports infeasibility") {
  Observation obs = two_column_example(0.0);
  obs.Qy(0) = -1.0;
  CHECK(solve_l1(build_l1_polytope(obs)).status == SolveStatus::Infeasible);
}

TEST_CASE("no sampled feasible point beats the l1 solution") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const MagnitudePrior prior(1.0, 1.0);
  for (int inst = 0; inst < 5; ++inst) {
    const Instance truth = generate(4, 2, 2, prior, 100 + inst);
    const Observation obs = quantize(truth, QuantSpec::covering(50, values(truth.A), true),
                                     QuantSpec::covering(50, values(truth.y), true), prior);
    const Polytope poly = build_l1_polytope(obs);
    const Solution sol = solve_l1(poly);
    REQUIRE(sol.status == SolveStatus::GlobalOptimal);
    REQUIRE(is_member(sol.x, poly, 1e-7));
    int accepted = 0;
    for (int t = 0; t < 10000; ++t) {
      // Draw near the truth so that a useful share of samples is feasible.
      Vector x(4);
      for (int i = 0; i < 4; ++i) x(i) = std::max(0.0, truth.xTrue(i) + 0.6 * (u(rng) - 0.5));
      if (!is_member(x, poly, 0.0)) continue;
      ++accepted;
      REQUIRE(x.sum() >= sol.objective - 1e-9);
    }
    CHECK(accepted > 100);
  }
}

TEST_CASE("cqp on the two-column example") {
  const Polytope poly = build_cqp_polytope(two_column_example());
  const Solution sol = solve_cqp(poly, 1.0);
  REQUIRE(sol.status == SolveStatus::GlobalOptimal);
  CHECK(std::abs(sol.x(0) - 1.0) <= 1e-8);
  CHECK(std::abs(sol.x(1)) <= 1e-8);
  CHECK(std::abs(sol.objective) <= 1e-12);
  CHECK(sol.wallTime >= 0.0);
}

TEST_CASE("cqp on a bare box returns a corner") {
  const Solution sol = solve_cqp(box_polytope(Vector::Zero(5), Vector::Constant(5, 2.0)), 2.0);
  REQUIRE(sol.status == SolveStatus::GlobalOptimal);
  CHECK(sol.objective == 0.0);
  CHECK(((sol.x.array() == 0.0) || (sol.x.array() == 2.0)).all());
}

TEST_CASE("cqp validates its input") {
  const Polytope l1 = build_l1_polytope(two_column_example());
  CHECK_THROWS_AS(solve_cqp(l1, 1.0), InvalidArgument);
  const Polytope poly = build_cqp_polytope(two_column_example());
  CHECK_THROWS_AS(solve_cqp(poly, 0.0), InvalidArgument);
  BnbConfig cfg;
  cfg.absGap = 0.0;
  CHECK_THROWS_AS(solve_cqp(poly, 1.0, cfg), InvalidArgument);
}

TEST_CASE("cqp reports an infeasible root") {
  Observation obs = two_column_example(0.01);
  obs.Qy(0) = 5.0;
  const Solution sol = solve_cqp(build_cqp_polytope(obs), 1.0);
  CHECK(sol.status == SolveStatus::Infeasible);
}

TEST_CASE("oracle examples") {
  const Solution fig = oracle_vertex_min(build_cqp_polytope(two_column_example()), 1.0);
  REQUIRE(fig.status == SolveStatus::GlobalOptimal);
  CHECK(fig.x(0) == doctest::Approx(1.0));
  CHECK(fig.x(1) == doctest::Approx(0.0));
  CHECK(std::abs(fig.objective) <= 1e-12);

  Observation bad = two_column_example(0.01);
  bad.Qy(0) = -3.0;
  CHECK(oracle_vertex_min(build_cqp_polytope(bad), 1.0).status == SolveStatus::Infeasible);

  const Solution box = oracle_vertex_min(box_polytope(Vector::Zero(3), Vector::Ones(3)), 1.0);
  REQUIRE(box.status == SolveStatus::GlobalOptimal);
  CHECK(box.objective == 0.0);
  CHECK(((box.x.array() == 0.0) || (box.x.array() == 1.0)).all());

  CHECK_THROWS_AS(oracle_vertex_min(box_polytope(Vector::Zero(13), Vector::Ones(13)), 1.0), DimensionTooLarge);
}

TEST_CASE("cqp agrees with vertex enumeration on random instances") {
  std::mt19937_64 rng(4);
  int certified = 0;
  for (int t = 0; t < 200; ++t) {
    const MagnitudePrior prior = t % 2 ? MagnitudePrior(1.0, 1.0) : MagnitudePrior(0.8, 1.2);
    const Case c = random_case(rng, prior, t % 4 >= 2);
    const Polytope poly = build_cqp_polytope(c.obs);
    const double d = prior.d();
    const Solution oracle = oracle_vertex_min(poly, d);
    const Solution bnb = solve_cqp(poly, d);
    REQUIRE(bnb.status == oracle.status);
    if (oracle.status == SolveStatus::Infeasible) continue;
    REQUIRE(bnb.status == SolveStatus::GlobalOptimal);
    REQUIRE(std::abs(bnb.objective - oracle.objective) <= 1e-6);
    REQUIRE(is_member(bnb.x, poly, 1e-7));
    REQUIRE(std::abs(bnb.objective - objective_cqp(bnb.x, d)) <= 1e-9);
    if (c.inst.n() <= kMaxConditionDim &&
        check_prop3(c.obs.QA, prior, c.obs.deltaY, c.obs.deltaA).holds) {
      ++certified;
      REQUIRE(support_of(bnb.x, d) == support_of(oracle.x, d));
    }
  }
  CHECK(certified > 0);
}

TEST_CASE("child lower bounds never fall below the parent") {
  std::mt19937_64 rng(5);
  BnbConfig cfg;
  cfg.recordTrace = true;
  std::size_t records = 0;
  for (int t = 0; t < 60; ++t) {
    const Case c = random_case(rng, MagnitudePrior(0.8, 1.2), false);
    const Solution sol = solve_cqp(build_cqp_polytope(c.obs), 1.0, cfg);
    if (sol.status == SolveStatus::Infeasible) continue;
    REQUIRE(static_cast<std::int64_t>(sol.trace.size()) == sol.nodes);
    std::map<std::int64_t, double> bound;
    for (const NodeRecord& r : sol.trace) bound[r.id] = r.lowerBound;
    for (const NodeRecord& r : sol.trace) {
      if (r.parent < 0) continue;
      REQUIRE(bound.count(r.parent) == 1);
      REQUIRE(r.lowerBound >= bound[r.parent] - 1e-9);
    }
    records += sol.trace.size();
    CHECK(sol.lowerBound <= sol.objective + 1e-12);
  }
  CHECK(records > 60);
}

TEST_CASE("node budget exhaustion keeps the incumbent") {
  // A wide concave region with many near-optimal vertices needs more than one node.
  const MagnitudePrior prior(0.8, 1.2);
  BnbConfig cfg;
  cfg.maxNodes = 1;
  int budgetHits = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Instance inst = generate(8, 3, 3, prior, seed);
    const Observation obs = quantize(inst, QuantSpec::covering(30, values(inst.A), true),
                                     QuantSpec::covering(30, values(inst.y), true), prior);
    const Polytope poly = build_cqp_polytope(obs);
    const Solution sol = solve_cqp(poly, prior.d(), cfg);
    if (sol.status != SolveStatus::Feasible) continue;
    ++budgetHits;
    CHECK(sol.nodes == 1);
    CHECK(is_member(sol.x, poly, 1e-7));
    CHECK(sol.lowerBound <= sol.objective);
  }
  CHECK(budgetHits > 0);
}

TEST_CASE("refine_on_support") {
  const Instance inst = generate(10, 4, 2, MagnitudePrior(0.8, 1.2), 8);
  Observation exact;
  exact.QA = inst.A;
  exact.Qy = inst.y;
  exact.deltaA = exact.deltaY = 0.0;
  const Vector x = refine_on_support(exact, support_of(inst.xTrue, 1.0));
  CHECK((x - inst.xTrue).cwiseAbs().maxCoeff() <= 1e-10);

  const Vector fig = refine_on_support(two_column_example(), {0});
  CHECK(fig(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fig(1) == 0.0);

  CHECK(refine_on_support(two_column_example(), {}).isZero(0));

  Observation dup = exact;
  dup.QA.col(1) = dup.QA.col(0);
  CHECK_THROWS_AS(refine_on_support(dup, {0, 1}), RankDeficient);
  CHECK_THROWS_AS(refine_on_support(exact, {10}), InvalidDimension);
}

TEST_CASE("a Prop. 1 certificate leaves exactly one feasible corner") {
  std::mt19937_64 rng(6);
  const MagnitudePrior prior(1.0, 1.0);
  int certified = 0;
  for (int t = 0; certified < 100 && t < 2000; ++t) {
    const int n = std::uniform_int_distribution<int>(3, 10)(rng);
    const int m = std::uniform_int_distribution<int>(2, std::min(5, n))(rng);
    const int k = std::uniform_int_distribution<int>(0, 3)(rng) % (n + 1);
    const Instance inst = generate(n, m, k, prior, rng());
    const std::int64_t levels = std::uniform_int_distribution<std::int64_t>(50, 4000)(rng);
    Observation obs;
    obs.QA = inst.A;
    obs.Qy = quantize(inst, QuantSpec::covering(levels, values(inst.A)),
                      QuantSpec::covering(levels, values(inst.y)), prior)
                 .Qy;
    obs.deltaA = 0.0;
    obs.deltaY = QuantSpec::covering(levels, values(inst.y)).bound();
    obs.prior = prior;
    if (!check_prop1(inst.A, 1.0, obs.deltaY).holds) continue;
    ++certified;
    const Polytope poly = build_cqp_polytope(obs);
    int feasible = 0;
    testing::for_each_corner(n, 1.0, [&](const Vector& z) {
      if (is_member(z, poly)) {
        ++feasible;
        CHECK(z == inst.xTrue);
      }
    });
    REQUIRE(feasible == 1);
  }
  CHECK(certified == 100);
}
