#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "sparsecqp/errors.hpp"
#include "sparsecqp/lp.hpp"
#include "support/oracles.hpp"

using namespace sparsecqp;

namespace {

LpProblem nonneg(Vector c, Matrix A, Vector b) {
  const Eigen::Index n = c.size();
  return {std::move(c), std::move(A), std::move(b), Vector::Zero(n), Vector::Constant(n, INFINITY)};
}

// Primal feasibility, objective consistency, sign of the duals and reduced costs,
// and complementary slackness.
void check_certificate(const LpProblem& prob, const LpResult& res) {
  REQUIRE(res.status == LpStatus::Optimal);
  const Eigen::Index n = prob.c.size();
  const Vector slack = prob.b - prob.A * res.x;
  const double scale = 1.0 + std::abs(res.value);
  if (slack.size() > 0) CHECK(slack.minCoeff() >= -1e-9 * (1.0 + prob.b.cwiseAbs().maxCoeff()));
  for (Eigen::Index i = 0; i < n; ++i) {
    CHECK(res.x(i) >= prob.lower(i) - 1e-9);
    CHECK(res.x(i) <= prob.upper(i) + 1e-9);
  }
  CHECK(std::abs(res.value - prob.c.dot(res.x)) <= 1e-9 * scale);

  REQUIRE(res.duals.size() == prob.A.rows());
  if (res.duals.size() > 0) CHECK(res.duals.maxCoeff() <= 1e-9);
  const Vector rc = prob.c - prob.A.transpose() * res.duals;
  CHECK((rc - res.reducedCosts).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + prob.c.cwiseAbs().maxCoeff()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double atLower = std::abs(res.x(i) - prob.lower(i));
    const double atUpper = std::abs(res.x(i) - prob.upper(i));
    if (rc(i) > 1e-7) CHECK(atLower <= 1e-7);
    if (rc(i) < -1e-7) CHECK(atUpper <= 1e-7);
  }
  for (Eigen::Index j = 0; j < slack.size(); ++j)
    if (res.duals(j) < -1e-7) CHECK(std::abs(slack(j)) <= 1e-7);

  // Strong duality: c.x = b.y + sum rc_i x_i with x at its bounds wherever rc != 0.
  const double dual = prob.b.dot(res.duals) + rc.dot(res.x);
  CHECK(std::abs(dual - res.value) <= 1e-8 * scale);
}

}  // namespace

TEST_CASE("facet example has value 1") {
  Matrix A(1, 2);
  A << -1.0, -1.0;
  Vector b(1);
  b << -1.0;
  const LpProblem prob = nonneg(Vector::Ones(2), A, b);
  const LpResult res = solve_lp(prob);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.x.sum() == doctest::Approx(1.0).epsilon(1e-12));
  check_certificate(prob, res);
}

TEST_CASE("two-column polytope minimum is 1/13") {
  Matrix A(2, 2);
  A << 0.1, 1.1, -0.3, -1.3;
  Vector b(2);
  b << 0.3, -0.1;
  const LpProblem prob = nonneg(Vector::Ones(2), A, b);
  const LpResult res = solve_lp(prob);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.x(0) == doctest::Approx(0.0));
  CHECK(res.x(1) == doctest::Approx(1.0 / 13.0).epsilon(1e-12));
  CHECK(res.value == doctest::Approx(1.0 / 13.0).epsilon(1e-12));
  check_certificate(prob, res);
}

TEST_CASE("unbounded ray") {
  Vector c(1);
  c << -1.0;
  const LpResult res = solve_lp(nonneg(c, Matrix(0, 1), Vector(0)));
  CHECK(res.status == LpStatus::Unbounded);
}

TEST_CASE("unbounded with rows") {
  Matrix A(1, 2);
  A << 1.0, -1.0;
  Vector b(1);
  b << 1.0;
  Vector c(2);
  c << 0.0, -1.0;
  CHECK(solve_lp(nonneg(c, A, b)).status == LpStatus::Unbounded);
}

TEST_CASE("infeasible rows") {
  Matrix A(2, 1);
  A << 1.0, -1.0;
  Vector b(2);
  b << 1.0, -2.0;  // x <= 1 and x >= 2
  Vector c(1);
  c << 1.0;
  CHECK(solve_lp(nonneg(c, A, b)).status == LpStatus::Infeasible);

  Matrix B(1, 2);
  B << 1.0, 1.0;
  Vector d(1);
  d << -0.5;  // x1 + x2 <= -0.5 with x >= 0
  CHECK(solve_lp(nonneg(Vector::Ones(2), B, d)).status == LpStatus::Infeasible);
}

TEST_CASE("box only problems") {
  Vector c(3);
  c << 1.0, -2.0, 0.0;
  Vector lo(3), hi(3);
  lo << -1.0, 0.0, 2.0;
  hi << 4.0, 3.0, 5.0;
  const LpProblem prob{c, Matrix(0, 3), Vector(0), lo, hi};
  const LpResult res = solve_lp(prob);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.x(0) == -1.0);
  CHECK(res.x(1) == 3.0);
  CHECK(res.value == doctest::Approx(-7.0));
  check_certificate(prob, res);
}

TEST_CASE("free variables") {
  // min x1 + x2 with x1 free, x1 >= 2 - x2 and x1 >= -3, x2 in [0, 1].
  Matrix A(2, 2);
  A << -1.0, -1.0, -1.0, 0.0;
  Vector b(2);
  b << -2.0, 3.0;
  Vector c(2);
  c << 1.0, 2.0;
  Vector lo(2), hi(2);
  lo << -INFINITY, 0.0;
  hi << INFINITY, 1.0;
  const LpProblem prob{c, A, b, lo, hi};
  const LpResult res = solve_lp(prob);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.x(0) == doctest::Approx(2.0));
  CHECK(res.x(1) == doctest::Approx(0.0));
  check_certificate(prob, res);
}

TEST_CASE("fixed variables and equal bounds") {
  Vector lo(2), hi(2);
  lo << 0.5, 0.0;
  hi << 0.5, 2.0;
  Matrix A(1, 2);
  A << -1.0, -1.0;
  Vector b(1);
  b << -1.5;
  const LpProblem prob{Vector::Ones(2), A, b, lo, hi};
  const LpResult res = solve_lp(prob);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.x(0) == 0.5);
  CHECK(res.x(1) == doctest::Approx(1.0));
}

TEST_CASE("dimension checks") {
  LpProblem prob = nonneg(Vector::Ones(2), Matrix::Ones(1, 2), Vector::Ones(1));
  prob.b = Vector::Ones(2);
  CHECK_THROWS_AS(solve_lp(prob), InvalidDimension);
  prob = nonneg(Vector::Ones(2), Matrix::Ones(1, 2), Vector::Ones(1));
  prob.lower(0) = 2.0;
  prob.upper(0) = 1.0;
  CHECK_THROWS_AS(solve_lp(prob), InvalidArgument);
}

TEST_CASE("debug output dumps the final basis") {
  Matrix A(2, 2);
  A << 0.1, 1.1, -0.3, -1.3;
  Vector b(2);
  b << 0.3, -0.1;
  std::ostringstream os;
  LpOptions opts;
  opts.debug = &os;
  const LpResult res = solve_lp(nonneg(Vector::Ones(2), A, b), opts);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.basis.size() == 2);
  CHECK(os.str().find("basis") != std::string::npos);
}

TEST_CASE("the solver is deterministic") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  Matrix A(4, 6);
  for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = g(rng);
  const LpProblem prob = nonneg(Vector::Ones(6), A, Vector::Ones(4));
  const LpResult a = solve_lp(prob);
  const LpResult b = solve_lp(prob);
  CHECK(a.x == b.x);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("degenerate corpus terminates within 50(p+n) iterations") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(2, 8);
  std::uniform_int_distribution<int> small(-3, 3);
  std::normal_distribution<double> g;
  int optimal = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = dim(rng);
    const int p = dim(rng);
    Matrix A(p, n);
    // Small integer entries make ties in the ratio test common.
    for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = small(rng);
    const Vector b = Vector::Constant(p, t % 3 == 0 ? 0.0 : 1.0);
    Vector c(n);
    for (int i = 0; i < n; ++i) c(i) = t % 2 ? small(rng) : g(rng);
    Vector hi = Vector::Constant(n, t % 4 == 0 ? INFINITY : 2.0);
    const LpProblem prob{c, A, b, Vector::Zero(n), hi};
    const LpResult res = solve_lp(prob);
    REQUIRE(res.iterations <= 50 * (p + n));
    if (res.status == LpStatus::Optimal) {
      ++optimal;
      const Vector slack = b - A * res.x;
      REQUIRE(slack.minCoeff() >= -1e-9);
    }
  }
  CHECK(optimal > 500);
}

TEST_CASE("agreement with basic-solution enumeration") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dimN(1, 5);
  std::uniform_int_distribution<int> dimP(0, 6);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int feasible = 0, infeasible = 0;
  for (int t = 0; t < 400; ++t) {
    const int n = dimN(rng);
    const int p = dimP(rng);
    Matrix A(p, n);
    for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = g(rng);
    Vector b(p);
    for (int j = 0; j < p; ++j) b(j) = g(rng);
    Vector c(n), lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      c(i) = g(rng);
      lo(i) = -2.0 * u(rng);
      hi(i) = lo(i) + 3.0 * u(rng);
    }
    const LpProblem prob{c, A, b, lo, hi};
    const LpResult res = solve_lp(prob);
    const double ref = testing::brute_force_lp(c, A, b, lo, hi, 1e-9);
    if (std::isinf(ref)) {
      REQUIRE(res.status == LpStatus::Infeasible);
      ++infeasible;
    } else {
      REQUIRE(res.status == LpStatus::Optimal);
      REQUIRE(std::abs(res.value - ref) <= 1e-8 * (1.0 + std::abs(ref)));
      check_certificate(prob, res);
      ++feasible;
    }
  }
  CHECK(feasible > 100);
  CHECK(infeasible > 10);
}

TEST_CASE("dual certificates on polytope relaxations") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 0.5);
  for (int t = 0; t < 300; ++t) {
    const int n = 10, m = 4;
    Matrix QA(m, n);
    for (Eigen::Index i = 0; i < QA.size(); ++i) QA.data()[i] = g(rng);
    Vector x = Vector::Zero(n);
    x(t % n) = 1.0;
    x((t * 7 + 3) % n) = 1.0;
    const Vector y = QA * x;
    const double da = 0.002, dy = 0.003;
    Matrix A(2 * m, n);
    A.topRows(m) = QA.array() - da;
    A.bottomRows(m) = -QA.array() - da;
    Vector b(2 * m);
    b.head(m) = y.array() + dy;
    b.tail(m) = -y.array() + dy;
    Vector c(n);
    for (int i = 0; i < n; ++i) c(i) = t % 2 ? 1.0 : g(rng);
    const LpProblem prob{c, A, b, Vector::Zero(n), Vector::Ones(n)};
    const LpResult res = solve_lp(prob);
    check_certificate(prob, res);
  }
}
