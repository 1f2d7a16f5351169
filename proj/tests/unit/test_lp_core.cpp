#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dense_simplex.hpp"
#include "random_lp.hpp"
#include "vertex_oracle.hpp"

#include "wspp/lp.hpp"

#include <random>

using namespace wspp;
using lp::RowSense;
using lp::Status;

namespace {

constexpr double kInf = lp::kInfinity<double>;

lp::LinearProgram<double> two_variable_example() {
  lp::LinearProgramBuilder<double> b;
  const int x = b.add_column(3.0, 0.0, kInf, "x");
  const int y = b.add_column(2.0, 0.0, kInf, "y");
  b.add_row({{x, 1.0}, {y, 1.0}}, RowSense::kLessEqual, 4.0);
  b.add_row({{x, 1.0}}, RowSense::kLessEqual, 2.0);
  return b.build();
}

/// Same LP as a dense problem over y = x - lower, for the tableau oracle.
test::DenseProblem to_dense(const lp::LinearProgram<double>& lp) {
  const int n = static_cast<int>(lp.cols());
  const Eigen::MatrixXd a = Eigen::MatrixXd(lp.constraints);
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  std::vector<test::Sense> senses;
  for (int i = 0; i < a.rows(); ++i) {
    rows.push_back(a.row(i));
    rhs.push_back(lp.rhs(i) - a.row(i).dot(lp.lower));
    const auto s = lp.senses[static_cast<std::size_t>(i)];
    senses.push_back(s == RowSense::kLessEqual ? test::Sense::kLe
                     : s == RowSense::kEqual   ? test::Sense::kEq
                                               : test::Sense::kGe);
  }
  for (int j = 0; j < n; ++j) {
    if (lp.upper(j) == kInf) continue;
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
    r(j) = 1.0;
    rows.push_back(r);
    rhs.push_back(lp.upper(j) - lp.lower(j));
    senses.push_back(test::Sense::kLe);
  }
  test::DenseProblem p;
  p.a.resize(static_cast<Eigen::Index>(rows.size()), n);
  p.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    p.a.row(static_cast<Eigen::Index>(i)) = rows[i];
    p.b(static_cast<Eigen::Index>(i)) = rhs[i];
  }
  p.sense = senses;
  p.c = lp.objective;
  return p;
}

/// Sparse random LP with finite lower bounds and a known interior point.
lp::LinearProgram<double> random_sparse_lp(std::uint64_t seed, int n, int m) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  lp::LinearProgramBuilder<double> b;
  Eigen::VectorXd inside(n);
  for (int j = 0; j < n; ++j) {
    const double lo = -2.0 * u(rng);
    const double hi = u(rng) < 0.3 ? kInf : lo + 1.0 + 5.0 * u(rng);
    inside(j) = lo + (hi == kInf ? 1.0 : (hi - lo) * u(rng));
    b.add_column(2.0 * u(rng) - 0.5, lo, hi);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<lp::Term<double>> terms;
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      if (u(rng) > 0.3) continue;
      const double a = std::round(10.0 * (u(rng) - 0.3));
      terms.push_back({j, a});
      act += a * inside(j);
    }
    const double pick = u(rng);
    if (pick < 0.2) {
      b.add_row(terms, RowSense::kEqual, act);
    } else if (pick < 0.6) {
      b.add_row(terms, RowSense::kLessEqual, act + u(rng));
    } else {
      b.add_row(terms, RowSense::kGreaterEqual, act - u(rng));
    }
  }
  // a covering row keeps columns without upper bounds from running away
  std::vector<lp::Term<double>> all;
  for (int j = 0; j < n; ++j) all.push_back({j, 1.0});
  b.add_row(all, RowSense::kLessEqual, inside.sum() + 10.0);
  return b.build();
}

}  // namespace

TEST_CASE("a single active bound") {
  lp::LinearProgramBuilder<double> b;
  const int x = b.add_column(1.0, 0.0, kInf);
  b.add_row({{x, 1.0}}, RowSense::kLessEqual, 5.0);
  const auto s = lp::solve(b.build());
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.x(0) == doctest::Approx(5.0));
  CHECK(s.objective_value == doctest::Approx(5.0));
}

TEST_CASE("two-variable example agrees with its four vertices") {
  const auto lp = two_variable_example();
  const auto s = lp::solve(lp);
  REQUIRE(s.optimal());
  CHECK(s.objective_value == doctest::Approx(10.0));
  CHECK(s.x(0) == doctest::Approx(2.0));
  CHECK(s.x(1) == doctest::Approx(2.0));
  const auto v = test::enumerate_vertices([&] {
    auto bounded = lp;
    bounded.upper.setConstant(10.0);
    return bounded;
  }());
  CHECK(v.objective == doctest::Approx(10.0));
}

TEST_CASE("infeasible and unbounded programs") {
  lp::LinearProgramBuilder<double> b;
  const int x = b.add_column(1.0, -kInf, kInf);
  b.add_row({{x, 1.0}}, RowSense::kLessEqual, 1.0);
  b.add_row({{x, 1.0}}, RowSense::kGreaterEqual, 2.0);
  CHECK(lp::solve(b.build()).status == Status::kInfeasible);

  lp::LinearProgramBuilder<double> u;
  const int y = u.add_column(1.0, 0.0, kInf);
  u.add_row({{y, 1.0}}, RowSense::kGreaterEqual, 0.0);
  CHECK(lp::solve(u.build()).status == Status::kUnbounded);

  lp::LinearProgramBuilder<double> v;
  v.add_column(1.0, 0.0, kInf);
  CHECK(lp::solve(v.build()).status == Status::kUnbounded);
}

TEST_CASE("feasibility report") {
  const auto lp = two_variable_example();
  Eigen::VectorXd x(2);
  x << 2.0, 2.0;
  const auto exact = lp::check_feasible(lp, x);
  CHECK(exact.max_row_violation == 0.0);
  CHECK(exact.max_bound_violation == 0.0);
  CHECK(exact.objective == doctest::Approx(10.0));
  CHECK(exact.feasible);
  x << 2.0, 2.5;
  const auto off = lp::check_feasible(lp, x);
  CHECK(off.max_row_violation == doctest::Approx(0.5));
  CHECK_FALSE(off.feasible);
  CHECK_THROWS_AS(lp::check_feasible(lp, Eigen::VectorXd(3)), lp::DimensionError);
}

TEST_CASE("dimension checks") {
  auto lp = two_variable_example();
  lp.rhs.resize(1);
  CHECK_THROWS_AS(lp::solve(lp), lp::DimensionError);
  lp::LinearProgramBuilder<double> b;
  b.add_column(1.0, 0.0, 1.0);
  CHECK_THROWS_AS(b.add_row({{3, 1.0}}, RowSense::kEqual, 0.0), lp::DimensionError);
}

TEST_CASE("degenerate program that cycles under the largest-coefficient rule") {
  // Beale's example written as a maximization.
  lp::LinearProgramBuilder<double> b;
  const int x4 = b.add_column(0.75, 0.0, kInf);
  const int x5 = b.add_column(-150.0, 0.0, kInf);
  const int x6 = b.add_column(0.02, 0.0, kInf);
  const int x7 = b.add_column(-6.0, 0.0, kInf);
  b.add_row({{x4, 0.25}, {x5, -60.0}, {x6, -0.04}, {x7, 9.0}}, RowSense::kLessEqual, 0.0);
  b.add_row({{x4, 0.5}, {x5, -90.0}, {x6, -0.02}, {x7, 3.0}}, RowSense::kLessEqual, 0.0);
  b.add_row({{x6, 1.0}}, RowSense::kLessEqual, 1.0);
  const auto s = lp::solve(b.build());
  REQUIRE(s.optimal());
  CHECK(s.objective_value == doctest::Approx(0.05));
}

TEST_CASE("random bounded programs match vertex enumeration") {
  int infeasible = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    CAPTURE(seed);
    const auto lp = test::random_bounded_lp(seed);
    const auto oracle = test::enumerate_vertices(lp);
    const auto s = lp::solve(lp);
    if (!oracle.feasible) {
      ++infeasible;
      CHECK(s.status == Status::kInfeasible);
      continue;
    }
    REQUIRE(s.optimal());
    CHECK(std::abs(s.objective_value - oracle.objective) <= 1e-6);
    CHECK(lp::check_feasible(lp, s.x).feasible);
  }
  CHECK(infeasible > 0);
}

TEST_CASE("larger sparse programs match the dense tableau oracle with and without presolve") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    CAPTURE(seed);
    const auto lp = random_sparse_lp(seed, 40, 30);
    const auto oracle = test::dense_simplex(to_dense(lp));
    lp::SolverOptions<double> plain;
    plain.presolve = false;
    const auto a = lp::solve(lp);
    const auto b = lp::solve(lp, plain);
    REQUIRE(oracle.status == test::DenseResult::Status::kOptimal);
    REQUIRE(a.optimal());
    REQUIRE(b.optimal());
    const double expected = oracle.objective + lp.objective.dot(lp.lower);
    CHECK(a.objective_value == doctest::Approx(expected).epsilon(1e-9));
    CHECK(b.objective_value == doctest::Approx(expected).epsilon(1e-9));
    CHECK(lp::check_feasible(lp, a.x).feasible);
    CHECK(lp::check_feasible(lp, b.x).feasible);
  }
}

TEST_CASE("solves are deterministic") {
  const auto lp = random_sparse_lp(99, 60, 40);
  const auto a = lp::solve(lp);
  const auto b = lp::solve(lp);
  CHECK(a.status == b.status);
  CHECK(a.objective_value == b.objective_value);
  CHECK(a.x == b.x);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("frequent refactorization does not change the optimum") {
  const auto lp = random_sparse_lp(7, 50, 35);
  lp::SolverOptions<double> often;
  often.refactor_interval = 3;
  const auto a = lp::solve(lp);
  const auto b = lp::solve(lp, often);
  REQUIRE(a.optimal());
  REQUIRE(b.optimal());
  CHECK(a.objective_value == doctest::Approx(b.objective_value).epsilon(1e-10));
}

TEST_CASE("objective offset is carried into the optimum") {
  auto lp = two_variable_example();
  lp.objective_offset = -4.5;
  CHECK(lp::solve(lp).objective_value == doctest::Approx(5.5));
}

TEST_CASE("fixed and free columns") {
  lp::LinearProgramBuilder<double> b;
  const int f = b.add_column(1.0, 3.0, 3.0);
  const int g = b.add_column(-1.0, -kInf, kInf);
  b.add_row({{f, 1.0}, {g, -1.0}}, RowSense::kEqual, 1.0);
  const auto s = lp::solve(b.build());
  REQUIRE(s.optimal());
  CHECK(s.x(0) == doctest::Approx(3.0));
  CHECK(s.x(1) == doctest::Approx(2.0));
  CHECK(s.objective_value == doctest::Approx(1.0));
}
