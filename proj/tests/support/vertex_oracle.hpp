#pragma once

#include "wspp/lp.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace wspp::test {

struct VertexOptimum {
  bool feasible = false;
  double objective = 0.0;
  Eigen::VectorXd x;
  int vertices = 0;
};

/// Brute-force optimum of a small LP with finite bounds on every column:
/// every choice of n tight constraints (rows or bounds) is solved exactly and
/// the best feasible point wins.
inline VertexOptimum enumerate_vertices(const lp::LinearProgram<double>& lp, double tol = 1e-9) {
  const int n = static_cast<int>(lp.cols());
  const Eigen::MatrixXd a = Eigen::MatrixXd(lp.constraints);

  struct Plane {
    Eigen::RowVectorXd normal;
    double rhs;
  };
  std::vector<Plane> planes;
  for (int i = 0; i < a.rows(); ++i) planes.push_back({a.row(i), lp.rhs(i)});
  for (int j = 0; j < n; ++j) {
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(n);
    e(j) = 1.0;
    planes.push_back({e, lp.lower(j)});
    planes.push_back({e, lp.upper(j)});
  }

  auto feasible = [&](const Eigen::VectorXd& x) {
    for (int j = 0; j < n; ++j) {
      if (x(j) < lp.lower(j) - tol || x(j) > lp.upper(j) + tol) return false;
    }
    const Eigen::VectorXd act = a * x;
    for (int i = 0; i < a.rows(); ++i) {
      const double d = act(i) - lp.rhs(i);
      switch (lp.senses[static_cast<std::size_t>(i)]) {
        case lp::RowSense::kLessEqual:
          if (d > tol) return false;
          break;
        case lp::RowSense::kGreaterEqual:
          if (d < -tol) return false;
          break;
        case lp::RowSense::kEqual:
          if (std::abs(d) > tol) return false;
          break;
      }
    }
    return true;
  };

  VertexOptimum best;
  const int p = static_cast<int>(planes.size());
  std::vector<int> pick(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) pick[static_cast<std::size_t>(k)] = k;
  while (true) {
    Eigen::MatrixXd m(n, n);
    Eigen::VectorXd r(n);
    for (int k = 0; k < n; ++k) {
      m.row(k) = planes[static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])].normal;
      r(k) = planes[static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])].rhs;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (lu.rank() == n) {
      const Eigen::VectorXd x = lu.solve(r);
      if (feasible(x)) {
        ++best.vertices;
        const double obj = lp.objective.dot(x) + lp.objective_offset;
        if (!best.feasible || obj > best.objective) {
          best.feasible = true;
          best.objective = obj;
          best.x = x;
        }
      }
    }
    int k = n - 1;
    while (k >= 0 && pick[static_cast<std::size_t>(k)] == p - n + k) --k;
    if (k < 0) break;
    ++pick[static_cast<std::size_t>(k)];
    for (int q = k + 1; q < n; ++q) pick[static_cast<std::size_t>(q)] = pick[static_cast<std::size_t>(q - 1)] + 1;
  }
  return best;
}

}  // namespace wspp::test
