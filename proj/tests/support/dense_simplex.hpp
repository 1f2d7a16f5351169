#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

namespace wspp::test {

enum class Sense { kLe, kEq, kGe };

/// maximize c'y subject to a y (sense) b and y >= 0.
struct DenseProblem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  std::vector<Sense> sense;
  Eigen::VectorXd c;
};

struct DenseResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded } status = Status::kInfeasible;
  Eigen::VectorXd y;
  double objective = 0.0;
};

/// Textbook two-phase tableau simplex, kept deliberately separate from the
/// library solver. Dantzig pricing, switching to Bland's rule after a run of
/// degenerate pivots.
inline DenseResult dense_simplex(const DenseProblem& p, double tol = 1e-9) {
  const int m = static_cast<int>(p.a.rows());
  const int n = static_cast<int>(p.a.cols());

  int slacks = 0, artificials = 0;
  for (int i = 0; i < m; ++i) {
    const bool flip = p.b(i) < 0;
    Sense s = p.sense[static_cast<std::size_t>(i)];
    if (flip && s != Sense::kEq) s = s == Sense::kLe ? Sense::kGe : Sense::kLe;
    if (s != Sense::kEq) ++slacks;
    if (s != Sense::kLe) ++artificials;
  }
  const int width = n + slacks + artificials;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, width + 1);
  std::vector<int> basis(static_cast<std::size_t>(m));
  int next_slack = n, next_art = n + slacks;
  for (int i = 0; i < m; ++i) {
    const double sign = p.b(i) < 0 ? -1.0 : 1.0;
    Sense s = p.sense[static_cast<std::size_t>(i)];
    if (sign < 0 && s != Sense::kEq) s = s == Sense::kLe ? Sense::kGe : Sense::kLe;
    t.row(i).head(n) = sign * p.a.row(i);
    t(i, width) = sign * p.b(i);
    if (s == Sense::kLe) {
      t(i, next_slack) = 1.0;
      basis[static_cast<std::size_t>(i)] = next_slack++;
    } else if (s == Sense::kGe) {
      t(i, next_slack++) = -1.0;
      t(i, next_art) = 1.0;
      basis[static_cast<std::size_t>(i)] = next_art++;
    } else {
      t(i, next_art) = 1.0;
      basis[static_cast<std::size_t>(i)] = next_art++;
    }
  }

  const int first_art = n + slacks;
  std::vector<bool> allowed(static_cast<std::size_t>(width), true);

  // reduced-cost row for a given cost vector on the current basis
  auto pricing_row = [&](const Eigen::VectorXd& cost) {
    Eigen::RowVectorXd z = -cost.transpose();
    for (int i = 0; i < m; ++i) z += cost(basis[static_cast<std::size_t>(i)]) * t.row(i).head(width);
    return z;
  };

  auto run = [&](const Eigen::VectorXd& cost) -> bool {
    Eigen::RowVectorXd z = pricing_row(cost);
    int degenerate = 0;
    for (long iter = 0; iter < 100000; ++iter) {
      const bool bland = degenerate > 50;
      int q = -1;
      double best = -tol;
      for (int j = 0; j < width; ++j) {
        if (!allowed[static_cast<std::size_t>(j)] || z(j) >= -tol) continue;
        if (bland) {
          q = j;
          break;
        }
        if (z(j) < best) {
          best = z(j);
          q = j;
        }
      }
      if (q < 0) return true;
      int r = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (t(i, q) <= tol) continue;
        const double v = t(i, width) / t(i, q);
        if (v < ratio - 1e-12 || (std::abs(v - ratio) <= 1e-12 && r >= 0 &&
                                  basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(r)])) {
          ratio = v;
          r = i;
        }
      }
      if (r < 0) return false;
      degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
      t.row(r) /= t(r, q);
      for (int i = 0; i < m; ++i) {
        if (i != r && t(i, q) != 0.0) t.row(i) -= t(i, q) * t.row(r);
      }
      z -= z(q) * t.row(r).head(width);
      basis[static_cast<std::size_t>(r)] = q;
    }
    return false;
  };

  DenseResult out;
  if (artificials > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(width);
    phase1.tail(artificials).setConstant(-1.0);
    run(phase1);
    double infeasibility = 0.0;
    for (int i = 0; i < m; ++i) {
      if (basis[static_cast<std::size_t>(i)] >= first_art) infeasibility += t(i, width);
    }
    if (infeasibility > 1e-7) return out;
    // pivot remaining zero-level artificials out where possible
    for (int i = 0; i < m; ++i) {
      if (basis[static_cast<std::size_t>(i)] < first_art) continue;
      for (int j = 0; j < first_art; ++j) {
        if (std::abs(t(i, j)) > 1e-9) {
          t.row(i) /= t(i, j);
          for (int k = 0; k < m; ++k) {
            if (k != i && t(k, j) != 0.0) t.row(k) -= t(k, j) * t.row(i);
          }
          basis[static_cast<std::size_t>(i)] = j;
          break;
        }
      }
    }
    for (int j = first_art; j < width; ++j) allowed[static_cast<std::size_t>(j)] = false;
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(width);
  cost.head(n) = p.c;
  if (!run(cost)) {
    out.status = DenseResult::Status::kUnbounded;
    return out;
  }
  out.status = DenseResult::Status::kOptimal;
  out.y = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    if (basis[static_cast<std::size_t>(i)] < n) out.y(basis[static_cast<std::size_t>(i)]) = t(i, width);
  }
  out.objective = p.c.dot(out.y);
  return out;
}

}  // namespace wspp::test
