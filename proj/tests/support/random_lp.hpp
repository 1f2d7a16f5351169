#pragma once

#include "wspp/lp.hpp"

#include <random>

namespace wspp::test {

/// Bounded LP with at most 5 columns and 6 rows. Most instances are built
/// around a point inside the box so they are feasible; one in eight gets
/// unrelated right-hand sides and may be infeasible.
inline lp::LinearProgram<double> random_bounded_lp(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cols(1, 5), rows(1, 6), coef(-5, 5), sense(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = cols(rng);
  const int m = rows(rng);
  const bool wild = rng() % 8 == 0;

  lp::LinearProgramBuilder<double> b;
  Eigen::VectorXd inside(n);
  for (int j = 0; j < n; ++j) {
    const double lo = -3.0 * unit(rng);
    const double hi = lo + 0.5 + 4.0 * unit(rng);
    inside(j) = lo + (hi - lo) * unit(rng);
    b.add_column(static_cast<double>(coef(rng)), lo, hi);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<lp::Term<double>> terms;
    double activity = 0.0;
    for (int j = 0; j < n; ++j) {
      const double a = coef(rng);
      terms.push_back({j, a});
      activity += a * inside(j);
    }
    const auto s = static_cast<lp::RowSense>(sense(rng));
    double rhs = activity;
    if (wild) {
      rhs = 10.0 * (unit(rng) - 0.5);
    } else if (s == lp::RowSense::kLessEqual) {
      rhs += 2.0 * unit(rng);
    } else if (s == lp::RowSense::kGreaterEqual) {
      rhs -= 2.0 * unit(rng);
    }
    b.add_row(terms, s, rhs);
  }
  return b.build();
}

}  // namespace wspp::test
