#pragma once

// Internal to lp_core: sparse LU factorization of a simplex basis.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace wspp::lp::detail {

/// Right-looking sparse LU with Markowitz pivot selection and threshold
/// partial pivoting. Columns of the factored matrix are basis positions,
/// rows are constraint rows. Triangular solves skip zero entries, which keeps
/// them cheap on the very sparse right-hand sides a simplex method produces.
template <typename Scalar>
class BasisFactor {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Entry {
    int index;
    Scalar value;
  };

  /// columns[k] holds the entries of basis position k. Returns the positions
  /// that could not be pivoted (empty when the basis is nonsingular);
  /// `unpivoted_rows` receives rows left without a pivot, same length.
  std::vector<int> factor(int m, const std::vector<std::vector<Entry>>& columns,
                          std::vector<int>& unpivoted_rows) {
    m_ = m;
    init_active(columns);
    pivot_row_.clear();
    pivot_col_.clear();
    l_start_.assign(1, 0);
    l_entries_.clear();
    u_diag_.clear();
    u_row_start_.assign(1, 0);
    u_row_entries_.clear();

    std::vector<char> col_done(static_cast<std::size_t>(m), 0), row_done(static_cast<std::size_t>(m), 0);
    for (int step = 0; step < m; ++step) {
      int pr = -1, pc = -1;
      if (!choose_pivot(pr, pc)) break;
      eliminate(pr, pc);
      col_done[pc] = 1;
      row_done[pr] = 1;
    }

    std::vector<int> bad_cols;
    unpivoted_rows.clear();
    for (int j = 0; j < m; ++j) {
      if (!col_done[j]) bad_cols.push_back(j);
    }
    for (int i = 0; i < m; ++i) {
      if (!row_done[i]) unpivoted_rows.push_back(i);
    }
    build_u_columns();
    release_active();
    return bad_cols;
  }

  /// Solves B x = v. `v` is indexed by row and is overwritten; the result is
  /// indexed by basis position.
  void ftran(Vector& v, Vector& x) const {
    const int steps = static_cast<int>(pivot_row_.size());
    for (int k = 0; k < steps; ++k) {
      const Scalar p = v(pivot_row_[k]);
      if (p == Scalar(0)) continue;
      for (int e = l_start_[k]; e < l_start_[k + 1]; ++e) v(l_entries_[e].index) -= l_entries_[e].value * p;
    }
    x.setZero(m_);
    for (int k = steps - 1; k >= 0; --k) {
      const Scalar r = v(pivot_row_[k]);
      if (r == Scalar(0)) continue;
      const Scalar xk = r / u_diag_[k];
      x(pivot_col_[k]) = xk;
      for (int e = u_col_start_[k]; e < u_col_start_[k + 1]; ++e) {
        v(u_col_entries_[e].index) -= u_col_entries_[e].value * xk;
      }
    }
  }

  /// Solves B' y = c. `c` is indexed by basis position and is overwritten;
  /// the result is indexed by row.
  void btran(Vector& c, Vector& y) const {
    const int steps = static_cast<int>(pivot_row_.size());
    y.setZero(m_);
    for (int k = 0; k < steps; ++k) {
      const Scalar r = c(pivot_col_[k]);
      if (r == Scalar(0)) continue;
      const Scalar z = r / u_diag_[k];
      y(pivot_row_[k]) = z;
      for (int e = u_row_start_[k]; e < u_row_start_[k + 1]; ++e) {
        c(u_row_entries_[e].index) -= u_row_entries_[e].value * z;
      }
    }
    for (int k = steps - 1; k >= 0; --k) {
      Scalar s = Scalar(0);
      for (int e = l_start_[k]; e < l_start_[k + 1]; ++e) s += l_entries_[e].value * y(l_entries_[e].index);
      if (s != Scalar(0)) y(pivot_row_[k]) -= s;
    }
  }

  std::size_t fill() const { return l_entries_.size() + u_row_entries_.size(); }

 private:
  static constexpr Scalar kThreshold = Scalar(0.1);
  static constexpr Scalar kAbsoluteTiny = Scalar(1e-11);
  static constexpr int kSearchColumns = 4;

  void init_active(const std::vector<std::vector<Entry>>& columns) {
    acol_.assign(static_cast<std::size_t>(m_), {});
    arow_.assign(static_cast<std::size_t>(m_), {});
    for (int j = 0; j < m_; ++j) {
      for (const Entry& e : columns[j]) {
        if (e.value == Scalar(0)) continue;
        acol_[j].push_back(e);
        arow_[e.index].push_back(j);
      }
    }
    col_alive_.assign(static_cast<std::size_t>(m_), 1);
    row_alive_.assign(static_cast<std::size_t>(m_), 1);
    col_bucket_.assign(static_cast<std::size_t>(m_ + 1), {});
    row_bucket_.assign(static_cast<std::size_t>(m_ + 1), {});
    for (int j = 0; j < m_; ++j) col_bucket_[acol_[j].size()].push_back(j);
    for (int i = 0; i < m_; ++i) row_bucket_[arow_[i].size()].push_back(i);
    mark_.assign(static_cast<std::size_t>(m_), -1);
  }

  void release_active() {
    acol_.clear();
    arow_.clear();
    col_bucket_.clear();
    row_bucket_.clear();
  }

  Scalar column_max(int j) const {
    Scalar mx = Scalar(0);
    for (const Entry& e : acol_[j]) mx = std::max(mx, std::abs(e.value));
    return mx;
  }

  // Buckets are lazily maintained: stale members are skipped when popped.
  bool choose_pivot(int& pr, int& pc) {
    // column singletons
    while (!col_bucket_[1].empty()) {
      const int j = col_bucket_[1].back();
      col_bucket_[1].pop_back();
      if (!col_alive_[j] || acol_[j].size() != 1) continue;
      if (std::abs(acol_[j][0].value) <= kAbsoluteTiny) continue;
      pr = acol_[j][0].index;
      pc = j;
      return true;
    }
    // row singletons
    while (!row_bucket_[1].empty()) {
      const int i = row_bucket_[1].back();
      row_bucket_[1].pop_back();
      if (!row_alive_[i] || arow_[i].size() != 1) continue;
      const int j = arow_[i][0];
      const Scalar a = value_at(j, i);
      if (std::abs(a) > kAbsoluteTiny && std::abs(a) >= kThreshold * column_max(j)) {
        pr = i;
        pc = j;
        return true;
      }
    }
    // Markowitz search over the shortest columns
    long best_cost = -1;
    int examined = 0;
    for (int count = 2; count <= m_ && examined < kSearchColumns; ++count) {
      auto& bucket = col_bucket_[count];
      for (std::size_t b = 0; b < bucket.size() && examined < kSearchColumns;) {
        const int j = bucket[b];
        if (!col_alive_[j] || static_cast<int>(acol_[j].size()) != count) {
          bucket[b] = bucket.back();
          bucket.pop_back();
          continue;
        }
        ++b;
        const Scalar mx = column_max(j);
        if (mx <= kAbsoluteTiny) continue;
        ++examined;
        for (const Entry& e : acol_[j]) {
          if (std::abs(e.value) < kThreshold * mx) continue;
          const long cost = static_cast<long>(count - 1) * static_cast<long>(arow_[e.index].size() - 1);
          if (best_cost < 0 || cost < best_cost ||
              (cost == best_cost && std::abs(e.value) > std::abs(value_at(pc, pr)))) {
            best_cost = cost;
            pr = e.index;
            pc = j;
          }
        }
      }
    }
    if (best_cost >= 0) return true;
    // rows of length >= 2 whose columns are all tiny leave the basis singular
    return false;
  }

  Scalar value_at(int j, int i) const {
    for (const Entry& e : acol_[j]) {
      if (e.index == i) return e.value;
    }
    return Scalar(0);
  }

  void eliminate(int pr, int pc) {
    const Scalar pivot = value_at(pc, pr);
    pivot_row_.push_back(pr);
    pivot_col_.push_back(pc);
    u_diag_.push_back(pivot);

    // U row: remaining entries of the pivot row
    std::vector<int> row_cols;
    for (int c : arow_[pr]) {
      if (c == pc) continue;
      const Scalar v = value_at(c, pr);
      row_cols.push_back(c);
      u_row_entries_.push_back({c, v});
      auto& col = acol_[c];
      for (std::size_t k = 0; k < col.size(); ++k) {
        if (col[k].index == pr) {
          col[k] = col.back();
          col.pop_back();
          break;
        }
      }
    }
    u_row_start_.push_back(static_cast<int>(u_row_entries_.size()));

    // L column: multipliers of the pivot column
    const std::size_t l_begin = l_entries_.size();
    for (const Entry& e : acol_[pc]) {
      if (e.index == pr) continue;
      l_entries_.push_back({e.index, e.value / pivot});
      auto& row = arow_[e.index];
      row.erase(std::find(row.begin(), row.end(), pc));
    }
    l_start_.push_back(static_cast<int>(l_entries_.size()));

    // Schur complement update
    const std::size_t u_begin = u_row_entries_.size() - row_cols.size();
    for (std::size_t k = 0; k < row_cols.size(); ++k) {
      const int c = row_cols[k];
      const Scalar uc = u_row_entries_[u_begin + k].value;
      auto& col = acol_[c];
      for (std::size_t q = 0; q < col.size(); ++q) mark_[col[q].index] = static_cast<int>(q);
      for (std::size_t e = l_begin; e < l_entries_.size(); ++e) {
        const int r = l_entries_[e].index;
        const Scalar delta = -l_entries_[e].value * uc;
        if (mark_[r] >= 0) {
          col[mark_[r]].value += delta;
        } else {
          mark_[r] = static_cast<int>(col.size());
          col.push_back({r, delta});
          arow_[r].push_back(c);
        }
      }
      for (const Entry& e : col) mark_[e.index] = -1;
      col_bucket_[col.size()].push_back(c);
    }
    for (std::size_t e = l_begin; e < l_entries_.size(); ++e) {
      const int r = l_entries_[e].index;
      row_bucket_[arow_[r].size()].push_back(r);
    }

    acol_[pc].clear();
    arow_[pr].clear();
    col_alive_[pc] = 0;
    row_alive_[pr] = 0;
  }

  /// Column-oriented copy of U for ftran: for the column pivoted at step k,
  /// the entries it has in rows pivoted earlier.
  void build_u_columns() {
    const int steps = static_cast<int>(pivot_row_.size());
    std::vector<int> step_of_col(static_cast<std::size_t>(m_), -1);
    for (int k = 0; k < steps; ++k) step_of_col[pivot_col_[k]] = k;
    std::vector<int> count(static_cast<std::size_t>(steps) + 1, 0);
    for (int k = 0; k < steps; ++k) {
      for (int e = u_row_start_[k]; e < u_row_start_[k + 1]; ++e) {
        const int s = step_of_col[u_row_entries_[e].index];
        if (s >= 0) ++count[s + 1];
      }
    }
    u_col_start_.assign(static_cast<std::size_t>(steps) + 1, 0);
    for (int k = 0; k < steps; ++k) u_col_start_[k + 1] = u_col_start_[k] + count[k + 1];
    u_col_entries_.assign(static_cast<std::size_t>(u_col_start_[steps]), {0, Scalar(0)});
    std::vector<int> fillpos(u_col_start_.begin(), u_col_start_.end() - 1);
    for (int k = 0; k < steps; ++k) {
      for (int e = u_row_start_[k]; e < u_row_start_[k + 1]; ++e) {
        const int s = step_of_col[u_row_entries_[e].index];
        if (s < 0) continue;
        u_col_entries_[fillpos[s]++] = {pivot_row_[k], u_row_entries_[e].value};
      }
    }
  }

  int m_ = 0;
  std::vector<int> pivot_row_, pivot_col_;
  std::vector<int> l_start_;
  std::vector<Entry> l_entries_;  // index = row
  std::vector<Scalar> u_diag_;
  std::vector<int> u_row_start_;
  std::vector<Entry> u_row_entries_;  // index = basis position
  std::vector<int> u_col_start_;
  std::vector<Entry> u_col_entries_;  // index = row

  std::vector<std::vector<Entry>> acol_;
  std::vector<std::vector<int>> arow_;
  std::vector<char> col_alive_, row_alive_;
  std::vector<std::vector<int>> col_bucket_, row_bucket_;
  std::vector<int> mark_;
};

}  // namespace wspp::lp::detail
