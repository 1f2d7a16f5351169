#pragma once

// Internal to lp_core: reduction of a LinearProgram to a smaller range-row
// program, and recovery of the full primal point afterwards.

#include "wspp/lp/linear_program.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace wspp::lp::detail {

/// maximize cost'x + offset  s.t.  row_lower <= A x <= row_upper,  col_lower <= x <= col_upper.
template <typename Scalar>
struct RangeProgram {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Eigen::SparseMatrix<Scalar, Eigen::ColMajor, int> matrix;
  Vector cost;
  Vector col_lower, col_upper;
  Vector row_lower, row_upper;
  Scalar offset = Scalar(0);
};

template <typename Scalar>
class Presolver {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Presolver(const LinearProgram<Scalar>& lp, Scalar feasibility_tolerance)
      : n_(static_cast<int>(lp.cols())),
        m_(static_cast<int>(lp.rows())),
        tol_(feasibility_tolerance),
        rows_(static_cast<std::size_t>(m_)),
        cols_(static_cast<std::size_t>(n_)),
        row_lo_(static_cast<std::size_t>(m_)),
        row_hi_(static_cast<std::size_t>(m_)),
        col_lo_(lp.lower.data(), lp.lower.data() + n_),
        col_hi_(lp.upper.data(), lp.upper.data() + n_),
        cost_(lp.objective.data(), lp.objective.data() + n_),
        row_alive_(static_cast<std::size_t>(m_), 1),
        col_alive_(static_cast<std::size_t>(n_), 1),
        offset_(lp.objective_offset) {
    for (int j = 0; j < n_; ++j) {
      for (typename LinearProgram<Scalar>::SparseMatrix::InnerIterator it(lp.constraints, j); it;
           ++it) {
        if (it.value() == Scalar(0)) continue;
        cols_[j].push_back({static_cast<int>(it.row()), it.value()});
        rows_[it.row()].push_back({j, it.value()});
      }
    }
    for (int i = 0; i < m_; ++i) {
      const Scalar b = lp.rhs(i);
      switch (lp.senses[static_cast<std::size_t>(i)]) {
        case RowSense::kLessEqual: row_lo_[i] = -kInf; row_hi_[i] = b; break;
        case RowSense::kGreaterEqual: row_lo_[i] = b; row_hi_[i] = kInf; break;
        case RowSense::kEqual: row_lo_[i] = b; row_hi_[i] = b; break;
      }
    }
  }

  /// Applies reductions to a fixpoint. Returns false if infeasibility was proven.
  bool run() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int j = 0; j < n_; ++j) {
        if (!col_alive_[j]) continue;
        if (!fix_crossed_bounds(j)) return false;
        if (col_lo_[j] == col_hi_[j]) {
          substitute_fixed(j, col_lo_[j]);
          changed = true;
        } else if (cols_[j].empty() && fix_empty_column(j)) {
          changed = true;
        }
      }
      for (int i = 0; i < m_; ++i) {
        if (!row_alive_[i]) continue;
        const auto size = rows_[i].size();
        if (row_lo_[i] == -kInf && row_hi_[i] == kInf) {
          remove_row(i);
          changed = true;
        } else if (size == 0) {
          if (row_lo_[i] > tol_ * scale(row_lo_[i]) || row_hi_[i] < -tol_ * scale(row_hi_[i])) {
            return false;
          }
          remove_row(i);
          changed = true;
        } else if (size == 1) {
          if (!row_singleton(i)) return false;
          changed = true;
        } else if (size == 2 && row_lo_[i] == row_hi_[i]) {
          if (doubleton_equation(i)) changed = true;
        }
      }
      for (int j = 0; j < n_; ++j) {
        if (!col_alive_[j] || col_lo_[j] != -kInf || col_hi_[j] != kInf) continue;
        if (cols_[j].size() < 2 || cols_[j].size() > kMaxFreeColumnEntries) continue;
        if (free_column_substitution(j)) changed = true;
      }
      for (int j = 0; j < n_; ++j) {
        if (!col_alive_[j] || cols_[j].size() != 1) continue;
        const int i = cols_[j].front().index;
        if (row_lo_[i] == row_hi_[i] && rows_[i].size() >= 2) {
          column_singleton(j);
          changed = true;
        }
      }
    }
    return true;
  }

  RangeProgram<Scalar> reduced() {
    RangeProgram<Scalar> out;
    col_map_.assign(static_cast<std::size_t>(n_), -1);
    std::vector<int> row_map(static_cast<std::size_t>(m_), -1);
    int kept_cols = 0, kept_rows = 0;
    for (int j = 0; j < n_; ++j) {
      if (col_alive_[j]) col_map_[j] = kept_cols++;
    }
    for (int i = 0; i < m_; ++i) {
      if (row_alive_[i]) row_map[i] = kept_rows++;
    }
    out.cost.resize(kept_cols);
    out.col_lower.resize(kept_cols);
    out.col_upper.resize(kept_cols);
    out.row_lower.resize(kept_rows);
    out.row_upper.resize(kept_rows);
    std::vector<Eigen::Triplet<Scalar, int>> triplets;
    for (int j = 0; j < n_; ++j) {
      const int c = col_map_[j];
      if (c < 0) continue;
      out.cost(c) = cost_[j];
      out.col_lower(c) = col_lo_[j];
      out.col_upper(c) = col_hi_[j];
      for (const auto& e : cols_[j]) triplets.emplace_back(row_map[e.index], c, e.value);
    }
    for (int i = 0; i < m_; ++i) {
      if (row_map[i] < 0) continue;
      out.row_lower(row_map[i]) = row_lo_[i];
      out.row_upper(row_map[i]) = row_hi_[i];
    }
    out.matrix.resize(kept_rows, kept_cols);
    out.matrix.setFromTriplets(triplets.begin(), triplets.end());
    out.matrix.makeCompressed();
    out.offset = offset_;
    return out;
  }

  /// Expands a point of the reduced program to the original column space.
  Vector postsolve(const Vector& reduced_x) const {
    Vector x = Vector::Zero(n_);
    for (int j = 0; j < n_; ++j) {
      if (col_map_[j] >= 0) x(j) = reduced_x(col_map_[j]);
    }
    for (auto it = records_.rbegin(); it != records_.rend(); ++it) {
      Scalar v = it->constant;
      for (const auto& t : it->terms) v += t.value * x(t.index);
      x(it->column) = v;
    }
    return x;
  }

 private:
  struct Entry {
    int index;
    Scalar value;
  };
  /// x[column] = constant + sum(terms.value * x[terms.index])
  struct Record {
    int column;
    Scalar constant;
    std::vector<Entry> terms;
  };

  static constexpr Scalar kInf = kInfinity<Scalar>;
  static constexpr Scalar kDropTolerance = Scalar(1e-12);
  static constexpr std::size_t kMaxFreeColumnEntries = 4;
  static constexpr std::size_t kMaxSubstitutionRow = 6;

  static Scalar scale(Scalar v) { return std::max(Scalar(1), std::abs(v)); }

  static Entry* find(std::vector<Entry>& list, int index) {
    for (auto& e : list) {
      if (e.index == index) return &e;
    }
    return nullptr;
  }

  static void erase(std::vector<Entry>& list, int index) {
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (list[k].index == index) {
        list[k] = list.back();
        list.pop_back();
        return;
      }
    }
  }

  void add_coefficient(int row, int col, Scalar delta) {
    if (Entry* e = find(rows_[row], col)) {
      const Scalar v = e->value + delta;
      if (std::abs(v) <= kDropTolerance * std::max(std::abs(e->value), std::abs(delta))) {
        erase(rows_[row], col);
        erase(cols_[col], row);
      } else {
        e->value = v;
        find(cols_[col], row)->value = v;
      }
    } else if (delta != Scalar(0)) {
      rows_[row].push_back({col, delta});
      cols_[col].push_back({row, delta});
    }
  }

  void remove_row(int i) {
    for (const auto& e : rows_[i]) erase(cols_[e.index], i);
    rows_[i].clear();
    row_alive_[i] = 0;
  }

  void remove_column(int j) {
    for (const auto& e : cols_[j]) erase(rows_[e.index], j);
    cols_[j].clear();
    col_alive_[j] = 0;
  }

  void shift_row(int i, Scalar delta) {
    row_lo_[i] -= delta;
    row_hi_[i] -= delta;
  }

  bool fix_crossed_bounds(int j) {
    if (col_lo_[j] <= col_hi_[j]) return true;
    if (col_lo_[j] - col_hi_[j] > tol_ * scale(col_lo_[j])) return false;
    col_hi_[j] = col_lo_[j];
    return true;
  }

  void substitute_fixed(int j, Scalar value) {
    for (const auto& e : cols_[j]) shift_row(e.index, e.value * value);
    offset_ += cost_[j] * value;
    records_.push_back({j, value, {}});
    remove_column(j);
  }

  /// An empty column sits at its most profitable finite bound; an improving
  /// infinite direction is left for the simplex to report as unbounded.
  bool fix_empty_column(int j) {
    const Scalar c = cost_[j];
    Scalar value;
    if (c > Scalar(0)) {
      if (col_hi_[j] == kInf) return false;
      value = col_hi_[j];
    } else if (c < Scalar(0)) {
      if (col_lo_[j] == -kInf) return false;
      value = col_lo_[j];
    } else {
      value = col_lo_[j] != -kInf ? col_lo_[j] : (col_hi_[j] != kInf ? col_hi_[j] : Scalar(0));
    }
    substitute_fixed(j, value);
    return true;
  }

  bool tighten(int j, Scalar lo, Scalar hi) {
    col_lo_[j] = std::max(col_lo_[j], lo);
    col_hi_[j] = std::min(col_hi_[j], hi);
    return fix_crossed_bounds(j);
  }

  bool row_singleton(int i) {
    const Entry e = rows_[i].front();
    Scalar lo = row_lo_[i] / e.value;
    Scalar hi = row_hi_[i] / e.value;
    if (e.value < Scalar(0)) std::swap(lo, hi);
    remove_row(i);
    return tighten(e.index, lo, hi);
  }

  /// a*x_e + b*x_o = rhs: x_e is eliminated and its bounds move onto x_o.
  bool doubleton_equation(int i) {
    Entry first = rows_[i][0], second = rows_[i][1];
    const bool first_better = cols_[first.index].size() <= cols_[second.index].size();
    Entry elim = first_better ? first : second;
    Entry other = first_better ? second : first;
    if (std::abs(elim.value) < Scalar(1e-3) * std::abs(other.value)) std::swap(elim, other);
    const int e = elim.index, o = other.index;
    const Scalar rhs = row_lo_[i];
    Scalar t1 = (rhs - elim.value * col_lo_[e]) / other.value;
    Scalar t2 = (rhs - elim.value * col_hi_[e]) / other.value;
    if (std::isnan(t1) || std::isnan(t2)) return false;
    if (!tighten(o, std::min(t1, t2), std::max(t1, t2))) {
      // Bounds on x_o now conflict; leave the row for the simplex to judge.
      return false;
    }
    Record rec{e, rhs / elim.value, {{o, -other.value / elim.value}}};
    remove_row(i);
    eliminate(e, rec);
    return true;
  }

  /// Equality row with a column that appears nowhere else: the column is
  /// expressed from the row, whose bounds become a range on the remaining terms.
  void column_singleton(int j) {
    const int i = cols_[j].front().index;
    const Scalar a = cols_[j].front().value;
    const Scalar b = row_lo_[i];
    Record rec{j, b / a, {}};
    for (const auto& e : rows_[i]) {
      if (e.index != j) rec.terms.push_back({e.index, -e.value / a});
    }
    Scalar lo = b - a * col_hi_[j];
    Scalar hi = b - a * col_lo_[j];
    if (a < Scalar(0)) std::swap(lo, hi);
    row_lo_[i] = lo;
    row_hi_[i] = hi;
    for (const auto& t : rec.terms) cost_[t.index] += cost_[j] * t.value;
    offset_ += cost_[j] * rec.constant;
    records_.push_back(rec);
    remove_column(j);
  }

  bool free_column_substitution(int j) {
    int best = -1;
    for (const auto& e : cols_[j]) {
      const int i = e.index;
      if (row_lo_[i] != row_hi_[i] || rows_[i].size() > kMaxSubstitutionRow) continue;
      if (std::abs(e.value) < Scalar(1e-3)) continue;
      if (best < 0 || rows_[i].size() < rows_[best].size()) best = i;
    }
    if (best < 0) return false;
    const Scalar a = find(rows_[best], j)->value;
    Record rec{j, row_lo_[best] / a, {}};
    for (const auto& e : rows_[best]) {
      if (e.index != j) rec.terms.push_back({e.index, -e.value / a});
    }
    remove_row(best);
    eliminate(j, rec);
    return true;
  }

  /// Replaces column j by rec in every remaining row and in the objective.
  void eliminate(int j, const Record& rec) {
    const std::vector<Entry> uses = cols_[j];
    remove_column(j);
    for (const auto& use : uses) {
      shift_row(use.index, use.value * rec.constant);
      for (const auto& t : rec.terms) add_coefficient(use.index, t.index, use.value * t.value);
    }
    offset_ += cost_[j] * rec.constant;
    for (const auto& t : rec.terms) cost_[t.index] += cost_[j] * t.value;
    records_.push_back(rec);
  }

  int n_, m_;
  Scalar tol_;
  std::vector<std::vector<Entry>> rows_, cols_;
  std::vector<Scalar> row_lo_, row_hi_, col_lo_, col_hi_, cost_;
  std::vector<char> row_alive_, col_alive_;
  Scalar offset_;
  std::vector<Record> records_;
  std::vector<int> col_map_;
};

/// Range-row form without any reductions.
template <typename Scalar>
RangeProgram<Scalar> to_range_program(const LinearProgram<Scalar>& lp) {
  RangeProgram<Scalar> out;
  out.matrix = lp.constraints;
  out.matrix.makeCompressed();
  out.cost = lp.objective;
  out.col_lower = lp.lower;
  out.col_upper = lp.upper;
  out.offset = lp.objective_offset;
  const auto m = lp.rows();
  out.row_lower.resize(m);
  out.row_upper.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Scalar b = lp.rhs(i);
    switch (lp.senses[static_cast<std::size_t>(i)]) {
      case RowSense::kLessEqual:
        out.row_lower(i) = -kInfinity<Scalar>;
        out.row_upper(i) = b;
        break;
      case RowSense::kGreaterEqual:
        out.row_lower(i) = b;
        out.row_upper(i) = kInfinity<Scalar>;
        break;
      case RowSense::kEqual:
        out.row_lower(i) = b;
        out.row_upper(i) = b;
        break;
    }
  }
  return out;
}

}  // namespace wspp::lp::detail
