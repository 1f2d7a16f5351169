#pragma once

#include "wspp/lp/basis_factor.hpp"
#include "wspp/lp/linear_program.hpp"
#include "wspp/lp/presolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace wspp::lp {

namespace detail {

/// Bounded primal revised simplex on a range program. Every row i gets a
/// logical r_i with A x - r = 0 and row_lower <= r <= row_upper; the logicals
/// form the starting basis. Phase one minimizes the sum of bound violations of
/// basic variables, phase two the negated objective.
///
/// Reduced costs are updated from the pivot row and recomputed from scratch
/// after each refactorization. Pricing is Devex; a long run of degenerate
/// pivots switches to Bland's rule until progress resumes.
template <typename Scalar>
class RevisedSimplex {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using SpMat = Eigen::SparseMatrix<Scalar, Eigen::ColMajor, int>;

  RevisedSimplex(const RangeProgram<Scalar>& p, const SolverOptions<Scalar>& options,
                 long max_iterations)
      : a_(p.matrix),
        opt_(options),
        max_iter_(max_iterations),
        m_(static_cast<int>(p.matrix.rows())),
        n_(static_cast<int>(p.matrix.cols())) {
    const int total = n_ + m_;
    lo_.resize(static_cast<std::size_t>(total));
    hi_.resize(static_cast<std::size_t>(total));
    cost_.assign(static_cast<std::size_t>(total), Scalar(0));
    weight_.assign(static_cast<std::size_t>(total), Scalar(1));
    score_.assign(static_cast<std::size_t>(total), Scalar(0));
    x_ = Vector::Zero(total);
    d_ = Vector::Zero(total);
    row_ = Vector::Zero(total);
    row_mark_.assign(static_cast<std::size_t>(total), 0);
    state_.resize(static_cast<std::size_t>(total));
    head_.resize(static_cast<std::size_t>(m_));
    basic_cost_.assign(static_cast<std::size_t>(m_), Scalar(0));
    alpha_ = Vector::Zero(m_);
    rho_ = Vector::Zero(m_);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = p.col_lower(j);
      hi_[j] = p.col_upper(j);
      cost_[j] = -p.cost(j);
    }
    for (int i = 0; i < m_; ++i) {
      lo_[n_ + i] = p.row_lower(i);
      hi_[n_ + i] = p.row_upper(i);
    }
    for (int j = 0; j < n_; ++j) place_at_bound(j);
    for (int i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      state_[n_ + i] = State::kBasic;
    }
    const Eigen::SparseMatrix<Scalar, Eigen::RowMajor, int> rows = a_;
    row_start_.assign(rows.outerIndexPtr(), rows.outerIndexPtr() + m_ + 1);
    row_col_.assign(rows.innerIndexPtr(), rows.innerIndexPtr() + rows.nonZeros());
    row_val_.assign(rows.valuePtr(), rows.valuePtr() + rows.nonZeros());
  }

  Status run() {
    refresh();
    long degenerate_run = 0;
    bool bland = false;
    for (;;) {
      if (iterations_ >= max_iter_) {
        throw NumericalError("simplex iteration limit of " + std::to_string(max_iter_) +
                             " reached");
      }
      if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) refresh();

      const int q = bland ? price_bland() : price_devex();
      if (q < 0) {
        if (!fresh_) {
          refresh();
          continue;
        }
        return phase_one_ ? Status::kInfeasible : Status::kOptimal;
      }
      fresh_ = false;
      const Scalar dir = d_(q) < Scalar(0) ? Scalar(1) : Scalar(-1);

      column(q, alpha_);
      ftran(alpha_);
      nonzeros_.clear();
      for (int i = 0; i < m_; ++i) {
        if (alpha_(i) != Scalar(0)) nonzeros_.push_back(i);
      }

      Scalar theta = kInf;
      Scalar target = Scalar(0);
      const int r = ratio_test(dir, bland, theta, target);
      const Scalar flip = dir > Scalar(0) ? hi_[q] - x_(q) : x_(q) - lo_[q];
      if (r < 0 && flip == kInf) {
        if (phase_one_) throw NumericalError("phase one ray without a blocking bound");
        return Status::kUnbounded;
      }

      const bool bound_flip = flip <= theta;
      const Scalar step = bound_flip ? flip : theta;
      if (step != Scalar(0)) {
        x_(q) += dir * step;
        for (int i : nonzeros_) x_(head_[i]) -= dir * step * alpha_(i);
      }
      bool stale = false;
      if (bound_flip) {
        const bool to_upper = dir > Scalar(0);
        x_(q) = to_upper ? hi_[q] : lo_[q];
        state_[q] = to_upper ? State::kUpper : State::kLower;
        update_score(q);
      } else {
        stale = pivot(q, r, target);
      }
      if (phase_one_ && !stale) stale = phase_costs_changed();
      if (mismatch_) {
        refresh();
        fresh_ = false;
        mismatch_ = false;
      } else if (stale) {
        recompute_duals();
      }

      if (step <= kDegenerateStep) {
        if (++degenerate_run > kDegenerateLimit) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      ++iterations_;
    }
  }

  Vector structural_values() const { return x_.head(n_); }
  long iterations() const { return iterations_; }

 private:
  enum class State : unsigned char { kBasic, kLower, kUpper, kFree, kFixed };

  struct Eta {
    int row;
    Scalar pivot;
    std::vector<int> index;
    std::vector<Scalar> value;
  };

  static constexpr Scalar kInf = kInfinity<Scalar>;
  static constexpr Scalar kTieTolerance = Scalar(1e-12);
  static constexpr Scalar kDegenerateStep = Scalar(1e-12);
  static constexpr long kDegenerateLimit = 50;
  static constexpr Scalar kWeightLimit = Scalar(1e8);
  static constexpr Scalar kRowMismatch = Scalar(1e-8);

  void place_at_bound(int j) {
    if (lo_[j] == hi_[j]) {
      state_[j] = State::kFixed;
      x_(j) = lo_[j];
    } else if (lo_[j] < Scalar(0) && hi_[j] > Scalar(0)) {
      state_[j] = State::kFree;
      x_(j) = Scalar(0);
    } else if (lo_[j] != -kInf) {
      state_[j] = State::kLower;
      x_(j) = lo_[j];
    } else {
      state_[j] = State::kUpper;
      x_(j) = hi_[j];
    }
  }

  /// Cost of basic variable j under the current phase.
  Scalar phase_cost(int j) const {
    if (!phase_one_) return cost_[j];
    if (x_(j) < lo_[j] - opt_.feasibility_tolerance) return Scalar(-1);
    if (x_(j) > hi_[j] + opt_.feasibility_tolerance) return Scalar(1);
    return Scalar(0);
  }

  bool any_infeasible() const {
    const Scalar tol = opt_.feasibility_tolerance;
    for (int i = 0; i < m_; ++i) {
      const int j = head_[i];
      if (x_(j) < lo_[j] - tol || x_(j) > hi_[j] + tol) return true;
    }
    return false;
  }

  void refresh() {
    refactor();
    recompute_duals();
    fresh_ = true;
  }

  void recompute_duals() {
    const bool was_phase_one = phase_one_;
    phase_one_ = any_infeasible();
    if (was_phase_one != phase_one_) std::fill(weight_.begin(), weight_.end(), Scalar(1));
    Vector y(m_);
    for (int i = 0; i < m_; ++i) {
      basic_cost_[i] = phase_cost(head_[i]);
      y(i) = basic_cost_[i];
    }
    btran(y);
    const int total = n_ + m_;
    for (int j = 0; j < total; ++j) {
      if (state_[j] == State::kBasic) {
        d_(j) = Scalar(0);
      } else {
        d_(j) = (phase_one_ ? Scalar(0) : cost_[j]) - dot_column(j, y);
      }
      update_score(j);
    }
  }

  void update_score(int j) { score_[j] = eligible(j) ? d_(j) * d_(j) / weight_[j] : Scalar(0); }

  void reset_weights() {
    std::fill(weight_.begin(), weight_.end(), Scalar(1));
    const int total = n_ + m_;
    for (int j = 0; j < total; ++j) update_score(j);
  }

  /// Whether the last step moved any basic variable across one of its bounds.
  bool phase_costs_changed() const {
    for (int i : nonzeros_) {
      if (phase_cost(head_[i]) != basic_cost_[i]) return true;
    }
    return false;
  }

  Scalar dot_column(int j, const Vector& y) const {
    if (j >= n_) return -y(j - n_);
    const int* outer = a_.outerIndexPtr();
    const int* inner = a_.innerIndexPtr();
    const Scalar* val = a_.valuePtr();
    Scalar s = Scalar(0);
    for (int k = outer[j]; k < outer[j + 1]; ++k) s += val[k] * y(inner[k]);
    return s;
  }

  bool eligible(int j) const {
    const State s = state_[j];
    if (s == State::kBasic || s == State::kFixed) return false;
    const Scalar d = d_(j);
    if (d < -opt_.optimality_tolerance) return s == State::kLower || s == State::kFree;
    if (d > opt_.optimality_tolerance) return s == State::kUpper || s == State::kFree;
    return false;
  }

  int price_devex() const {
    int best = -1;
    Scalar best_score = Scalar(0);
    const int total = n_ + m_;
    for (int j = 0; j < total; ++j) {
      if (score_[j] > best_score) {
        best_score = score_[j];
        best = j;
      }
    }
    return best;
  }

  int price_bland() const {
    const int total = n_ + m_;
    for (int j = 0; j < total; ++j) {
      if (score_[j] > Scalar(0)) return j;
    }
    return -1;
  }

  /// Bounded ratio test. In phase one an infeasible basic variable blocks only
  /// at the bound it violates. Ties go to the largest pivot, or the lowest
  /// variable index under Bland's rule.
  int ratio_test(Scalar dir, bool bland, Scalar& theta, Scalar& target) const {
    const Scalar tol = opt_.feasibility_tolerance;
    int leave = -1;
    Scalar best_abs = Scalar(0);
    for (int i : nonzeros_) {
      const Scalar a = alpha_(i);
      if (std::abs(a) <= opt_.pivot_tolerance) continue;
      const Scalar delta = -dir * a;
      const int j = head_[i];
      const Scalar v = x_(j);
      Scalar t, bound;
      if (delta < Scalar(0)) {
        if (v < lo_[j] - tol) continue;
        if (v > hi_[j] + tol) {
          t = (v - hi_[j]) / -delta;
          bound = hi_[j];
        } else {
          if (lo_[j] == -kInf) continue;
          t = std::max(Scalar(0), v - lo_[j]) / -delta;
          bound = lo_[j];
        }
      } else {
        if (v > hi_[j] + tol) continue;
        if (v < lo_[j] - tol) {
          t = (lo_[j] - v) / delta;
          bound = lo_[j];
        } else {
          if (hi_[j] == kInf) continue;
          t = std::max(Scalar(0), hi_[j] - v) / delta;
          bound = hi_[j];
        }
      }
      const Scalar tie = kTieTolerance * (Scalar(1) + std::abs(leave < 0 ? t : theta));
      bool take = false;
      if (leave < 0 || t < theta - tie) {
        take = true;
      } else if (t <= theta + tie) {
        take = bland ? j < head_[leave] : std::abs(a) > best_abs;
      }
      if (take) {
        leave = i;
        theta = t;
        target = bound;
        best_abs = std::abs(a);
      }
    }
    return leave;
  }

  /// Exchanges head_[r] for q and updates reduced costs and Devex weights
  /// from the pivot row. Returns true when the leaving variable carried a
  /// phase-one cost, which the update does not account for. Sets mismatch_ when
  /// the pivot row disagrees with the pivot column.
  bool pivot(int q, int r, Scalar target) {
    const int leaving = head_[r];
    const Scalar alpha_rq = alpha_(r);
    const bool leaving_costed = basic_cost_[r] != (phase_one_ ? Scalar(0) : cost_[leaving]);

    rho_.setZero();
    rho_(r) = Scalar(1);
    btran(rho_);
    touched_.clear();
    for (int i = 0; i < m_; ++i) {
      const Scalar ri = rho_(i);
      if (ri == Scalar(0)) continue;
      for (int k = row_start_[i]; k < row_start_[i + 1]; ++k) {
        const int j = row_col_[k];
        if (state_[j] == State::kBasic) continue;
        if (!row_mark_[j]) {
          row_mark_[j] = 1;
          row_(j) = Scalar(0);
          touched_.push_back(j);
        }
        row_(j) += ri * row_val_[k];
      }
      const int logical = n_ + i;
      if (state_[logical] != State::kBasic) {
        row_mark_[logical] = 1;
        row_(logical) = -ri;
        touched_.push_back(logical);
      }
    }
    const Scalar row_q = row_mark_[q] ? row_(q) : Scalar(0);
    mismatch_ = std::abs(row_q - alpha_rq) > kRowMismatch * (Scalar(1) + std::abs(alpha_rq));

    const Scalar ratio = d_(q) / alpha_rq;
    const Scalar wq = weight_[q];
    bool reset = false;
    for (int j : touched_) {
      row_mark_[j] = 0;
      if (j == q) continue;
      const Scalar scaled = row_(j) / alpha_rq;
      d_(j) -= ratio * row_(j);
      weight_[j] = std::max(weight_[j], scaled * scaled * wq);
      if (weight_[j] > kWeightLimit) reset = true;
      update_score(j);
    }
    d_(q) = Scalar(0);
    d_(leaving) = -ratio;
    weight_[leaving] = std::max(wq / (alpha_rq * alpha_rq), Scalar(1));

    x_(leaving) = target;
    if (lo_[leaving] == hi_[leaving]) {
      state_[leaving] = State::kFixed;
    } else {
      state_[leaving] = target == lo_[leaving] ? State::kLower : State::kUpper;
    }
    head_[r] = q;
    state_[q] = State::kBasic;
    basic_cost_[r] = phase_cost(q);
    score_[q] = Scalar(0);
    if (reset) {
      reset_weights();
    } else {
      update_score(leaving);
    }
    push_eta(r);
    return leaving_costed;
  }

  void column(int j, Vector& out) const {
    out.setZero(m_);
    if (j >= n_) {
      out(j - n_) = Scalar(-1);
      return;
    }
    for (typename SpMat::InnerIterator it(a_, j); it; ++it) out(it.row()) = it.value();
  }

  void refactor() {
    etas_.clear();
    if (m_ > 0) factor_basis();
    Vector rhs = Vector::Zero(m_);
    const int total = n_ + m_;
    for (int j = 0; j < total; ++j) {
      if (state_[j] == State::kBasic || x_(j) == Scalar(0)) continue;
      if (j >= n_) {
        rhs(j - n_) += x_(j);
      } else {
        for (typename SpMat::InnerIterator it(a_, j); it; ++it) rhs(it.row()) -= it.value() * x_(j);
      }
    }
    ftran(rhs);
    for (int i = 0; i < m_; ++i) x_(head_[i]) = rhs(i);
  }

  void factor_basis() {
    using Entry = typename BasisFactor<Scalar>::Entry;
    std::vector<std::vector<Entry>> columns(static_cast<std::size_t>(m_));
    for (int attempt = 0;; ++attempt) {
      for (int i = 0; i < m_; ++i) {
        auto& col = columns[i];
        col.clear();
        const int j = head_[i];
        if (j >= n_) {
          col.push_back({j - n_, Scalar(-1)});
        } else {
          for (typename SpMat::InnerIterator it(a_, j); it; ++it) {
            col.push_back({static_cast<int>(it.row()), it.value()});
          }
        }
      }
      std::vector<int> free_rows;
      const std::vector<int> bad = lu_.factor(m_, columns, free_rows);
      if (bad.empty()) return;
      if (attempt >= 3) throw NumericalError("basis stays singular after repair");
      // swap the dependent columns for the logicals of the rows left without a pivot
      for (std::size_t k = 0; k < bad.size(); ++k) {
        make_nonbasic_near(head_[bad[k]]);
        head_[bad[k]] = n_ + free_rows[k];
        state_[n_ + free_rows[k]] = State::kBasic;
      }
    }
  }

  void make_nonbasic_near(int j) {
    const Scalar v = x_(j);
    if (lo_[j] == hi_[j]) {
      state_[j] = State::kFixed;
      x_(j) = lo_[j];
    } else if (lo_[j] == -kInf && hi_[j] == kInf) {
      state_[j] = State::kFree;
    } else if (hi_[j] == kInf || (lo_[j] != -kInf && v - lo_[j] <= hi_[j] - v)) {
      state_[j] = State::kLower;
      x_(j) = lo_[j];
    } else {
      state_[j] = State::kUpper;
      x_(j) = hi_[j];
    }
  }

  /// Row-indexed v in, basis-position-indexed B^-1 v out (in place).
  void ftran(Vector& v) const {
    if (m_ == 0) return;
    lu_.ftran(v, work_);
    v.swap(work_);
    for (const Eta& e : etas_) {
      const Scalar z = v(e.row) / e.pivot;
      v(e.row) = z;
      if (z == Scalar(0)) continue;
      for (std::size_t k = 0; k < e.index.size(); ++k) v(e.index[k]) -= e.value[k] * z;
    }
  }

  /// Basis-position-indexed c in, row-indexed B^-T c out (in place).
  void btran(Vector& v) const {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      Scalar s = v(it->row);
      for (std::size_t k = 0; k < it->index.size(); ++k) s -= it->value[k] * v(it->index[k]);
      v(it->row) = s / it->pivot;
    }
    lu_.btran(v, work_);
    v.swap(work_);
  }

  void push_eta(int row) {
    Eta e;
    e.row = row;
    e.pivot = alpha_(row);
    e.index.reserve(nonzeros_.size());
    e.value.reserve(nonzeros_.size());
    for (int i : nonzeros_) {
      if (i == row) continue;
      e.index.push_back(i);
      e.value.push_back(alpha_(i));
    }
    etas_.push_back(std::move(e));
  }

  const SpMat& a_;
  SolverOptions<Scalar> opt_;
  long max_iter_;
  int m_, n_;
  std::vector<int> row_start_, row_col_;
  std::vector<Scalar> row_val_;
  std::vector<Scalar> lo_, hi_, cost_, weight_, score_, basic_cost_;
  Vector x_, d_, alpha_, rho_, row_;
  std::vector<State> state_;
  std::vector<int> head_, nonzeros_, touched_;
  std::vector<char> row_mark_;
  bool phase_one_ = false;
  bool fresh_ = false;
  bool mismatch_ = false;
  BasisFactor<Scalar> lu_;
  mutable Vector work_;
  std::vector<Eta> etas_;
  long iterations_ = 0;
};

}  // namespace detail

/// Solves lp to optimality or proves it infeasible or unbounded.
/// Throws NumericalError when the iteration cap is hit or the basis degenerates numerically.
template <typename Scalar>
Solution<Scalar> solve(const LinearProgram<Scalar>& lp, const SolverOptions<Scalar>& options = {}) {
  lp.check_dimensions();
  if (!(options.pivot_tolerance > 0) || !(options.feasibility_tolerance > 0) ||
      !(options.optimality_tolerance > 0) || options.refactor_interval < 1) {
    throw std::invalid_argument("solver tolerances must be positive");
  }
  const long cap = options.max_iterations > 0
                       ? options.max_iterations
                       : 50L * static_cast<long>(lp.rows() + lp.cols());

  Solution<Scalar> solution;
  detail::Presolver<Scalar> presolver(lp, options.feasibility_tolerance);
  detail::RangeProgram<Scalar> reduced;
  if (options.presolve) {
    if (!presolver.run()) {
      solution.status = Status::kInfeasible;
      solution.x = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(lp.cols());
      solution.objective_value = -kInfinity<Scalar>;
      return solution;
    }
    reduced = presolver.reduced();
  } else {
    reduced = detail::to_range_program(lp);
  }

  detail::RevisedSimplex<Scalar> simplex(reduced, options, std::max(cap, 1L));
  solution.status = simplex.run();
  solution.iterations = simplex.iterations();
  solution.x = options.presolve ? presolver.postsolve(simplex.structural_values())
                                : simplex.structural_values();
  switch (solution.status) {
    case Status::kOptimal:
      solution.objective_value = lp.objective.dot(solution.x) + lp.objective_offset;
      break;
    case Status::kUnbounded:
      solution.objective_value = kInfinity<Scalar>;
      break;
    case Status::kInfeasible:
      solution.objective_value = -kInfinity<Scalar>;
      break;
  }
  return solution;
}

}  // namespace wspp::lp
