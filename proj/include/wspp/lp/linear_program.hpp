#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wspp::lp {

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

enum class Status { kOptimal, kInfeasible, kUnbounded };

const char* to_string(Status status);
const char* to_string(RowSense sense);

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when pivoting stalls past the iteration cap or the basis becomes singular.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
inline constexpr Scalar kInfinity = std::numeric_limits<Scalar>::infinity();

/// maximize objective'x + objective_offset
/// subject to constraints * x (sense) rhs, lower <= x <= upper.
template <typename Scalar>
struct LinearProgram {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::ColMajor, int>;

  Vector objective;
  Scalar objective_offset = Scalar(0);
  SparseMatrix constraints;
  std::vector<RowSense> senses;
  Vector rhs;
  Vector lower;
  Vector upper;
  /// Optional; either empty or one label per column.
  std::vector<std::string> column_names;

  Eigen::Index rows() const { return constraints.rows(); }
  Eigen::Index cols() const { return constraints.cols(); }

  void check_dimensions() const {
    const auto m = constraints.rows();
    const auto n = constraints.cols();
    if (static_cast<Eigen::Index>(senses.size()) != m || rhs.size() != m) {
      throw DimensionError("row count differs between matrix, senses and rhs");
    }
    if (objective.size() != n || lower.size() != n || upper.size() != n) {
      throw DimensionError("column count differs between matrix, objective and bounds");
    }
    if (!column_names.empty() && static_cast<Eigen::Index>(column_names.size()) != n) {
      throw DimensionError("column_names must be empty or match the column count");
    }
    if (!objective.allFinite() || !rhs.allFinite()) {
      throw DimensionError("objective and rhs entries must be finite");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::isnan(lower(j)) || std::isnan(upper(j)) || lower(j) == kInfinity<Scalar> ||
          upper(j) == -kInfinity<Scalar>) {
        throw DimensionError("invalid bound on column " + std::to_string(j));
      }
    }
  }
};

template <typename Scalar>
struct Term {
  int column;
  Scalar coefficient;
};

/// Incremental construction of a LinearProgram from columns and sparse rows.
template <typename Scalar>
class LinearProgramBuilder {
 public:
  int add_column(Scalar cost, Scalar lower, Scalar upper, std::string name = {}) {
    costs_.push_back(cost);
    lower_.push_back(lower);
    upper_.push_back(upper);
    if (!name.empty() || !names_.empty()) {
      names_.resize(costs_.size() - 1);
      names_.push_back(std::move(name));
    }
    return static_cast<int>(costs_.size()) - 1;
  }

  int add_row(std::span<const Term<Scalar>> terms, RowSense sense, Scalar rhs) {
    const int row = static_cast<int>(senses_.size());
    for (const auto& term : terms) {
      if (term.column < 0 || term.column >= static_cast<int>(costs_.size())) {
        throw DimensionError("row references unknown column " + std::to_string(term.column));
      }
      if (term.coefficient != Scalar(0)) triplets_.emplace_back(row, term.column, term.coefficient);
    }
    senses_.push_back(sense);
    rhs_.push_back(rhs);
    return row;
  }

  int add_row(std::initializer_list<Term<Scalar>> terms, RowSense sense, Scalar rhs) {
    return add_row(std::span<const Term<Scalar>>(terms.begin(), terms.size()), sense, rhs);
  }

  void add_to_cost(int column, Scalar delta) { costs_.at(column) += delta; }
  void add_to_offset(Scalar delta) { offset_ += delta; }

  int columns() const { return static_cast<int>(costs_.size()); }
  int rows() const { return static_cast<int>(senses_.size()); }

  LinearProgram<Scalar> build() const {
    using LP = LinearProgram<Scalar>;
    LP lp;
    const auto n = static_cast<Eigen::Index>(costs_.size());
    const auto m = static_cast<Eigen::Index>(senses_.size());
    lp.objective = Eigen::Map<const typename LP::Vector>(costs_.data(), n);
    lp.lower = Eigen::Map<const typename LP::Vector>(lower_.data(), n);
    lp.upper = Eigen::Map<const typename LP::Vector>(upper_.data(), n);
    lp.rhs = Eigen::Map<const typename LP::Vector>(rhs_.data(), m);
    lp.senses = senses_;
    lp.objective_offset = offset_;
    lp.constraints.resize(m, n);
    lp.constraints.setFromTriplets(triplets_.begin(), triplets_.end());
    lp.constraints.makeCompressed();
    if (!names_.empty()) {
      lp.column_names = names_;
      lp.column_names.resize(static_cast<std::size_t>(n));
    }
    lp.check_dimensions();
    return lp;
  }

 private:
  std::vector<Scalar> costs_, lower_, upper_, rhs_;
  std::vector<RowSense> senses_;
  std::vector<Eigen::Triplet<Scalar, int>> triplets_;
  std::vector<std::string> names_;
  Scalar offset_ = Scalar(0);
};

template <typename Scalar>
struct SolverOptions {
  Scalar pivot_tolerance = Scalar(1e-9);
  Scalar feasibility_tolerance = Scalar(1e-7);
  Scalar optimality_tolerance = Scalar(1e-9);
  /// Zero selects 50 * (rows + cols) of the original program.
  long max_iterations = 0;
  int refactor_interval = 100;
  bool presolve = true;
};

template <typename Scalar>
struct Solution {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Status status = Status::kInfeasible;
  Vector x;
  /// Includes the program's objective_offset.
  Scalar objective_value = Scalar(0);
  long iterations = 0;

  bool optimal() const { return status == Status::kOptimal; }
};

template <typename Scalar>
struct FeasibilityReport {
  Scalar max_row_violation = Scalar(0);
  Scalar max_bound_violation = Scalar(0);
  Scalar objective = Scalar(0);
  bool feasible = true;
};

/// Independent residual check of x against every row and bound of lp.
template <typename Scalar>
FeasibilityReport<Scalar> check_feasible(
    const LinearProgram<Scalar>& lp,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x,
    Scalar tol = Scalar(1e-7)) {
  lp.check_dimensions();
  if (x.size() != lp.cols()) throw DimensionError("x length differs from column count");
  FeasibilityReport<Scalar> report;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> activity = lp.constraints * x;
  for (Eigen::Index i = 0; i < lp.rows(); ++i) {
    const Scalar diff = activity(i) - lp.rhs(i);
    Scalar violation = Scalar(0);
    switch (lp.senses[static_cast<std::size_t>(i)]) {
      case RowSense::kLessEqual: violation = std::max(Scalar(0), diff); break;
      case RowSense::kGreaterEqual: violation = std::max(Scalar(0), -diff); break;
      case RowSense::kEqual: violation = std::abs(diff); break;
    }
    report.max_row_violation = std::max(report.max_row_violation, violation);
  }
  for (Eigen::Index j = 0; j < lp.cols(); ++j) {
    const Scalar below = lp.lower(j) - x(j);
    const Scalar above = x(j) - lp.upper(j);
    report.max_bound_violation = std::max({report.max_bound_violation, below, above});
  }
  report.objective = lp.objective.dot(x) + lp.objective_offset;
  report.feasible = report.max_row_violation <= tol && report.max_bound_violation <= tol;
  return report;
}

/// Plain-text dump, one line per constraint; for debugging only.
void write_text(std::ostream& out, const LinearProgram<double>& lp);

}  // namespace wspp::lp
