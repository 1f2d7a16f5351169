#include "wspp/lp/simplex.hpp"

#include <ostream>

namespace wspp::lp {

const char* to_string(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
  }
  return "unknown";
}

const char* to_string(RowSense sense) {
  switch (sense) {
    case RowSense::kLessEqual: return "<=";
    case RowSense::kEqual: return "=";
    case RowSense::kGreaterEqual: return ">=";
  }
  return "?";
}

void write_text(std::ostream& out, const LinearProgram<double>& lp) {
  auto name = [&](Eigen::Index j) {
    return lp.column_names.empty() ? "x" + std::to_string(j) : lp.column_names[j];
  };
  out << "maximize";
  for (Eigen::Index j = 0; j < lp.cols(); ++j) {
    if (lp.objective(j) != 0.0) out << ' ' << std::showpos << lp.objective(j) << std::noshowpos << ' ' << name(j);
  }
  if (lp.objective_offset != 0.0) out << ' ' << std::showpos << lp.objective_offset << std::noshowpos;
  out << '\n';
  const Eigen::SparseMatrix<double, Eigen::RowMajor, int> rows = lp.constraints;
  for (Eigen::Index i = 0; i < lp.rows(); ++i) {
    out << 'r' << i << ':';
    for (Eigen::SparseMatrix<double, Eigen::RowMajor, int>::InnerIterator it(rows, i); it; ++it) {
      out << ' ' << std::showpos << it.value() << std::noshowpos << ' ' << name(it.col());
    }
    out << ' ' << to_string(lp.senses[static_cast<std::size_t>(i)]) << ' ' << lp.rhs(i) << '\n';
  }
  for (Eigen::Index j = 0; j < lp.cols(); ++j) {
    out << lp.lower(j) << " <= " << name(j) << " <= " << lp.upper(j) << '\n';
  }
}

template Solution<double> solve<double>(const LinearProgram<double>&, const SolverOptions<double>&);

}  // namespace wspp::lp
