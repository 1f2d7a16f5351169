#include "wspp/stochastic_builder.hpp"

#include <algorithm>
#include <cmath>

namespace wspp {

namespace {

constexpr std::array<const char*, kVarCount> kVarNames = {
    "p_dam",       "p_idm",       "p_rm_up",     "p_rm_dw",     "wind_used",
    "ess_energy",  "ess_in",      "ess_out",     "soc",         "pm_traded",
    "delta_bm",    "bm_up",       "bm_dw",       "rm_req_up",   "rm_req_dw",
    "rm_off_up",   "rm_off_dw",   "rm_dev_up",   "rm_dev_dw"};

constexpr std::array<Var, 15> kOperationVars = {
    Var::kWindUsed, Var::kEssEnergy, Var::kEssIn,    Var::kEssOut,   Var::kSoc,
    Var::kPmTraded, Var::kDeltaBm,   Var::kBmUp,     Var::kBmDw,     Var::kRmReqUp,
    Var::kRmReqDw,  Var::kRmOffUp,   Var::kRmOffDw,  Var::kRmDevUp,  Var::kRmDevDw};

constexpr double kInf = lp::kInfinity<double>;

struct Staging {
  bool dam, rm, idm;
};

/// Commitments that must arrive fixed for each phase.
Staging staging(PhaseId phase) {
  switch (phase) {
    case PhaseId::kFrameworkA:
    case PhaseId::kPhase1: return {false, false, false};
    case PhaseId::kPhase2: return {true, false, false};
    case PhaseId::kPhase3: return {true, true, false};
    case PhaseId::kPhase4: return {true, true, true};
  }
  return {false, false, false};
}

void check_staging(PhaseId phase, const FixedDecisions& fixed) {
  const Staging need = staging(phase);
  auto check = [&](bool present, bool required, const char* what) {
    if (present != required) {
      throw StagingError(std::string(to_string(phase)) + (required ? " requires fixed " : " must not fix ") +
                         what);
    }
  };
  check(fixed.p_dam.has_value(), need.dam, "p_dam");
  check(fixed.p_rm.has_value(), need.rm, "p_rm");
  check(fixed.p_idm.has_value(), need.idm, "p_idm");
  auto finite = [&](const HourlyVector& v, const char* what) {
    if (!v.allFinite()) throw StagingError(std::string("fixed ") + what + " must be finite");
  };
  if (fixed.p_dam) finite(*fixed.p_dam, "p_dam");
  if (fixed.p_idm) finite(*fixed.p_idm, "p_idm");
  if (fixed.p_rm) {
    finite(fixed.p_rm->up, "p_rm_up");
    finite(fixed.p_rm->dw, "p_rm_dw");
  }
}

/// A commitment is either a column of the model or a fixed constant.
struct Affine {
  int column = -1;
  double constant = 0.0;
};

class ModelAssembler {
 public:
  ModelAssembler(PhaseId phase, const SystemParams& params, const ScenarioSet& scenarios,
                 const FixedDecisions& fixed)
      : phase_(phase),
        p_(params),
        scenarios_(scenarios),
        fixed_(fixed),
        index_(phase, static_cast<int>(scenarios.size())) {}

  PhaseModel assemble() {
    add_columns();
    for (int s = 0; s < index_.scenarios(); ++s) {
      for (int t = 0; t < kHours; ++t) add_hour(s, t);
    }
    add_first_stage_ratio_rows();
    return PhaseModel{phase_, b_.build(), index_, p_, fixed_};
  }

 private:
  std::pair<double, double> bounds(Var v, int s, int t) const {
    const double limit = p_.trade_limit();
    const double pe = p_.ess_power_limit;
    switch (v) {
      case Var::kDam: return {-pe, limit};
      case Var::kIdm: return {-limit, limit};
      case Var::kRmUp:
      case Var::kRmDw:
      case Var::kEssIn:
      case Var::kEssOut: return {0.0, pe};
      case Var::kWindUsed:
        return {0.0, std::min(std::max(scenarios_[s].wind(t), 0.0), p_.rated_wind_power)};
      case Var::kEssEnergy: return {0.0, p_.ess_capacity};
      case Var::kSoc: return {p_.soc_min, 1.0};
      case Var::kPmTraded:
      case Var::kDeltaBm: return {-kInf, kInf};
      case Var::kBmUp:
      case Var::kBmDw: return {0.0, limit};
      default: return {0.0, kInf};
    }
  }

  void add_columns() {
    for (Var v : index_.first_stage()) {
      for (int t = 0; t < kHours; ++t) {
        const auto [lo, hi] = bounds(v, 0, t);
        b_.add_column(0.0, lo, hi);
      }
    }
    for (int s = 0; s < index_.scenarios(); ++s) {
      for (int t = 0; t < kHours; ++t) {
        for (Var v : index_.second_stage()) {
          const auto [lo, hi] = bounds(v, s, t);
          b_.add_column(0.0, lo, hi);
        }
      }
    }
  }

  double fixed_value(Var v, int t) const {
    switch (v) {
      case Var::kDam: return (*fixed_.p_dam)(t);
      case Var::kIdm: return (*fixed_.p_idm)(t);
      case Var::kRmUp: return fixed_.p_rm->up(t);
      case Var::kRmDw: return fixed_.p_rm->dw(t);
      default: return 0.0;
    }
  }

  Affine commitment(Var v, int s, int t) const {
    const int col = index_.column(v, t, s);
    if (col >= 0) return {col, 0.0};
    return {-1, fixed_value(v, t)};
  }

  int col(Var v, int s, int t) const { return index_.column(v, t, s); }

  /// Adds weight * value(a) to the objective.
  void earn(const Affine& a, double weight) {
    if (weight == 0.0) return;
    if (a.column >= 0) {
      b_.add_to_cost(a.column, weight);
    } else {
      b_.add_to_offset(weight * a.constant);
    }
  }

  void add_hour(int s, int t) {
    using lp::RowSense;
    using T = lp::Term<double>;
    const Scenario& sc = scenarios_[s];
    const double rho = sc.probability;
    const DayPrices& pr = sc.prices;
    const double pi_up = sc.regulation.pi_up;
    const double pi_dw = sc.regulation.pi_dw;

    const Affine dam = commitment(Var::kDam, s, t);
    const Affine idm = commitment(Var::kIdm, s, t);
    const Affine rm_up = commitment(Var::kRmUp, s, t);
    const Affine rm_dw = commitment(Var::kRmDw, s, t);

    const int energy = col(Var::kEssEnergy, s, t);
    const int in = col(Var::kEssIn, s, t);
    const int out = col(Var::kEssOut, s, t);

    // storage balance, written recursively from E_0
    {
      std::vector<T> terms = {{energy, 1.0}, {in, -p_.eta_in}, {out, 1.0 / p_.eta_out}};
      if (t > 0) terms.push_back({col(Var::kEssEnergy, s, t - 1), -1.0});
      b_.add_row(terms, RowSense::kEqual, t == 0 ? p_.initial_energy : 0.0);
    }
    b_.add_row({{col(Var::kSoc, s, t), p_.ess_capacity}, {energy, -1.0}}, RowSense::kEqual, 0.0);

    // imbalance against the energy-market position
    {
      std::vector<T> terms = {{col(Var::kDeltaBm, s, t), 1.0}, {col(Var::kPmTraded, s, t), -1.0}};
      double rhs = 0.0;
      for (const Affine& a : {dam, idm}) {
        if (a.column >= 0) {
          terms.push_back({a.column, 1.0});
        } else {
          rhs -= a.constant;
        }
      }
      b_.add_row(terms, RowSense::kEqual, rhs);
    }
    b_.add_row({{col(Var::kDeltaBm, s, t), 1.0}, {col(Var::kBmUp, s, t), -1.0}, {col(Var::kBmDw, s, t), 1.0}},
               RowSense::kEqual, 0.0);

    // energy called by the operator from the committed band
    auto requirement = [&](Var req, const Affine& band, double pi) {
      std::vector<T> terms = {{col(req, s, t), 1.0}};
      double rhs = 0.0;
      if (band.column >= 0) {
        terms.push_back({band.column, -pi});
      } else {
        rhs = pi * band.constant;
      }
      b_.add_row(terms, RowSense::kEqual, rhs);
    };
    requirement(Var::kRmReqUp, rm_up, pi_up);
    requirement(Var::kRmReqDw, rm_dw, pi_dw);

    b_.add_row({{col(Var::kRmDevUp, s, t), 1.0}, {col(Var::kRmReqUp, s, t), -1.0}, {col(Var::kRmOffUp, s, t), 1.0}},
               RowSense::kEqual, 0.0);
    b_.add_row({{col(Var::kRmDevDw, s, t), 1.0}, {col(Var::kRmReqDw, s, t), -1.0}, {col(Var::kRmOffDw, s, t), 1.0}},
               RowSense::kEqual, 0.0);

    // power balance between plant and markets
    b_.add_row({{col(Var::kPmTraded, s, t), 1.0},
                {col(Var::kRmOffUp, s, t), 1.0},
                {col(Var::kRmOffDw, s, t), -1.0},
                {col(Var::kWindUsed, s, t), -1.0},
                {out, -1.0},
                {in, 1.0}},
               RowSense::kEqual, 0.0);

    if (rm_up.column >= 0 && !index_.is_first_stage(Var::kRmUp)) {
      add_ratio_row(rm_up.column, rm_dw.column);
    }

    earn(dam, rho * pr.beta_dam()(t));
    earn(idm, rho * pr.beta_idm()(t));
    earn(rm_up, rho * pr.gamma_rm()(t));
    earn(rm_dw, rho * pr.gamma_rm()(t));
    b_.add_to_cost(col(Var::kRmOffUp, s, t), rho * pr.beta_rm_up()(t));
    b_.add_to_cost(col(Var::kRmOffDw, s, t), -rho * pr.beta_rm_dw()(t));
    b_.add_to_cost(col(Var::kRmDevUp, s, t), -rho * p_.kappa_rm * pr.beta_rm_up()(t));
    b_.add_to_cost(col(Var::kRmDevDw, s, t), -rho * p_.kappa_rm * pr.beta_rm_dw()(t));
    b_.add_to_cost(col(Var::kBmUp, s, t), rho * pr.lambda_bm_up()(t));
    b_.add_to_cost(col(Var::kBmDw, s, t), -rho * pr.lambda_bm_dw()(t));
  }

  /// Up share of the band fixed at r_rm_up: (1 - R) up - R dw = 0.
  void add_ratio_row(int up, int dw) {
    b_.add_row({{up, 1.0 - p_.r_rm_up}, {dw, -p_.r_rm_up}}, lp::RowSense::kEqual, 0.0);
  }

  void add_first_stage_ratio_rows() {
    if (!index_.is_first_stage(Var::kRmUp)) return;
    for (int t = 0; t < kHours; ++t) {
      add_ratio_row(index_.column(Var::kRmUp, t), index_.column(Var::kRmDw, t));
    }
  }

  PhaseId phase_;
  const SystemParams& p_;
  const ScenarioSet& scenarios_;
  const FixedDecisions& fixed_;
  VariableIndex index_;
  lp::LinearProgramBuilder<double> b_;
};

double value_of(const PhaseModel& m, const lp::Solution<double>& sol, Var v, int s, int t) {
  const int c = m.index.column(v, t, s);
  if (c >= 0) return sol.x(c);
  switch (v) {
    case Var::kDam: return m.fixed.p_dam ? (*m.fixed.p_dam)(t) : 0.0;
    case Var::kIdm: return m.fixed.p_idm ? (*m.fixed.p_idm)(t) : 0.0;
    case Var::kRmUp: return m.fixed.p_rm ? m.fixed.p_rm->up(t) : 0.0;
    case Var::kRmDw: return m.fixed.p_rm ? m.fixed.p_rm->dw(t) : 0.0;
    default: return 0.0;
  }
}

void require_optimal(const lp::Solution<double>& solution, const PhaseModel& model) {
  if (!solution.optimal()) {
    throw std::invalid_argument(std::string(to_string(model.phase)) + " solution is " +
                                lp::to_string(solution.status) + ", not optimal");
  }
  if (solution.x.size() != model.lp.cols()) {
    throw lp::DimensionError("solution length differs from the model's column count");
  }
}

}  // namespace

const char* to_string(PhaseId phase) {
  switch (phase) {
    case PhaseId::kFrameworkA: return "framework A";
    case PhaseId::kPhase1: return "phase 1";
    case PhaseId::kPhase2: return "phase 2";
    case PhaseId::kPhase3: return "phase 3";
    case PhaseId::kPhase4: return "phase 4";
  }
  return "unknown phase";
}

const char* to_string(Var v) { return kVarNames[static_cast<std::size_t>(v)]; }

FixedDecisions FixedDecisions::all_of(const CommitmentSchedule& schedule) {
  FixedDecisions f;
  f.p_dam = schedule.p_dam;
  f.p_idm = schedule.p_idm;
  f.p_rm = RegulationBand{schedule.p_rm_up, schedule.p_rm_dw};
  return f;
}

VariableIndex::VariableIndex(PhaseId phase, int n_scenarios)
    : phase_(phase), n_scenarios_(n_scenarios) {
  if (n_scenarios < 1) throw std::invalid_argument("scenario set is empty");
  switch (phase) {
    case PhaseId::kFrameworkA: first_ = {Var::kDam, Var::kIdm, Var::kRmUp, Var::kRmDw}; break;
    case PhaseId::kPhase1:
      first_ = {Var::kDam};
      second_ = {Var::kIdm, Var::kRmUp, Var::kRmDw};
      break;
    case PhaseId::kPhase2:
      first_ = {Var::kRmUp, Var::kRmDw};
      second_ = {Var::kIdm};
      break;
    case PhaseId::kPhase3: first_ = {Var::kIdm}; break;
    case PhaseId::kPhase4: break;
  }
  second_.insert(second_.end(), kOperationVars.begin(), kOperationVars.end());
  slot_.fill(kAbsent);
  for (std::size_t k = 0; k < first_.size(); ++k) slot_[static_cast<int>(first_[k])] = static_cast<int>(k);
  for (std::size_t k = 0; k < second_.size(); ++k) {
    slot_[static_cast<int>(second_[k])] = -1 - static_cast<int>(k);
  }
}

int VariableIndex::columns() const {
  return static_cast<int>(first_.size()) * kHours +
         static_cast<int>(second_.size()) * kHours * n_scenarios_;
}

int VariableIndex::column(Var v, int hour, int scenario) const {
  const int slot = slot_[static_cast<int>(v)];
  if (slot == kAbsent || hour < 0 || hour >= kHours) return -1;
  if (slot >= 0) return slot * kHours + hour;
  if (scenario < 0 || scenario >= n_scenarios_) return -1;
  const int width = static_cast<int>(second_.size());
  const int base = static_cast<int>(first_.size()) * kHours;
  return base + (scenario * kHours + hour) * width + (-1 - slot);
}

VariableIndex::Key VariableIndex::key(int column) const {
  if (column < 0 || column >= columns()) throw std::out_of_range("column out of range");
  const int base = static_cast<int>(first_.size()) * kHours;
  if (column < base) return {first_[column / kHours], column % kHours, -1};
  const int width = static_cast<int>(second_.size());
  const int rel = column - base;
  const int block = rel / width;
  return {second_[rel % width], block % kHours, block / kHours};
}

std::string VariableIndex::name(int column) const {
  const Key k = key(column);
  std::string out = std::string(to_string(k.var)) + "[";
  if (k.scenario >= 0) out += std::to_string(k.scenario) + ",";
  return out + std::to_string(k.hour) + "]";
}

PhaseModel build_framework_a(const SystemParams& params, const ScenarioSet& scenarios) {
  return build_phase(PhaseId::kFrameworkA, params, scenarios, {});
}

PhaseModel build_phase(PhaseId phase, const SystemParams& params, const ScenarioSet& scenarios,
                       const FixedDecisions& fixed) {
  validate(params);
  check_staging(phase, fixed);
  for (const Scenario& s : scenarios) {
    validate_wind(s.wind);
    validate(s.prices);
    validate(s.regulation);
  }
  return ModelAssembler(phase, params, scenarios, fixed).assemble();
}

CommitmentSchedule extract_commitments(const PhaseModel& model, const lp::Solution<double>& solution) {
  require_optimal(solution, model);
  CommitmentSchedule out;
  HourlyVector* targets[] = {&out.p_dam, &out.p_idm, &out.p_rm_up, &out.p_rm_dw};
  const Var vars[] = {Var::kDam, Var::kIdm, Var::kRmUp, Var::kRmDw};
  for (int k = 0; k < 4; ++k) {
    const bool scenario_indexed = model.index.has(vars[k]) && !model.index.is_first_stage(vars[k]);
    for (int t = 0; t < kHours; ++t) {
      (*targets[k])(t) = scenario_indexed ? 0.0 : value_of(model, solution, vars[k], 0, t);
    }
  }
  return out;
}

IncomeBreakdown expected_income_breakdown(const PhaseModel& model,
                                          const lp::Solution<double>& solution,
                                          const ScenarioSet& scenarios) {
  require_optimal(solution, model);
  if (static_cast<int>(scenarios.size()) != model.index.scenarios()) {
    throw lp::DimensionError("scenario count differs from the model");
  }
  const double kappa = model.params.kappa_rm;
  double dam = 0.0, idm = 0.0, bm = 0.0, rm = 0.0;
  for (int s = 0; s < model.index.scenarios(); ++s) {
    const Scenario& sc = scenarios[static_cast<std::size_t>(s)];
    const DayPrices& pr = sc.prices;
    auto v = [&](Var var, int t) { return value_of(model, solution, var, s, t); };
    double d = 0.0, i = 0.0, b = 0.0, r = 0.0;
    for (int t = 0; t < kHours; ++t) {
      d += pr.beta_dam()(t) * v(Var::kDam, t);
      i += pr.beta_idm()(t) * v(Var::kIdm, t);
      b += pr.lambda_bm_up()(t) * v(Var::kBmUp, t) - pr.lambda_bm_dw()(t) * v(Var::kBmDw, t);
      r += pr.gamma_rm()(t) * (v(Var::kRmUp, t) + v(Var::kRmDw, t)) +
           pr.beta_rm_up()(t) * v(Var::kRmOffUp, t) - pr.beta_rm_dw()(t) * v(Var::kRmOffDw, t) -
           kappa * pr.beta_rm_up()(t) * v(Var::kRmDevUp, t) -
           kappa * pr.beta_rm_dw()(t) * v(Var::kRmDevDw, t);
    }
    dam += sc.probability * d;
    idm += sc.probability * i;
    bm += sc.probability * b;
    rm += sc.probability * r;
  }
  return IncomeBreakdown::from_parts(dam, idm, bm, rm);
}

RecourseTrace recourse_trace(const PhaseModel& model, const lp::Solution<double>& solution,
                             int scenario) {
  require_optimal(solution, model);
  if (scenario < 0 || scenario >= model.index.scenarios()) {
    throw std::out_of_range("scenario out of range");
  }
  RecourseTrace tr;
  const std::pair<HourlyVector*, Var> fields[] = {
      {&tr.wind_used, Var::kWindUsed},       {&tr.ess_energy, Var::kEssEnergy},
      {&tr.ess_in, Var::kEssIn},             {&tr.ess_out, Var::kEssOut},
      {&tr.soc, Var::kSoc},                  {&tr.pm_traded, Var::kPmTraded},
      {&tr.bm_up, Var::kBmUp},               {&tr.bm_dw, Var::kBmDw},
      {&tr.rm_energy_req_up, Var::kRmReqUp}, {&tr.rm_energy_req_dw, Var::kRmReqDw},
      {&tr.rm_energy_off_up, Var::kRmOffUp}, {&tr.rm_energy_off_dw, Var::kRmOffDw},
      {&tr.rm_dev_up, Var::kRmDevUp},        {&tr.rm_dev_dw, Var::kRmDevDw}};
  for (const auto& [field, var] : fields) {
    for (int t = 0; t < kHours; ++t) (*field)(t) = solution.x(model.index.column(var, t, scenario));
  }
  return tr;
}

lp::Solution<double> solve_optimal(const PhaseModel& model, const lp::SolverOptions<double>& options) {
  auto solution = lp::solve(model.lp, options);
  if (!solution.optimal()) {
    throw std::runtime_error(std::string(to_string(model.phase)) + " model is " +
                             lp::to_string(solution.status));
  }
  return solution;
}

}  // namespace wspp
