#pragma once

#include "wspp/lp.hpp"
#include "wspp/market_model.hpp"

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

namespace wspp {

enum class PhaseId { kFrameworkA, kPhase1, kPhase2, kPhase3, kPhase4 };

const char* to_string(PhaseId phase);

/// Fixed decisions do not match what the phase expects.
class StagingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RegulationBand {
  HourlyVector up = HourlyVector::Zero();
  HourlyVector dw = HourlyVector::Zero();
};

/// Commitments settled by earlier phases, substituted into later models as constants.
struct FixedDecisions {
  std::optional<HourlyVector> p_dam;
  std::optional<RegulationBand> p_rm;
  std::optional<HourlyVector> p_idm;

  /// All four commitments of a schedule.
  static FixedDecisions all_of(const CommitmentSchedule& schedule);
};

/// Columns of the deterministic equivalent. The first four are market
/// commitments; the rest are per-scenario operation variables.
enum class Var : int {
  kDam,
  kIdm,
  kRmUp,
  kRmDw,
  kWindUsed,
  kEssEnergy,
  kEssIn,
  kEssOut,
  kSoc,
  kPmTraded,
  kDeltaBm,
  kBmUp,
  kBmDw,
  kRmReqUp,
  kRmReqDw,
  kRmOffUp,
  kRmOffDw,
  kRmDevUp,
  kRmDevDw,
};

inline constexpr int kVarCount = 19;

const char* to_string(Var v);

/// Canonical column layout: the scenario-independent block (variable-major,
/// 24 hours each) comes first, followed by one block per (scenario, hour)
/// holding that phase's scenario-indexed variables in a fixed order.
class VariableIndex {
 public:
  struct Key {
    Var var;
    int hour;
    int scenario;  // -1 for scenario-independent columns
  };

  VariableIndex(PhaseId phase, int n_scenarios);

  PhaseId phase() const { return phase_; }
  int scenarios() const { return n_scenarios_; }
  int columns() const;

  std::span<const Var> first_stage() const { return first_; }
  std::span<const Var> second_stage() const { return second_; }

  /// Column of a variable, or -1 when the phase does not carry it.
  /// `scenario` is ignored for scenario-independent variables.
  int column(Var v, int hour, int scenario = 0) const;

  bool has(Var v) const { return slot_[static_cast<int>(v)] != kAbsent; }
  bool is_first_stage(Var v) const { return slot_[static_cast<int>(v)] >= 0; }

  Key key(int column) const;
  std::string name(int column) const;

 private:
  static constexpr int kAbsent = -1000;

  PhaseId phase_;
  int n_scenarios_;
  std::vector<Var> first_, second_;
  // >= 0: position in first-stage block; <= -1 (and != kAbsent): -(1 + position in second-stage block)
  std::array<int, kVarCount> slot_{};
};

/// A built deterministic equivalent together with what is needed to read it back.
struct PhaseModel {
  PhaseId phase;
  lp::LinearProgram<double> lp;
  VariableIndex index;
  SystemParams params;
  FixedDecisions fixed;
};

PhaseModel build_framework_a(const SystemParams& params, const ScenarioSet& scenarios);

PhaseModel build_phase(PhaseId phase, const SystemParams& params, const ScenarioSet& scenarios,
                       const FixedDecisions& fixed);

/// First-stage decisions of the solved phase merged with the fixed ones.
/// Commitments the phase keeps scenario-indexed are returned as zero.
CommitmentSchedule extract_commitments(const PhaseModel& model, const lp::Solution<double>& solution);

/// Probability-weighted income per market, including fixed-commitment revenue.
IncomeBreakdown expected_income_breakdown(const PhaseModel& model,
                                          const lp::Solution<double>& solution,
                                          const ScenarioSet& scenarios);

/// Operation of the plant in one scenario of a solved model.
RecourseTrace recourse_trace(const PhaseModel& model, const lp::Solution<double>& solution,
                             int scenario);

/// Solves the model, throwing std::runtime_error if it is not optimal.
lp::Solution<double> solve_optimal(const PhaseModel& model,
                                   const lp::SolverOptions<double>& options = {});

}  // namespace wspp
