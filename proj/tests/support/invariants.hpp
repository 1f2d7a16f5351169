#pragma once

#include "wspp/market_model.hpp"
#include "wspp/stochastic_builder.hpp"

#include <algorithm>
#include <cmath>

namespace wspp::test {

/// Largest violation of each physical rule over the 24 hours of one trace.
struct TraceViolations {
  double power_balance = 0.0;
  double position = 0.0;
  double storage = 0.0;
  double soc_low = 0.0;
  double soc_high = 0.0;
  double wind_cap = 0.0;
  double wind_negative = 0.0;
  double deviation_negative = 0.0;
  double simultaneity = 0.0;
  double requirement = 0.0;
};

inline constexpr double kBalanceTolerance = 1e-6;
inline constexpr double kSocTolerance = 1e-7;
inline constexpr double kDeviationFloor = -1e-9;
inline constexpr double kSimultaneityTolerance = 1e-6;

/// Recomputes every accounting identity of the plant from the trace values.
inline TraceViolations check_trace(const SystemParams& p, const CommitmentSchedule& c, const HourlyVector& wind,
                                   const RegulationPair& reg, const RecourseTrace& tr) {
  TraceViolations v;
  double energy = p.initial_energy;
  for (int t = 0; t < kHours; ++t) {
    const double delta = tr.bm_up(t) - tr.bm_dw(t);
    v.position = std::max(v.position, std::abs(tr.pm_traded(t) - (c.p_dam(t) + c.p_idm(t) + delta)));
    const double supplied = tr.wind_used(t) + tr.ess_out(t) - tr.ess_in(t);
    const double delivered = tr.pm_traded(t) + tr.rm_energy_off_up(t) - tr.rm_energy_off_dw(t);
    v.power_balance = std::max(v.power_balance, std::abs(supplied - delivered));

    energy += p.eta_in * tr.ess_in(t) - tr.ess_out(t) / p.eta_out;
    v.storage = std::max(v.storage, std::abs(energy - tr.ess_energy(t)));
    const double soc = tr.ess_energy(t) / p.ess_capacity;
    v.soc_low = std::max(v.soc_low, p.soc_min - soc);
    v.soc_high = std::max(v.soc_high, soc - 1.0);

    v.wind_cap = std::max(v.wind_cap, tr.wind_used(t) - std::min(wind(t), p.rated_wind_power));
    v.wind_negative = std::max(v.wind_negative, -tr.wind_used(t));

    v.deviation_negative = std::min({v.deviation_negative, tr.rm_dev_up(t), tr.rm_dev_dw(t)});
    v.simultaneity = std::max(v.simultaneity, tr.ess_in(t) * tr.ess_out(t));
    v.requirement = std::max({v.requirement, std::abs(tr.rm_energy_req_up(t) - reg.pi_up * c.p_rm_up(t)),
                              std::abs(tr.rm_energy_req_dw(t) - reg.pi_dw * c.p_rm_dw(t)),
                              std::abs(tr.rm_dev_up(t) + tr.rm_energy_off_up(t) - tr.rm_energy_req_up(t)),
                              std::abs(tr.rm_dev_dw(t) + tr.rm_energy_off_dw(t) - tr.rm_energy_req_dw(t))});
  }
  return v;
}

/// The feasibility rules with their pinned tolerances.
inline bool within_tolerances(const TraceViolations& v) {
  return v.power_balance <= kBalanceTolerance && v.position <= kBalanceTolerance && v.storage <= kBalanceTolerance &&
         v.soc_low <= kSocTolerance && v.soc_high <= kSocTolerance && v.wind_cap <= kBalanceTolerance &&
         v.wind_negative <= kBalanceTolerance && v.deviation_negative >= kDeviationFloor &&
         v.simultaneity <= kSimultaneityTolerance && v.requirement <= kBalanceTolerance;
}

/// Rule-by-rule worst case of two reports.
inline TraceViolations worst(const TraceViolations& a, const TraceViolations& b) {
  TraceViolations w;
  w.power_balance = std::max(a.power_balance, b.power_balance);
  w.position = std::max(a.position, b.position);
  w.storage = std::max(a.storage, b.storage);
  w.soc_low = std::max(a.soc_low, b.soc_low);
  w.soc_high = std::max(a.soc_high, b.soc_high);
  w.wind_cap = std::max(a.wind_cap, b.wind_cap);
  w.wind_negative = std::max(a.wind_negative, b.wind_negative);
  w.deviation_negative = std::min(a.deviation_negative, b.deviation_negative);
  w.simultaneity = std::max(a.simultaneity, b.simultaneity);
  w.requirement = std::max(a.requirement, b.requirement);
  return w;
}

/// Market positions seen by scenario k: first-stage values plus the
/// scenario's own copies of any second-stage market decisions.
inline CommitmentSchedule scenario_commitments(const PhaseModel& m, const lp::Solution<double>& s, int k) {
  CommitmentSchedule c = extract_commitments(m, s);
  auto value = [&](Var v, int t) { return s.x(m.index.column(v, t, k)); };
  for (int t = 0; t < kHours; ++t) {
    if (m.index.has(Var::kIdm) && !m.index.is_first_stage(Var::kIdm)) c.p_idm(t) = value(Var::kIdm, t);
    if (m.index.has(Var::kRmUp) && !m.index.is_first_stage(Var::kRmUp)) {
      c.p_rm_up(t) = value(Var::kRmUp, t);
      c.p_rm_dw(t) = value(Var::kRmDw, t);
    }
  }
  return c;
}

/// Worst violations over every scenario trace of a solved phase model.
inline TraceViolations check_model(const SystemParams& p, const PhaseModel& m, const lp::Solution<double>& s,
                                   const ScenarioSet& set) {
  TraceViolations v;
  for (int k = 0; k < static_cast<int>(set.size()); ++k) {
    v = worst(v, check_trace(p, scenario_commitments(m, s, k), set[k].wind, set[k].regulation,
                             recourse_trace(m, s, k)));
  }
  return v;
}

}  // namespace wspp::test
