#include "wspp/evaluation.hpp"

#include "wspp/stochastic_builder.hpp"

#include <chrono>
#include <stdexcept>

namespace wspp {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

ScenarioSet single_scenario(const RealizedDay& day) {
  return ScenarioSet({Scenario{day.wind, day.prices, day.regulation, 1.0}});
}

}  // namespace

RegulationPair daily_pair(const HourlyRegulation& hourly) {
  const Eigen::RowVector2d mean = hourly.colwise().mean();
  return validate(RegulationPair{mean(0), mean(1)});
}

Eigen::MatrixXd MarketHistory::price_matrix() const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(prices.size()), kPriceAttributes);
  for (std::size_t d = 0; d < prices.size(); ++d) {
    out.row(static_cast<Eigen::Index>(d)) = prices[d].flatten().transpose();
  }
  return out;
}

std::vector<RegulationPair> MarketHistory::regulation_pairs() const {
  std::vector<RegulationPair> out;
  out.reserve(regulation.size());
  for (const auto& h : regulation) out.push_back(daily_pair(h));
  return out;
}

ExPostResult ex_post_evaluate(const SystemParams& params, const CommitmentSchedule& commitments,
                              const RealizedDay& day, const lp::SolverOptions<double>& options) {
  validate(commitments, params);
  const ScenarioSet realized = single_scenario(day);
  const PhaseModel model =
      build_phase(PhaseId::kPhase4, params, realized, FixedDecisions::all_of(commitments));
  const lp::Solution<double> solution = lp::solve(model.lp, options);
  if (!solution.optimal()) {
    throw std::runtime_error(std::string("ex-post recourse model is ") + lp::to_string(solution.status) +
                             ": the commitments cannot be balanced against the realized day");
  }
  return {expected_income_breakdown(model, solution, realized), recourse_trace(model, solution, 0)};
}

DayResult run_day_a(const SystemParams& params, const ScenarioSet& scenarios, const RealizedDay& day,
                    const lp::SolverOptions<double>& options) {
  DayResult result;
  result.framework = "A";
  const auto start = Clock::now();
  const PhaseModel model = build_framework_a(params, scenarios);
  const lp::Solution<double> solution = solve_optimal(model, options);
  result.commitments = extract_commitments(model, solution);
  result.expected = expected_income_breakdown(model, solution, scenarios);
  result.duration_ms[0] = elapsed_ms(start);
  const ExPostResult realized = ex_post_evaluate(params, result.commitments, day, options);
  result.realized = realized.income;
  result.realized_trace = realized.trace;
  return result;
}

DayResult run_day_b(const SystemParams& params, std::span<const ScenarioSet> phase_sets,
                    const RealizedDay& day, const lp::SolverOptions<double>& options) {
  if (phase_sets.size() != kSnapshots) {
    throw StagingError("framework B needs 4 phase scenario sets, got " + std::to_string(phase_sets.size()));
  }
  DayResult result;
  result.framework = "B";
  const PhaseId phases[] = {PhaseId::kPhase1, PhaseId::kPhase2, PhaseId::kPhase3, PhaseId::kPhase4};
  FixedDecisions fixed;
  for (int k = 0; k < kSnapshots; ++k) {
    const auto start = Clock::now();
    const PhaseModel model = build_phase(phases[k], params, phase_sets[k], fixed);
    const lp::Solution<double> solution = solve_optimal(model, options);
    const CommitmentSchedule settled = extract_commitments(model, solution);
    switch (phases[k]) {
      case PhaseId::kPhase1: fixed.p_dam = settled.p_dam; break;
      case PhaseId::kPhase2: fixed.p_rm = RegulationBand{settled.p_rm_up, settled.p_rm_dw}; break;
      case PhaseId::kPhase3: fixed.p_idm = settled.p_idm; break;
      default:
        result.commitments = settled;
        result.expected = expected_income_breakdown(model, solution, phase_sets[k]);
        break;
    }
    result.duration_ms[k] = elapsed_ms(start);
  }
  const ExPostResult realized = ex_post_evaluate(params, result.commitments, day, options);
  result.realized = realized.income;
  result.realized_trace = realized.trace;
  return result;
}

DayScenarios day_scenarios(const EvaluationDay& day, const Family<DayPrices>& prices,
                           const Family<RegulationPair>& regulation, int snapshot_a) {
  if (snapshot_a < 1 || snapshot_a > kSnapshots) {
    throw std::invalid_argument("framework A snapshot must be 1..4, got " + std::to_string(snapshot_a));
  }
  auto base = [&](int k) { return combine(wind_scenarios(day.forecasts[k]), prices, regulation); };
  const DayPrices& realized = day.realized.prices;
  DayScenarios out{base(snapshot_a - 1), {}};
  out.phases.push_back(base(0));
  Observation dam_known;
  dam_known.reveal(realized, {PriceColumn::kBetaDam});
  out.phases.push_back(collapse_to_realized(base(1), dam_known));
  Observation rm_known = dam_known;
  rm_known.reveal(realized, {PriceColumn::kGammaRm, PriceColumn::kBetaRmUp, PriceColumn::kBetaRmDw});
  out.phases.push_back(collapse_to_realized(base(2), rm_known));
  Observation all_known;
  all_known.reveal_all_prices(realized);
  out.phases.push_back(collapse_to_realized(base(3), all_known));
  return out;
}

ComparisonReport compare(std::span<const DayResult> a, std::span<const DayResult> b) {
  if (a.empty() || a.size() != b.size()) {
    throw std::invalid_argument("comparison needs the same non-zero number of days per framework");
  }
  ComparisonReport r;
  r.n_days = static_cast<int>(a.size());
  int wins = 0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double delta = b[d].realized.total - a[d].realized.total;
    if (delta > kWinMargin) ++wins;
    r.mean_a += a[d].realized;
    r.mean_b += b[d].realized;
  }
  const double n = static_cast<double>(r.n_days);
  r.mean_a = r.mean_a * (1.0 / n);
  r.mean_b = r.mean_b * (1.0 / n);
  r.win_rate_b_over_a = wins / n;
  r.mean_daily_delta = r.mean_b.total - r.mean_a.total;
  r.mean_relative_improvement = r.mean_a.total != 0.0 ? r.mean_daily_delta / r.mean_a.total : 0.0;
  return r;
}

ComparisonRun compare(const SystemParams& params, const Dataset& data, int n_days,
                      const ScenarioConfig& config, const lp::SolverOptions<double>& options,
                      const DayCallback& on_day) {
  if (n_days < 1) throw std::invalid_argument("comparison needs at least one day");
  if (static_cast<std::size_t>(n_days) > data.evaluation.size()) {
    throw std::invalid_argument("requested " + std::to_string(n_days) + " days but the data holds " +
                                std::to_string(data.evaluation.size()) + " evaluation days");
  }
  ComparisonRun run;
  const Family<DayPrices> prices = price_scenarios(data.history.price_matrix(), config.k_prices, config.seed);
  const Family<RegulationPair> regulation =
      regulation_scenarios(data.history.regulation_pairs(), config.k_regulation, config.seed);
  run.warnings = prices.warnings;
  run.warnings.insert(run.warnings.end(), regulation.warnings.begin(), regulation.warnings.end());
  for (int d = 0; d < n_days; ++d) {
    const EvaluationDay& day = data.evaluation[static_cast<std::size_t>(d)];
    const DayScenarios sets = day_scenarios(day, prices, regulation, config.snapshot_a);
    DayResult a = run_day_a(params, sets.framework_a, day.realized, options);
    DayResult b = run_day_b(params, sets.phases, day.realized, options);
    a.day = b.day = day.day;
    if (on_day) on_day(a, b);
    run.a.push_back(std::move(a));
    run.b.push_back(std::move(b));
  }
  run.report = compare(run.a, run.b);
  return run;
}

}  // namespace wspp
