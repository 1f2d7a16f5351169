#pragma once

#include "wspp/lp.hpp"
#include "wspp/market_model.hpp"
#include "wspp/scenario_engine.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wspp {

inline constexpr int kSnapshots = 4;

/// What actually happened on a day.
struct RealizedDay {
  HourlyVector wind = HourlyVector::Zero();
  DayPrices prices;
  RegulationPair regulation;
};

/// Hourly regulation requirement shares; the day's pair is the column mean.
using HourlyRegulation = Eigen::Matrix<double, kHours, 2>;

RegulationPair daily_pair(const HourlyRegulation& hourly);

/// Past market days used to build price and regulation scenarios.
struct MarketHistory {
  std::vector<int> days;
  std::vector<DayPrices> prices;
  std::vector<HourlyRegulation> regulation;

  std::size_t size() const { return days.size(); }
  /// One hour-major row of 168 prices per day.
  Eigen::MatrixXd price_matrix() const;
  std::vector<RegulationPair> regulation_pairs() const;
};

/// A day to be decided and then scored: its forecasts and its outcome.
struct EvaluationDay {
  int day = 0;
  std::array<ForecastSnapshot, kSnapshots> forecasts;
  RealizedDay realized;
  HourlyRegulation regulation_hourly = HourlyRegulation::Zero();
};

struct Dataset {
  MarketHistory history;
  std::vector<EvaluationDay> evaluation;
};

struct DayResult {
  int day = 0;
  std::string framework;
  CommitmentSchedule commitments;
  IncomeBreakdown expected;
  IncomeBreakdown realized;
  RecourseTrace realized_trace;
  /// Wall-clock milliseconds per phase; a single-phase run fills slot 0.
  std::array<double, kSnapshots> duration_ms{};
};

struct ExPostResult {
  IncomeBreakdown income;
  RecourseTrace trace;
};

/// Replays fixed commitments against the realized day: a single-scenario
/// last-phase model whose income includes the commitment revenue.
ExPostResult ex_post_evaluate(const SystemParams& params, const CommitmentSchedule& commitments,
                              const RealizedDay& day, const lp::SolverOptions<double>& options = {});

DayResult run_day_a(const SystemParams& params, const ScenarioSet& scenarios, const RealizedDay& day,
                    const lp::SolverOptions<double>& options = {});

/// Solves phases 1 to 4 in sequence on `phase_sets` (exactly four), each
/// phase fixing the commitments the previous ones settled.
DayResult run_day_b(const SystemParams& params, std::span<const ScenarioSet> phase_sets,
                    const RealizedDay& day, const lp::SolverOptions<double>& options = {});

/// Scenario sets for one day: Framework A on a single forecast snapshot, and
/// the four phases with prices revealed as the day's markets clear.
struct DayScenarios {
  ScenarioSet framework_a;
  std::vector<ScenarioSet> phases;
};

DayScenarios day_scenarios(const EvaluationDay& day, const Family<DayPrices>& prices,
                           const Family<RegulationPair>& regulation, int snapshot_a = 1);

struct ComparisonReport {
  int n_days = 0;
  double win_rate_b_over_a = 0.0;
  double mean_daily_delta = 0.0;
  /// mean_daily_delta over the mean realized income of Framework A.
  double mean_relative_improvement = 0.0;
  IncomeBreakdown mean_a;
  IncomeBreakdown mean_b;

  friend bool operator==(const ComparisonReport&, const ComparisonReport&) = default;
};

/// A day counts as a win for B when its realized total beats A's by more than this.
inline constexpr double kWinMargin = 1e-6;

ComparisonReport compare(std::span<const DayResult> a, std::span<const DayResult> b);

struct ScenarioConfig {
  int k_prices = kDefaultPriceClusters;
  int k_regulation = kDefaultRegulationClusters;
  std::uint64_t seed = 0;
  /// Forecast snapshot (1..4) given to Framework A.
  int snapshot_a = 1;
};

struct ComparisonRun {
  ComparisonReport report;
  std::vector<DayResult> a;
  std::vector<DayResult> b;
  std::vector<std::string> warnings;
};

/// Called after each evaluated day with the A and B results.
using DayCallback = std::function<void(const DayResult& a, const DayResult& b)>;

/// Clusters the history once, then runs both frameworks on the first
/// `n_days` evaluation days.
ComparisonRun compare(const SystemParams& params, const Dataset& data, int n_days,
                      const ScenarioConfig& config, const lp::SolverOptions<double>& options = {},
                      const DayCallback& on_day = {});

}  // namespace wspp
