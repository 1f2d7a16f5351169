#pragma once

#include "wspp/cli/config.hpp"
#include "wspp/evaluation.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wspp::cli {

/// Schema or content error; the message starts with "source:line:".
class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text that reads back to the same double.
std::string format_number(double v);

struct PriceTable {
  std::vector<int> days;
  std::vector<DayPrices> prices;
};

struct RegulationTable {
  std::vector<int> days;
  std::vector<HourlyRegulation> hourly;
};

/// One line of report.csv.
struct ReportRow {
  int day = 0;
  std::string framework;
  IncomeBreakdown realized;
  double total_expected = 0.0;
  std::array<double, kSnapshots> duration_ms{};

  static ReportRow from(const DayResult& result);
  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

// prices.csv: day,hour,beta_dam,...,lambda_bm_dw
void write_prices(std::ostream& out, const PriceTable& table);
PriceTable read_prices(std::istream& in, const std::string& source);

// wind_forecasts.csv: day,snapshot,hour,p25,p50,p75
void write_wind_forecasts(std::ostream& out, std::span<const EvaluationDay> days);
std::map<int, std::array<ForecastSnapshot, kSnapshots>> read_wind_forecasts(std::istream& in,
                                                                             const std::string& source);

// wind_actual.csv: day,hour,mw
void write_wind_actual(std::ostream& out, std::span<const EvaluationDay> days);
std::map<int, HourlyVector> read_wind_actual(std::istream& in, const std::string& source);

// regulation.csv: day,hour,pi_up,pi_dw
void write_regulation(std::ostream& out, const RegulationTable& table);
RegulationTable read_regulation(std::istream& in, const std::string& source);

// commitments.csv: hour,p_dam,p_idm,p_rm_up,p_rm_dw
void write_commitments(std::ostream& out, const CommitmentSchedule& schedule);
CommitmentSchedule read_commitments(std::istream& in, const std::string& source);

// scenarios.csv: scenario,probability,hour,wind,<7 prices>,pi_up,pi_dw
void write_scenarios(std::ostream& out, const ScenarioSet& set);
ScenarioSet read_scenarios(std::istream& in, const std::string& source);

// report.csv: day,framework,i_dam,i_idm,i_bm,i_rm,total_expected,total_realized,duration_phase1_ms..4
void write_report(std::ostream& out, std::span<const ReportRow> rows);
std::vector<ReportRow> read_report(std::istream& in, const std::string& source);

// comparison.csv: one row of ComparisonReport fields and per-framework mean incomes
void write_comparison(std::ostream& out, const ComparisonReport& report);
ComparisonReport read_comparison(std::istream& in, const std::string& source);

// trace.csv: hour followed by the fourteen operation series
void write_trace(std::ostream& out, const RecourseTrace& trace);

/// Reads the four data files. Days with both forecasts and actual wind are
/// evaluation days; the remaining price days form the history.
Dataset ingest(const DataPaths& paths);

/// Writes the four data files into `dir` and returns their paths.
DataPaths emit_dataset(const std::filesystem::path& dir, const Dataset& data);

}  // namespace wspp::cli
