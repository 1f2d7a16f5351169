#include "wspp/cli/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace wspp::cli {

std::string format_number(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

/// Header-checked CSV reader; fields are split on commas without quoting.
class Table {
 public:
  Table(std::istream& in, std::string source, std::vector<std::string> header)
      : in_(in), source_(std::move(source)), header_(std::move(header)) {
    std::string line;
    if (!std::getline(in_, line)) fail(1, "missing header row");
    ++line_;
    const auto got = split(strip(line));
    if (got != header_) fail(line_, "header must be '" + join(header_) + "'");
  }

  bool next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      line = strip(line);
      if (line.empty()) continue;
      fields_ = split(line);
      if (fields_.size() != header_.size()) {
        fail(line_, "expected " + std::to_string(header_.size()) + " fields, got " +
                        std::to_string(fields_.size()));
      }
      return true;
    }
    return false;
  }

  int line() const { return line_; }
  const std::string& text(std::size_t i) const { return fields_[i]; }

  double number(std::size_t i) const {
    const char* begin = fields_[i].c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v)) {
      fail(line_, "column '" + header_[i] + "' is not a finite number: '" + fields_[i] + "'");
    }
    return v;
  }

  int integer(std::size_t i) const {
    const char* begin = fields_[i].c_str();
    char* end = nullptr;
    const long v = std::strtol(begin, &end, 10);
    if (end == begin || *end != '\0') {
      fail(line_, "column '" + header_[i] + "' is not an integer: '" + fields_[i] + "'");
    }
    return static_cast<int>(v);
  }

  int hour(std::size_t i) const {
    const int h = integer(i);
    if (h < 0 || h >= kHours) fail(line_, "hour " + std::to_string(h) + " outside 0..23");
    return h;
  }

  [[noreturn]] void fail(int line, const std::string& what) const {
    throw CsvError(source_ + ":" + std::to_string(line) + ": " + what);
  }
  [[noreturn]] void fail(const std::string& what) const { throw CsvError(source_ + ": " + what); }

 private:
  static std::string strip(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    return s;
  }
  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (!s.empty() && s.back() == ',') out.emplace_back();
    return out;
  }
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out;
  }

  std::istream& in_;
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::string> fields_;
  int line_ = 0;
};

/// Tracks which hours of each key have been seen.
template <typename Key>
class HourLedger {
 public:
  void mark(const Table& t, const Key& key, int hour, const std::string& label) {
    auto& seen = seen_[key];
    if (seen[hour]) t.fail(t.line(), "duplicate " + label + " hour " + std::to_string(hour));
    seen[hour] = true;
  }
  template <typename Label>
  void require_complete(const Table& t, const Label& label) const {
    for (const auto& [key, seen] : seen_) {
      for (int h = 0; h < kHours; ++h) {
        if (!seen[h]) t.fail("incomplete day: " + label(key) + " lacks hour " + std::to_string(h));
      }
    }
  }

 private:
  std::map<Key, std::array<bool, kHours>> seen_;
};

std::string day_label(int day) { return "day " + std::to_string(day); }

void require_contiguous(const Table& t, const std::vector<int>& sorted_days) {
  for (std::size_t i = 1; i < sorted_days.size(); ++i) {
    if (sorted_days[i] != sorted_days[i - 1] + 1) {
      t.fail("days not contiguous: " + std::to_string(sorted_days[i - 1]) + " is followed by " +
             std::to_string(sorted_days[i]));
    }
  }
}

std::vector<std::string> price_header(std::initializer_list<std::string> lead) {
  std::vector<std::string> h(lead);
  for (const char* name : kPriceColumnNames) h.emplace_back(name);
  return h;
}

template <typename... Ts>
void row(std::ostream& out, const Ts&... fields) {
  bool first = true;
  auto put = [&](const auto& f) {
    if (!first) out << ',';
    first = false;
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(f)>>) {
      out << format_number(f);
    } else {
      out << f;
    }
  };
  (put(fields), ...);
  out << '\n';
}

void header(std::ostream& out, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw CsvError("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw CsvError("cannot read " + p.string());
  return in;
}

const std::vector<std::string> kTraceColumns = {
    "hour",          "wind_used",       "ess_energy",      "ess_in",          "ess_out",
    "soc",           "pm_traded",       "bm_up",           "bm_dw",           "rm_energy_req_up",
    "rm_energy_req_dw", "rm_energy_off_up", "rm_energy_off_dw", "rm_dev_up", "rm_dev_dw"};

const std::vector<std::string> kReportColumns = {
    "day",  "framework", "i_dam", "i_idm", "i_bm", "i_rm", "total_expected", "total_realized",
    "duration_phase1_ms", "duration_phase2_ms", "duration_phase3_ms", "duration_phase4_ms"};

std::vector<std::string> comparison_columns() {
  std::vector<std::string> h = {"n_days", "win_rate_b_over_a", "mean_daily_delta", "mean_relative_improvement",
                                "improvement_base"};
  for (const char* fw : {"a", "b"}) {
    for (const char* part : {"i_dam", "i_idm", "i_bm", "i_rm", "total"}) {
      h.push_back(std::string("mean_") + fw + "_" + part);
    }
  }
  return h;
}

constexpr const char* kImprovementBase = "mean_realized_a";

}  // namespace

ReportRow ReportRow::from(const DayResult& r) {
  return {r.day, r.framework, r.realized, r.expected.total, r.duration_ms};
}

void write_prices(std::ostream& out, const PriceTable& table) {
  header(out, price_header({"day", "hour"}));
  for (std::size_t d = 0; d < table.days.size(); ++d) {
    const PriceMatrix& v = table.prices[d].values;
    for (int t = 0; t < kHours; ++t) {
      out << table.days[d] << ',' << t;
      for (int c = 0; c < kPriceColumns; ++c) out << ',' << format_number(v(t, c));
      out << '\n';
    }
  }
}

PriceTable read_prices(std::istream& in, const std::string& source) {
  Table t(in, source, price_header({"day", "hour"}));
  std::map<int, DayPrices> days;
  HourLedger<int> ledger;
  while (t.next()) {
    const int day = t.integer(0);
    const int hour = t.hour(1);
    ledger.mark(t, day, hour, day_label(day));
    for (int c = 0; c < kPriceColumns; ++c) days[day].values(hour, c) = t.number(2 + c);
  }
  ledger.require_complete(t, day_label);
  PriceTable out;
  for (const auto& [day, prices] : days) {
    try {
      validate(prices);
    } catch (const ValidationError& e) {
      t.fail(day_label(day) + ": " + e.what());
    }
    out.days.push_back(day);
    out.prices.push_back(prices);
  }
  require_contiguous(t, out.days);
  return out;
}

void write_wind_forecasts(std::ostream& out, std::span<const EvaluationDay> days) {
  header(out, {"day", "snapshot", "hour", "p25", "p50", "p75"});
  for (const EvaluationDay& d : days) {
    for (int k = 0; k < kSnapshots; ++k) {
      const ForecastSnapshot& f = d.forecasts[k];
      for (int t = 0; t < kHours; ++t) row(out, d.day, k + 1, t, f.p25(t), f.p50(t), f.p75(t));
    }
  }
}

std::map<int, std::array<ForecastSnapshot, kSnapshots>> read_wind_forecasts(std::istream& in,
                                                                             const std::string& source) {
  Table t(in, source, {"day", "snapshot", "hour", "p25", "p50", "p75"});
  std::map<int, std::array<ForecastSnapshot, kSnapshots>> out;
  HourLedger<std::pair<int, int>> ledger;
  while (t.next()) {
    const int day = t.integer(0);
    const int snap = t.integer(1);
    if (snap < 1 || snap > kSnapshots) t.fail(t.line(), "snapshot must be 1..4");
    const int hour = t.hour(2);
    const double p25 = t.number(3), p50 = t.number(4), p75 = t.number(5);
    if (!(0.0 <= p25 && p25 <= p50 && p50 <= p75)) {
      t.fail(t.line(), "percentile ordering violated: need 0 <= p25 <= p50 <= p75");
    }
    ledger.mark(t, {day, snap}, hour, day_label(day) + " snapshot " + std::to_string(snap));
    ForecastSnapshot& f = out[day][snap - 1];
    f.issue = snap;
    f.p25(hour) = p25;
    f.p50(hour) = p50;
    f.p75(hour) = p75;
  }
  ledger.require_complete(t, [](const std::pair<int, int>& k) {
    return day_label(k.first) + " snapshot " + std::to_string(k.second);
  });
  std::vector<int> days;
  for (const auto& [day, snaps] : out) {
    for (int k = 0; k < kSnapshots; ++k) {
      if (snaps[k].issue != k + 1) t.fail(day_label(day) + " lacks snapshot " + std::to_string(k + 1));
    }
    days.push_back(day);
  }
  require_contiguous(t, days);
  return out;
}

void write_wind_actual(std::ostream& out, std::span<const EvaluationDay> days) {
  header(out, {"day", "hour", "mw"});
  for (const EvaluationDay& d : days) {
    for (int t = 0; t < kHours; ++t) row(out, d.day, t, d.realized.wind(t));
  }
}

std::map<int, HourlyVector> read_wind_actual(std::istream& in, const std::string& source) {
  Table t(in, source, {"day", "hour", "mw"});
  std::map<int, HourlyVector> out;
  HourLedger<int> ledger;
  while (t.next()) {
    const int day = t.integer(0);
    const int hour = t.hour(1);
    const double mw = t.number(2);
    if (mw < 0) t.fail(t.line(), "wind power must be >= 0");
    ledger.mark(t, day, hour, day_label(day));
    auto [it, fresh] = out.try_emplace(day, HourlyVector::Zero());
    it->second(hour) = mw;
  }
  ledger.require_complete(t, day_label);
  std::vector<int> days;
  for (const auto& entry : out) days.push_back(entry.first);
  require_contiguous(t, days);
  return out;
}

void write_regulation(std::ostream& out, const RegulationTable& table) {
  header(out, {"day", "hour", "pi_up", "pi_dw"});
  for (std::size_t d = 0; d < table.days.size(); ++d) {
    for (int t = 0; t < kHours; ++t) row(out, table.days[d], t, table.hourly[d](t, 0), table.hourly[d](t, 1));
  }
}

RegulationTable read_regulation(std::istream& in, const std::string& source) {
  Table t(in, source, {"day", "hour", "pi_up", "pi_dw"});
  std::map<int, HourlyRegulation> days;
  HourLedger<int> ledger;
  while (t.next()) {
    const int day = t.integer(0);
    const int hour = t.hour(1);
    const double up = t.number(2), dw = t.number(3);
    if (up < 0 || up > 1 || dw < 0 || dw > 1) t.fail(t.line(), "regulation shares must lie in [0, 1]");
    ledger.mark(t, day, hour, day_label(day));
    auto [it, fresh] = days.try_emplace(day, HourlyRegulation::Zero());
    it->second(hour, 0) = up;
    it->second(hour, 1) = dw;
  }
  ledger.require_complete(t, day_label);
  RegulationTable out;
  for (const auto& [day, hourly] : days) {
    out.days.push_back(day);
    out.hourly.push_back(hourly);
  }
  require_contiguous(t, out.days);
  return out;
}

void write_commitments(std::ostream& out, const CommitmentSchedule& s) {
  header(out, {"hour", "p_dam", "p_idm", "p_rm_up", "p_rm_dw"});
  for (int t = 0; t < kHours; ++t) row(out, t, s.p_dam(t), s.p_idm(t), s.p_rm_up(t), s.p_rm_dw(t));
}

CommitmentSchedule read_commitments(std::istream& in, const std::string& source) {
  Table t(in, source, {"hour", "p_dam", "p_idm", "p_rm_up", "p_rm_dw"});
  CommitmentSchedule s;
  HourLedger<int> ledger;
  while (t.next()) {
    const int hour = t.hour(0);
    ledger.mark(t, 0, hour, "schedule");
    s.p_dam(hour) = t.number(1);
    s.p_idm(hour) = t.number(2);
    s.p_rm_up(hour) = t.number(3);
    s.p_rm_dw(hour) = t.number(4);
  }
  ledger.require_complete(t, [](int) { return std::string("schedule"); });
  return s;
}

namespace {

std::vector<std::string> scenario_columns() {
  std::vector<std::string> h = price_header({"scenario", "probability", "hour", "wind"});
  h.emplace_back("pi_up");
  h.emplace_back("pi_dw");
  return h;
}

}  // namespace

void write_scenarios(std::ostream& out, const ScenarioSet& set) {
  header(out, scenario_columns());
  for (std::size_t s = 0; s < set.size(); ++s) {
    const Scenario& sc = set[s];
    for (int t = 0; t < kHours; ++t) {
      out << s << ',' << format_number(sc.probability) << ',' << t << ',' << format_number(sc.wind(t));
      for (int c = 0; c < kPriceColumns; ++c) out << ',' << format_number(sc.prices.values(t, c));
      out << ',' << format_number(sc.regulation.pi_up) << ',' << format_number(sc.regulation.pi_dw) << '\n';
    }
  }
}

ScenarioSet read_scenarios(std::istream& in, const std::string& source) {
  Table t(in, source, scenario_columns());
  std::map<int, Scenario> scenarios;
  HourLedger<int> ledger;
  const auto label = [](int s) { return "scenario " + std::to_string(s); };
  while (t.next()) {
    const int s = t.integer(0);
    const int hour = t.hour(2);
    ledger.mark(t, s, hour, label(s));
    const bool fresh = !scenarios.count(s);
    Scenario& sc = scenarios[s];
    const double p = t.number(1);
    const RegulationPair reg{t.number(11), t.number(12)};
    if (fresh) {
      sc.probability = p;
      sc.regulation = reg;
    } else if (p != sc.probability || !(reg == sc.regulation)) {
      t.fail(t.line(), "probability and regulation must be constant within " + label(s));
    }
    sc.wind(hour) = t.number(3);
    for (int c = 0; c < kPriceColumns; ++c) sc.prices.values(hour, c) = t.number(4 + c);
  }
  ledger.require_complete(t, label);
  std::vector<Scenario> out;
  int expect = 0;
  for (auto& [index, sc] : scenarios) {
    if (index != expect++) t.fail("scenario indices must run 0..n-1");
    out.push_back(std::move(sc));
  }
  if (out.empty()) t.fail("no scenarios");
  try {
    return ScenarioSet(std::move(out));
  } catch (const std::exception& e) {
    t.fail(e.what());
  }
}

void write_report(std::ostream& out, std::span<const ReportRow> rows) {
  header(out, kReportColumns);
  for (const ReportRow& r : rows) {
    row(out, r.day, r.framework, r.realized.i_dam, r.realized.i_idm, r.realized.i_bm, r.realized.i_rm,
        r.total_expected, r.realized.total, r.duration_ms[0], r.duration_ms[1], r.duration_ms[2],
        r.duration_ms[3]);
  }
}

std::vector<ReportRow> read_report(std::istream& in, const std::string& source) {
  Table t(in, source, kReportColumns);
  std::vector<ReportRow> out;
  while (t.next()) {
    ReportRow r;
    r.day = t.integer(0);
    r.framework = t.text(1);
    r.realized = {t.number(2), t.number(3), t.number(4), t.number(5), t.number(7)};
    r.total_expected = t.number(6);
    for (int k = 0; k < kSnapshots; ++k) r.duration_ms[k] = t.number(8 + k);
    out.push_back(r);
  }
  return out;
}

void write_comparison(std::ostream& out, const ComparisonReport& r) {
  header(out, comparison_columns());
  out << r.n_days << ',' << format_number(r.win_rate_b_over_a) << ',' << format_number(r.mean_daily_delta) << ','
      << format_number(r.mean_relative_improvement) << ',' << kImprovementBase;
  for (const IncomeBreakdown* m : {&r.mean_a, &r.mean_b}) {
    for (double v : {m->i_dam, m->i_idm, m->i_bm, m->i_rm, m->total}) out << ',' << format_number(v);
  }
  out << '\n';
}

ComparisonReport read_comparison(std::istream& in, const std::string& source) {
  Table t(in, source, comparison_columns());
  if (!t.next()) t.fail("missing report row");
  ComparisonReport r;
  r.n_days = t.integer(0);
  r.win_rate_b_over_a = t.number(1);
  r.mean_daily_delta = t.number(2);
  r.mean_relative_improvement = t.number(3);
  if (t.text(4) != kImprovementBase) t.fail(t.line(), "unknown improvement base '" + t.text(4) + "'");
  std::size_t col = 5;
  for (IncomeBreakdown* m : {&r.mean_a, &r.mean_b}) {
    m->i_dam = t.number(col++);
    m->i_idm = t.number(col++);
    m->i_bm = t.number(col++);
    m->i_rm = t.number(col++);
    m->total = t.number(col++);
  }
  if (t.next()) t.fail(t.line(), "expected a single report row");
  return r;
}

void write_trace(std::ostream& out, const RecourseTrace& tr) {
  header(out, kTraceColumns);
  for (int t = 0; t < kHours; ++t) {
    row(out, t, tr.wind_used(t), tr.ess_energy(t), tr.ess_in(t), tr.ess_out(t), tr.soc(t), tr.pm_traded(t),
        tr.bm_up(t), tr.bm_dw(t), tr.rm_energy_req_up(t), tr.rm_energy_req_dw(t), tr.rm_energy_off_up(t),
        tr.rm_energy_off_dw(t), tr.rm_dev_up(t), tr.rm_dev_dw(t));
  }
}

Dataset ingest(const DataPaths& paths) {
  auto in_prices = open_in(paths.prices);
  const PriceTable prices = read_prices(in_prices, paths.prices.string());
  auto in_reg = open_in(paths.regulation);
  const RegulationTable regulation = read_regulation(in_reg, paths.regulation.string());
  auto in_fc = open_in(paths.wind_forecasts);
  const auto forecasts = read_wind_forecasts(in_fc, paths.wind_forecasts.string());
  auto in_act = open_in(paths.wind_actual);
  const auto actual = read_wind_actual(in_act, paths.wind_actual.string());

  if (regulation.days != prices.days) {
    throw CsvError(paths.regulation.string() + ": days must match " + paths.prices.string());
  }
  for (const auto& entry : forecasts) {
    if (!actual.count(entry.first)) {
      throw CsvError(paths.wind_actual.string() + ": missing " + day_label(entry.first) + " present in forecasts");
    }
  }
  for (const auto& entry : actual) {
    if (!forecasts.count(entry.first)) {
      throw CsvError(paths.wind_forecasts.string() + ": missing " + day_label(entry.first) +
                     " present in actual wind");
    }
  }

  Dataset data;
  for (std::size_t d = 0; d < prices.days.size(); ++d) {
    const int day = prices.days[d];
    const auto fc = forecasts.find(day);
    if (fc == forecasts.end()) {
      data.history.days.push_back(day);
      data.history.prices.push_back(prices.prices[d]);
      data.history.regulation.push_back(regulation.hourly[d]);
      continue;
    }
    EvaluationDay e;
    e.day = day;
    e.forecasts = fc->second;
    e.realized.wind = actual.at(day);
    e.realized.prices = prices.prices[d];
    e.regulation_hourly = regulation.hourly[d];
    e.realized.regulation = daily_pair(regulation.hourly[d]);
    data.evaluation.push_back(std::move(e));
  }
  for (const auto& entry : forecasts) {
    if (std::find(prices.days.begin(), prices.days.end(), entry.first) == prices.days.end()) {
      throw CsvError(paths.prices.string() + ": missing " + day_label(entry.first) + " present in wind files");
    }
  }
  return data;
}

DataPaths emit_dataset(const std::filesystem::path& dir, const Dataset& data) {
  std::filesystem::create_directories(dir);
  DataPaths paths{dir / "prices.csv", dir / "wind_forecasts.csv", dir / "wind_actual.csv", dir / "regulation.csv"};

  struct DayRef {
    int day;
    const DayPrices* prices;
    const HourlyRegulation* regulation;
  };
  std::vector<DayRef> all;
  for (std::size_t d = 0; d < data.history.size(); ++d) {
    all.push_back({data.history.days[d], &data.history.prices[d], &data.history.regulation[d]});
  }
  for (const EvaluationDay& e : data.evaluation) all.push_back({e.day, &e.realized.prices, &e.regulation_hourly});
  std::sort(all.begin(), all.end(), [](const DayRef& a, const DayRef& b) { return a.day < b.day; });

  PriceTable prices;
  RegulationTable regulation;
  for (const DayRef& r : all) {
    prices.days.push_back(r.day);
    prices.prices.push_back(*r.prices);
    regulation.days.push_back(r.day);
    regulation.hourly.push_back(*r.regulation);
  }
  {
    auto out = open_out(paths.prices);
    write_prices(out, prices);
  }
  {
    auto out = open_out(paths.regulation);
    write_regulation(out, regulation);
  }
  {
    auto out = open_out(paths.wind_forecasts);
    write_wind_forecasts(out, data.evaluation);
  }
  {
    auto out = open_out(paths.wind_actual);
    write_wind_actual(out, data.evaluation);
  }
  return paths;
}

}  // namespace wspp::cli
