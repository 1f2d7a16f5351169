#include "wspp/cli/dispatch.hpp"

#include "wspp/cli/csv_io.hpp"
#include "wspp/stochastic_builder.hpp"
#include "wspp/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace wspp::cli {

namespace {

class CommandError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Dataset load_dataset(const RunConfig& config) {
  if (config.synthetic) return synth_generate(*config.synthetic);
  return ingest(*config.data);
}

const EvaluationDay& pick_day(const Dataset& data, const std::optional<int>& day) {
  if (data.evaluation.empty()) throw CommandError("the data holds no evaluation days");
  if (!day) return data.evaluation.front();
  const auto it = std::find_if(data.evaluation.begin(), data.evaluation.end(),
                               [&](const EvaluationDay& e) { return e.day == *day; });
  if (it == data.evaluation.end()) {
    throw CommandError("day " + std::to_string(*day) + " is not an evaluation day (" +
                       std::to_string(data.evaluation.front().day) + ".." +
                       std::to_string(data.evaluation.back().day) + ")");
  }
  return *it;
}

struct Families {
  Family<DayPrices> prices;
  Family<RegulationPair> regulation;
};

Families cluster(const RunConfig& config, const Dataset& data, std::ostream& err) {
  Families f{price_scenarios(data.history.price_matrix(), config.scenarios.k_prices, config.scenarios.seed),
             regulation_scenarios(data.history.regulation_pairs(), config.scenarios.k_regulation,
                                  config.scenarios.seed)};
  for (const auto& w : f.prices.warnings) err << "warning: " << w << '\n';
  for (const auto& w : f.regulation.warnings) err << "warning: " << w << '\n';
  return f;
}

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.output_dir);
  const auto path = config.output_dir / name;
  std::ofstream out(path);
  if (!out) throw CommandError("cannot write " + path.string());
  return out;
}

template <typename Writer>
std::filesystem::path emit(const RunConfig& config, const std::string& name, Writer&& write) {
  auto out = open_output(config, name);
  write(out);
  return config.output_dir / name;
}

ScenarioSet load_scenarios(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CommandError("cannot read " + path.string());
  return read_scenarios(in, path.string());
}

void print_income(std::ostream& out, const char* label, const IncomeBreakdown& i) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s: total %.2f (dam %.2f, idm %.2f, bm %.2f, rm %.2f)\n", label, i.total,
                i.i_dam, i.i_idm, i.i_bm, i.i_rm);
  out << buf;
}

void report_day(const RunConfig& config, const DayResult& result, std::ostream& out) {
  const ReportRow row = ReportRow::from(result);
  const auto commitments =
      emit(config, "commitments.csv", [&](std::ostream& o) { write_commitments(o, result.commitments); });
  const auto report = emit(config, "report.csv", [&](std::ostream& o) { write_report(o, {&row, 1}); });
  out << "day " << result.day << " framework " << result.framework << '\n';
  print_income(out, "expected", result.expected);
  print_income(out, "realized", result.realized);
  out << "wrote " << commitments.string() << " and " << report.string() << '\n';
}

int run_synth(const RunConfig& config, std::ostream& out) {
  const Dataset data = load_dataset(config);
  emit_dataset(config.output_dir, data);
  out << "wrote " << data.history.size() << " history days and " << data.evaluation.size()
      << " evaluation days to " << config.output_dir.string() << '\n';
  return 0;
}

int run_scenarios(const RunConfig& config, const CommandLine& cl, std::ostream& out, std::ostream& err) {
  const Dataset data = load_dataset(config);
  const EvaluationDay& day = pick_day(data, cl.day);
  const Families f = cluster(config, data, err);
  const DayScenarios sets = day_scenarios(day, f.prices, f.regulation, config.scenarios.snapshot_a);
  if (cl.framework == "a") {
    const auto path =
        emit(config, "scenarios.csv", [&](std::ostream& o) { write_scenarios(o, sets.framework_a); });
    out << "day " << day.day << ": " << sets.framework_a.size() << " scenarios written to " << path.string()
        << '\n';
    return 0;
  }
  for (std::size_t k = 0; k < sets.phases.size(); ++k) {
    const auto path = emit(config, "scenarios_phase" + std::to_string(k + 1) + ".csv",
                           [&](std::ostream& o) { write_scenarios(o, sets.phases[k]); });
    out << "day " << day.day << " phase " << k + 1 << ": " << sets.phases[k].size() << " scenarios written to "
        << path.string() << '\n';
  }
  return 0;
}

int run_solve_a(const RunConfig& config, const CommandLine& cl, std::ostream& out, std::ostream& err) {
  const Dataset data = load_dataset(config);
  const EvaluationDay& day = pick_day(data, cl.day);
  std::optional<ScenarioSet> set;
  if (cl.scenarios) {
    set = load_scenarios(*cl.scenarios);
  } else {
    const Families f = cluster(config, data, err);
    set = day_scenarios(day, f.prices, f.regulation, config.scenarios.snapshot_a).framework_a;
  }
  DayResult result = run_day_a(config.system, *set, day.realized, config.solver);
  result.day = day.day;
  report_day(config, result, out);
  return 0;
}

int run_solve_b(const RunConfig& config, const CommandLine& cl, std::ostream& out, std::ostream& err) {
  const Dataset data = load_dataset(config);
  const EvaluationDay& day = pick_day(data, cl.day);
  const Families f = cluster(config, data, err);
  const DayScenarios sets = day_scenarios(day, f.prices, f.regulation, config.scenarios.snapshot_a);
  DayResult result = run_day_b(config.system, sets.phases, day.realized, config.solver);
  result.day = day.day;
  report_day(config, result, out);
  return 0;
}

int run_evaluate(const RunConfig& config, const CommandLine& cl, std::ostream& out) {
  if (!cl.commitments) throw CommandError("evaluate needs --commitments FILE");
  std::ifstream in(*cl.commitments);
  if (!in) throw CommandError("cannot read " + cl.commitments->string());
  const CommitmentSchedule schedule = read_commitments(in, cl.commitments->string());
  const Dataset data = load_dataset(config);
  const EvaluationDay& day = pick_day(data, cl.day);
  const ExPostResult result = ex_post_evaluate(config.system, schedule, day.realized, config.solver);
  ReportRow row{day.day, "ex-post", result.income, result.income.total, {}};
  const auto report = emit(config, "report.csv", [&](std::ostream& o) { write_report(o, {&row, 1}); });
  const auto trace = emit(config, "trace.csv", [&](std::ostream& o) { write_trace(o, result.trace); });
  out << "day " << day.day << '\n';
  print_income(out, "realized", result.income);
  out << "wrote " << report.string() << " and " << trace.string() << '\n';
  return 0;
}

int run_compare(const RunConfig& config, const CommandLine& cl, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const Dataset data = load_dataset(config);
  const int n_days = cl.days.value_or(static_cast<int>(data.evaluation.size()));
  const ComparisonRun run =
      compare(config.system, data, n_days, config.scenarios, config.solver, [&](const DayResult& a, const DayResult& b) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "day %d: A %.2f  B %.2f  delta %.2f\n", a.day, a.realized.total,
                      b.realized.total, b.realized.total - a.realized.total);
        err << buf << std::flush;
      });
  for (const auto& w : run.warnings) err << "warning: " << w << '\n';

  std::vector<ReportRow> rows;
  for (std::size_t d = 0; d < run.a.size(); ++d) {
    rows.push_back(ReportRow::from(run.a[d]));
    rows.push_back(ReportRow::from(run.b[d]));
  }
  const auto report = emit(config, "report.csv", [&](std::ostream& o) { write_report(o, rows); });
  const auto comparison = emit(config, "comparison.csv", [&](std::ostream& o) { write_comparison(o, run.report); });

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const ComparisonReport& r = run.report;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "days %d\nmean realized A %.2f\nmean realized B %.2f\nmean daily delta %.2f\n"
                "win rate B over A %.1f%%\nrelative improvement %.2f%%\nelapsed %.1f s\n",
                r.n_days, r.mean_a.total, r.mean_b.total, r.mean_daily_delta, 100.0 * r.win_rate_b_over_a,
                100.0 * r.mean_relative_improvement, seconds);
  out << buf;
  out << "wrote " << report.string() << " and " << comparison.string() << '\n';
  return 0;
}

}  // namespace

std::string usage() {
  return "usage: wspp <command> [options]\n"
         "commands:\n"
         "  synth       write synthetic prices, wind and regulation CSVs\n"
         "  scenarios   write the scenario set of a day (--framework b: one file per phase)\n"
         "  solve-a     solve the single-phase model for a day\n"
         "  solve-b     solve the four-phase sequence for a day\n"
         "  evaluate    score --commitments against a realized day\n"
         "  compare     run both frameworks over the evaluation days\n"
         "options:\n"
         "  --config PATH  --days N  --seed S  --out DIR  --framework {a,b}  --tol X\n"
         "  --day D  --commitments FILE  --scenarios FILE\n";
}

RunConfig resolve_config(const CommandLine& cl) {
  RunConfig config = cl.config ? load_config(*cl.config) : parse_config(default_config_text());
  if (cl.seed) {
    config.scenarios.seed = *cl.seed;
    if (config.synthetic) config.synthetic->seed = *cl.seed;
  }
  if (cl.days) {
    if (*cl.days < 1) throw ConfigError("--days must be >= 1");
    if (config.synthetic) config.synthetic->n_days = *cl.days;
  }
  if (cl.tol) {
    if (!(*cl.tol > 0)) throw ConfigError("--tol must be positive");
    config.solver.feasibility_tolerance = *cl.tol;
  }
  if (cl.out) config.output_dir = *cl.out;
  if (cl.framework != "a" && cl.framework != "b") throw ConfigError("--framework must be a or b");
  return config;
}

int dispatch(const CommandLine& cl, std::ostream& out, std::ostream& err) {
  if (std::find(std::begin(kCommands), std::end(kCommands), cl.command) == std::end(kCommands)) {
    err << "unknown command '" << cl.command << "'\n" << usage();
    return 2;
  }
  try {
    const RunConfig config = resolve_config(cl);
    if (cl.command == "synth") return run_synth(config, out);
    if (cl.command == "scenarios") return run_scenarios(config, cl, out, err);
    if (cl.command == "solve-a") return run_solve_a(config, cl, out, err);
    if (cl.command == "solve-b") return run_solve_b(config, cl, out, err);
    if (cl.command == "evaluate") return run_evaluate(config, cl, out);
    return run_compare(config, cl, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace wspp::cli
