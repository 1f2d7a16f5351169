#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "invariants.hpp"

#include "wspp/evaluation.hpp"
#include "wspp/synth.hpp"

using namespace wspp;

namespace {

void check_invariants(const SystemParams& p, const DayResult& r, const RealizedDay& day) {
  const auto v = test::check_trace(p, r.commitments, day.wind, day.regulation, r.realized_trace);
  CHECK(test::within_tolerances(v));
}

}  // namespace

TEST_CASE("ex-post settlement of simple positions") {
  const SystemParams p = test::empty_storage_params();

  SUBCASE("no positions on a null market") {
    const auto r = test::as_realized(test::single(HourlyVector::Zero(), DayPrices{}));
    const ExPostResult e = ex_post_evaluate(p, CommitmentSchedule{}, r);
    CHECK(e.income.total == doctest::Approx(0.0));
  }
  SUBCASE("idle wind sold as upward imbalance") {
    DayPrices d = test::flat_prices(PriceColumn::kLambdaBmUp, 20.0);
    d.column(PriceColumn::kLambdaBmDw).setConstant(20.0);
    const ExPostResult e = ex_post_evaluate(p, CommitmentSchedule{}, test::as_realized(test::single(HourlyVector::Constant(10.0), d)));
    CHECK(e.income.i_bm == doctest::Approx(4800.0));
    CHECK(e.income.total == doctest::Approx(4800.0));
  }
  SUBCASE("a day-ahead sale delivered exactly") {
    DayPrices d = test::flat_prices(PriceColumn::kBetaDam, 50.0);
    d.column(PriceColumn::kLambdaBmUp).setConstant(10.0);
    d.column(PriceColumn::kLambdaBmDw).setConstant(100.0);
    CommitmentSchedule c;
    c.p_dam.setConstant(10.0);
    const ExPostResult e = ex_post_evaluate(p, c, test::as_realized(test::single(HourlyVector::Constant(10.0), d)));
    CHECK(e.income.i_dam == doctest::Approx(12000.0));
    CHECK(e.income.i_bm == doctest::Approx(0.0));
    CHECK(e.trace.bm_up.isZero(1e-9));
    CHECK(e.trace.bm_dw.isZero(1e-9));
  }
  SUBCASE("a shortfall is bought back at the downward imbalance price") {
    DayPrices d = test::flat_prices(PriceColumn::kBetaDam, 50.0);
    d.column(PriceColumn::kLambdaBmUp).setConstant(10.0);
    d.column(PriceColumn::kLambdaBmDw).setConstant(100.0);
    CommitmentSchedule c;
    c.p_dam.setConstant(10.0);
    const ExPostResult e = ex_post_evaluate(p, c, test::as_realized(test::single(HourlyVector::Constant(8.0), d)));
    CHECK(e.income.i_dam == doctest::Approx(12000.0));
    CHECK(e.income.i_bm == doctest::Approx(-2.0 * 100.0 * 24.0));
  }
}

TEST_CASE("framework A on a single realized scenario expects what it realizes") {
  const Dataset data = test::small_dataset(11, 3, 10);
  const SystemParams p = test::default_params();
  for (const EvaluationDay& day : data.evaluation) {
    CAPTURE(day.day);
    const DayResult r = run_day_a(p, ScenarioSet({test::as_scenario(day.realized)}), day.realized);
    CHECK(r.framework == "A");
    CHECK(r.realized.total == doctest::Approx(r.expected.total).epsilon(1e-9));
    CHECK(r.realized.total == doctest::Approx(r.realized.i_dam + r.realized.i_idm + r.realized.i_bm + r.realized.i_rm));
    check_invariants(p, r, day.realized);
  }
}

TEST_CASE("framework A on the null market commits nothing") {
  const RealizedDay day = test::as_realized(test::single(HourlyVector::Zero(), DayPrices{}));
  const DayResult r = run_day_a(test::empty_storage_params(), ScenarioSet({test::as_scenario(day)}), day);
  CHECK(r.commitments.p_dam.isZero(1e-9));
  CHECK(r.commitments.p_idm.isZero(1e-9));
  CHECK(r.commitments.p_rm().isZero(1e-9));
  CHECK(r.realized.total == doctest::Approx(0.0));
}

TEST_CASE("with perfect information the sequential phases match framework A") {
  const Dataset data = test::small_dataset(13, 3, 10);
  const SystemParams p = test::default_params();
  for (const EvaluationDay& day : data.evaluation) {
    CAPTURE(day.day);
    const ScenarioSet one({test::as_scenario(day.realized)});
    const std::vector<ScenarioSet> phases{one, one, one, one};
    const DayResult a = run_day_a(p, one, day.realized);
    const DayResult b = run_day_b(p, phases, day.realized);
    CHECK(b.framework == "B");
    CHECK(std::abs(b.realized.total - a.realized.total) <= 1e-6);
    check_invariants(p, b, day.realized);
  }
}

TEST_CASE("framework B needs exactly four phase sets") {
  const Dataset data = test::small_dataset(2, 1, 10);
  const ScenarioSet one({test::as_scenario(data.evaluation[0].realized)});
  const std::vector<ScenarioSet> three{one, one, one};
  CHECK_THROWS_AS(run_day_b(test::default_params(), three, data.evaluation[0].realized), std::invalid_argument);
}

TEST_CASE("day scenario sets shrink as prices are revealed") {
  const Dataset data = test::small_dataset(7, 1, 60);
  const DayScenarios s = test::default_scenarios(data);
  CHECK(s.framework_a.size() == 90);
  REQUIRE(s.phases.size() == 4);
  CHECK(s.phases[0].size() == 90);
  CHECK(s.phases[1].size() == 90);
  CHECK(s.phases[2].size() == 90);
  CHECK(s.phases[3].size() == 9);
  const DayPrices& realized = data.evaluation[0].realized.prices;
  for (const Scenario& sc : s.phases[1]) CHECK(sc.prices.beta_dam() == realized.beta_dam());
  for (const Scenario& sc : s.phases[3]) CHECK(sc.prices == realized);
}

TEST_CASE("comparison statistics") {
  DayResult a, b;
  a.realized = IncomeBreakdown::from_parts(100.0, 0.0, 0.0, 0.0);
  b.realized = IncomeBreakdown::from_parts(90.0, 20.0, 0.0, 0.0);
  const std::vector<DayResult> as{a, a}, bs{b, a};
  const ComparisonReport r = compare(as, bs);
  CHECK(r.n_days == 2);
  CHECK(r.win_rate_b_over_a == doctest::Approx(0.5));
  CHECK(r.mean_daily_delta == doctest::Approx(5.0));
  CHECK(r.mean_relative_improvement == doctest::Approx(0.05));
  CHECK(r.mean_b.i_idm == doctest::Approx(10.0));
  const std::vector<DayResult> one{a};
  CHECK_THROWS_AS(compare(as, one), std::invalid_argument);
}

TEST_CASE("a one-day comparison run") {
  const Dataset data = test::small_dataset(7, 1, 40);
  ScenarioConfig cfg;
  cfg.k_prices = 2;
  cfg.k_regulation = 1;
  cfg.seed = 7;
  int calls = 0;
  const ComparisonRun run = compare(test::default_params(), data, 1, cfg, {}, [&](const DayResult& a, const DayResult& b) {
    ++calls;
    CHECK(a.day == b.day);
  });
  CHECK(calls == 1);
  CHECK(run.report.n_days == 1);
  REQUIRE(run.a.size() == 1);
  REQUIRE(run.b.size() == 1);
  CHECK(run.report.mean_daily_delta == doctest::Approx(run.b[0].realized.total - run.a[0].realized.total));
  check_invariants(test::default_params(), run.a[0], data.evaluation[0].realized);
  check_invariants(test::default_params(), run.b[0], data.evaluation[0].realized);
}

TEST_CASE("synthetic data") {
  SUBCASE("generation is deterministic") {
    const Dataset x = test::small_dataset(21, 3, 20);
    const Dataset y = test::small_dataset(21, 3, 20);
    CHECK(x.history.price_matrix() == y.history.price_matrix());
    for (std::size_t d = 0; d < x.evaluation.size(); ++d) {
      CHECK(x.evaluation[d].realized.wind == y.evaluation[d].realized.wind);
      CHECK(x.evaluation[d].forecasts[0].p50 == y.evaluation[d].forecasts[0].p50);
    }
    CHECK(test::small_dataset(22, 3, 20).history.price_matrix() != x.history.price_matrix());
  }
  SUBCASE("days follow the history") {
    const Dataset x = test::small_dataset(3, 4, 15);
    CHECK(x.history.size() == 15);
    CHECK(x.evaluation.size() == 4);
    CHECK(x.history.days.back() + 1 == x.evaluation.front().day);
    for (const auto& d : x.evaluation) {
      for (const auto& f : d.forecasts) CHECK_NOTHROW(validate(f));
      CHECK_NOTHROW(validate(d.realized.prices));
      CHECK_NOTHROW(validate_wind(d.realized.wind));
    }
  }
  SUBCASE("without forecast error every percentile is the realized wind") {
    SynthConfig c;
    c.n_days = 2;
    c.history_days = 5;
    c.wind_volatility = 0.0;
    for (const auto& d : synth_generate(c).evaluation) {
      for (const auto& f : d.forecasts) {
        CHECK(f.p25 == d.realized.wind);
        CHECK(f.p50 == d.realized.wind);
        CHECK(f.p75 == d.realized.wind);
      }
    }
  }
  SUBCASE("forecast bands narrow with later snapshots") {
    const Dataset x = test::small_dataset(5, 20, 5);
    std::array<double, kSnapshots> width{};
    for (const auto& d : x.evaluation) {
      for (int k = 0; k < kSnapshots; ++k) width[k] += (d.forecasts[k].p75 - d.forecasts[k].p25).sum();
    }
    for (int k = 1; k < kSnapshots; ++k) CHECK(width[k] < width[k - 1]);
  }
  SUBCASE("bad knobs are rejected") {
    SynthConfig c;
    c.price_volatility = -1.0;
    CHECK_THROWS_AS(synth_generate(c), ValidationError);
    c = SynthConfig{};
    c.forecast_decay = {0.5, 0.6, 0.3, 0.1};
    CHECK_THROWS_AS(synth_generate(c), ValidationError);
  }
}
