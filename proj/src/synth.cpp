#include "wspp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace wspp {

namespace {

double round_to(double v, double per_unit) { return std::round(v * per_unit) / per_unit; }

struct DayDraw {
  DayPrices prices;
  HourlyRegulation regulation = HourlyRegulation::Zero();
  HourlyVector wind = HourlyVector::Zero();
  std::array<ForecastSnapshot, kSnapshots> forecasts;
};

DayDraw draw_day(const SynthConfig& c, int day) {
  std::mt19937_64 rng(c.seed ^ static_cast<std::uint64_t>(day));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  DayDraw out;

  const double season = 1.0 + 0.15 * std::sin(two_pi * day / 365.0);
  const double weekday = day % 7 >= 5 ? 0.85 : 1.0;
  const double sd = c.price_volatility;
  const double level = c.price_level * season * weekday * std::exp(sd * normal(rng) - 0.5 * sd * sd);
  const double reserve = c.reserve_price * season * (0.7 + 0.6 * unit(rng));
  PriceMatrix& p = out.prices.values;
  for (int t = 0; t < kHours; ++t) {
    const double profile = 1.0 + 0.2 * std::sin(two_pi * (t - 6) / 24.0) + 0.1 * std::sin(2.0 * two_pi * (t - 3) / 24.0);
    const double dam = round_to(std::max(0.0, level * profile * (1.0 + 0.05 * normal(rng))), 100.0);
    const double idm = round_to(std::max(0.0, dam * (1.0 + c.idm_spread * normal(rng))), 100.0);
    const double low = std::min(dam, idm);
    const double high = std::max(dam, idm);
    p(t, index_of(PriceColumn::kBetaDam)) = dam;
    p(t, index_of(PriceColumn::kBetaIdm)) = idm;
    p(t, index_of(PriceColumn::kGammaRm)) = round_to(std::max(0.0, reserve * (0.8 + 0.4 * unit(rng))), 100.0);
    p(t, index_of(PriceColumn::kBetaRmUp)) = round_to(dam * (1.0 + 0.3 * unit(rng)), 100.0);
    p(t, index_of(PriceColumn::kBetaRmDw)) = round_to(dam * (0.5 + 0.3 * unit(rng)), 100.0);
    p(t, index_of(PriceColumn::kLambdaBmUp)) = std::floor(low * (1.0 - c.bm_spread * unit(rng)) * 100.0) / 100.0;
    p(t, index_of(PriceColumn::kLambdaBmDw)) = std::ceil(high * (1.0 + c.bm_spread * unit(rng)) * 100.0) / 100.0;
  }

  const double up_mean = std::clamp(c.regulation_up_rate + c.regulation_volatility * normal(rng), 0.0, 1.0);
  const double dw_mean = std::clamp(c.regulation_dw_rate + c.regulation_volatility * normal(rng), 0.0, 1.0);
  for (int t = 0; t < kHours; ++t) {
    const double hourly_sd = 0.5 * c.regulation_volatility;
    out.regulation(t, 0) = round_to(std::clamp(up_mean + hourly_sd * normal(rng), 0.0, 1.0), 1e4);
    out.regulation(t, 1) = round_to(std::clamp(dw_mean + hourly_sd * normal(rng), 0.0, 1.0), 1e4);
  }

  const double rated = c.rated_wind_power;
  const double mean_cf = std::clamp(c.wind_level + 0.25 * normal(rng), 0.02, 0.98);
  const double phi = 0.85;
  double z = normal(rng);
  for (int t = 0; t < kHours; ++t) {
    if (t > 0) z = phi * z + std::sqrt(1.0 - phi * phi) * normal(rng);
    out.wind(t) = round_to(rated * std::clamp(mean_cf + c.wind_variability * z, 0.0, 1.0), 1e3);
  }

  HourlyVector error;
  double e = normal(rng);
  for (int t = 0; t < kHours; ++t) {
    if (t > 0) e = 0.8 * e + 0.6 * normal(rng);
    error(t) = e;
  }
  const double spread = c.wind_volatility * rated;
  for (int k = 0; k < kSnapshots; ++k) {
    ForecastSnapshot& f = out.forecasts[k];
    f.issue = k + 1;
    const double scale = c.forecast_decay[k] * spread;
    for (int t = 0; t < kHours; ++t) {
      const double center = out.wind(t) + scale * error(t);
      const double half = 0.674 * scale;
      f.p25(t) = round_to(std::clamp(center - half, 0.0, rated), 1e3);
      f.p50(t) = round_to(std::clamp(center, 0.0, rated), 1e3);
      f.p75(t) = round_to(std::clamp(center + half, 0.0, rated), 1e3);
    }
  }
  return out;
}

}  // namespace

const SynthConfig& validate(const SynthConfig& c) {
  if (c.n_days < 0 || c.history_days < 0) throw ValidationError("synthetic day counts must be >= 0");
  if (c.price_level < 0 || c.reserve_price < 0) throw ValidationError("synthetic price levels must be >= 0");
  if (c.price_volatility < 0 || c.idm_spread < 0 || c.wind_variability < 0 || c.wind_volatility < 0 ||
      c.regulation_volatility < 0) {
    throw ValidationError("synthetic volatilities must be >= 0");
  }
  if (c.bm_spread < 0 || c.bm_spread > 1) throw ValidationError("bm_spread must lie in [0, 1]");
  if (!(c.rated_wind_power > 0)) throw ValidationError("synthetic rated_wind_power must be > 0");
  if (c.wind_level < 0 || c.wind_level > 1) throw ValidationError("wind_level must lie in [0, 1]");
  if (c.regulation_up_rate < 0 || c.regulation_up_rate > 1 || c.regulation_dw_rate < 0 ||
      c.regulation_dw_rate > 1) {
    throw ValidationError("regulation rates must lie in [0, 1]");
  }
  for (int k = 0; k < kSnapshots; ++k) {
    if (c.forecast_decay[k] < 0 || c.forecast_decay[k] > 1) {
      throw ValidationError("forecast decay factors must lie in [0, 1]");
    }
    if (k > 0 && c.forecast_decay[k] > c.forecast_decay[k - 1]) {
      throw ValidationError("forecast decay must be non-increasing across snapshots");
    }
  }
  return c;
}

Dataset synth_generate(const SynthConfig& config) {
  validate(config);
  Dataset data;
  const int total = config.history_days + config.n_days;
  for (int d = 0; d < total; ++d) {
    DayDraw draw = draw_day(config, d);
    if (d < config.history_days) {
      data.history.days.push_back(d);
      data.history.prices.push_back(draw.prices);
      data.history.regulation.push_back(draw.regulation);
      continue;
    }
    EvaluationDay day;
    day.day = d;
    day.forecasts = draw.forecasts;
    day.realized.wind = draw.wind;
    day.realized.prices = draw.prices;
    day.realized.regulation = daily_pair(draw.regulation);
    day.regulation_hourly = draw.regulation;
    data.evaluation.push_back(std::move(day));
  }
  return data;
}

}  // namespace wspp
