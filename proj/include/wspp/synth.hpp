#pragma once

#include "wspp/evaluation.hpp"

#include <array>
#include <cstdint>

namespace wspp {

/// Knobs of the synthetic market and wind generator.
struct SynthConfig {
  std::uint64_t seed = 7;
  int n_days = 60;
  int history_days = 365;

  double price_level = 50.0;       // EUR/MWh, mean day-ahead price
  double price_volatility = 0.2;   // log-sd of the daily price level
  double idm_spread = 0.08;        // relative sd of intraday against day-ahead
  double bm_spread = 0.3;          // max relative gap of balancing prices
  double reserve_price = 10.0;     // EUR/MW, mean capacity price

  double rated_wind_power = 17.56;  // MW
  double wind_level = 0.4;          // mean capacity factor
  double wind_variability = 0.2;    // hourly fluctuation of the realized path
  double wind_volatility = 0.15;    // forecast error sd as a share of rating

  /// Forecast error scale of snapshots 1..4.
  std::array<double, kSnapshots> forecast_decay{1.0, 0.6, 0.3, 0.1};

  double regulation_up_rate = 0.3;
  double regulation_dw_rate = 0.2;
  double regulation_volatility = 0.1;
};

/// Throws ValidationError on negative volatilities or a decay schedule
/// outside [0, 1] or increasing.
const SynthConfig& validate(const SynthConfig& config);

/// history_days market days followed by n_days evaluation days. Day d draws
/// from its own generator seeded with seed ^ d. Prices are rounded to cents,
/// wind to kW and regulation shares to 1e-4.
Dataset synth_generate(const SynthConfig& config);

}  // namespace wspp
