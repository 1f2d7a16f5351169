#pragma once

#include "wspp/evaluation.hpp"
#include "wspp/synth.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace wspp::test {

/// The plant of configs/default.ini.
inline SystemParams default_params() {
  SystemParams p;
  p.rated_wind_power = 17.56;
  p.ess_capacity = 10.0;
  p.ess_power_limit = 5.0;
  p.eta_in = 0.9;
  p.eta_out = 0.9;
  p.initial_energy = 5.0;
  p.soc_min = 0.1;
  p.kappa_rm = 1.2;
  p.r_rm_up = 0.6;
  return p;
}

/// Same plant, storage starting empty (at its SOC floor).
inline SystemParams empty_storage_params() {
  SystemParams p = default_params();
  p.initial_energy = p.soc_min * p.ess_capacity;
  return p;
}

inline DayPrices flat_prices(PriceColumn column, double value) {
  DayPrices d;
  d.column(column).setConstant(value);
  return d;
}

inline Scenario single(const HourlyVector& wind, const DayPrices& prices, RegulationPair reg = {}) {
  return Scenario{wind, prices, reg, 1.0};
}

inline RealizedDay as_realized(const Scenario& s) { return RealizedDay{s.wind, s.prices, s.regulation}; }

inline Scenario as_scenario(const RealizedDay& d) { return Scenario{d.wind, d.prices, d.regulation, 1.0}; }

/// Synthetic data with a short history; seeds 1..n give distinct markets.
inline Dataset small_dataset(std::uint64_t seed, int n_days, int history_days = 40) {
  SynthConfig c;
  c.seed = seed;
  c.n_days = n_days;
  c.history_days = history_days;
  return synth_generate(c);
}

/// Default 3 x 10 x 3 scenario sets for the first evaluation day of `data`.
inline DayScenarios default_scenarios(const Dataset& data, std::size_t day = 0, std::uint64_t seed = 7) {
  const auto prices = price_scenarios(data.history.price_matrix(), kDefaultPriceClusters, seed);
  const auto regulation = regulation_scenarios(data.history.regulation_pairs(), kDefaultRegulationClusters, seed);
  return day_scenarios(data.evaluation.at(day), prices, regulation);
}

/// Fresh scratch directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("wspp_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

#ifdef WSPP_FIXTURE_DIR
inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(WSPP_FIXTURE_DIR) / name; }
#endif

}  // namespace wspp::test
