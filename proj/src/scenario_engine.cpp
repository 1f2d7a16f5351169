#include "wspp/scenario_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wspp {

const ForecastSnapshot& validate(const ForecastSnapshot& s) {
  for (int t = 0; t < kHours; ++t) {
    if (!std::isfinite(s.p25(t)) || !std::isfinite(s.p50(t)) || !std::isfinite(s.p75(t))) {
      throw ValidationError("forecast percentiles must be finite (hour " + std::to_string(t) + ")");
    }
    if (!(0.0 <= s.p25(t) && s.p25(t) <= s.p50(t) && s.p50(t) <= s.p75(t))) {
      throw ValidationError("forecast percentiles out of order at hour " + std::to_string(t) +
                            ": need 0 <= p25 <= p50 <= p75");
    }
  }
  return s;
}

namespace {

std::string hour_label(int t) { return "hour " + std::to_string(t); }

}  // namespace

Family<DayPrices> price_scenarios(const Eigen::MatrixXd& history, int k, std::uint64_t seed) {
  if (history.cols() != kPriceAttributes) {
    throw std::invalid_argument("price history rows need " + std::to_string(kPriceAttributes) +
                                " attributes, got " + std::to_string(history.cols()));
  }
  if (history.rows() < k) {
    throw std::invalid_argument("price history has " + std::to_string(history.rows()) +
                                " days, fewer than k=" + std::to_string(k));
  }
  const ClusterModel<double> model = kmeans<double>(history, k, seed);
  Family<DayPrices> family;
  for (int c = 0; c < model.k(); ++c) {
    if (model.counts[c] == 0) continue;
    DayPrices day = DayPrices::unflatten(model.centroids.row(c).transpose());
    if ((day.values.array() < 0.0).any()) {
      family.warnings.push_back("price cluster " + std::to_string(c) + ": negative entries clamped to 0");
      day.values = day.values.cwiseMax(0.0);
    }
    auto up = day.column(PriceColumn::kLambdaBmUp);
    auto dw = day.column(PriceColumn::kLambdaBmDw);
    for (int t = 0; t < kHours; ++t) {
      if (up(t) > dw(t)) {
        std::swap(up(t), dw(t));
        family.warnings.push_back("price cluster " + std::to_string(c) + ", " + hour_label(t) +
                                  ": balancing prices swapped");
      }
    }
    family.items.push_back({day, model.probabilities(c)});
  }
  return family;
}

Family<RegulationPair> regulation_scenarios(const std::vector<RegulationPair>& history, int k,
                                            std::uint64_t seed) {
  if (static_cast<int>(history.size()) < k) {
    throw std::invalid_argument("regulation history has " + std::to_string(history.size()) +
                                " points, fewer than k=" + std::to_string(k));
  }
  Eigen::MatrixXd points(static_cast<Eigen::Index>(history.size()), 2);
  for (std::size_t i = 0; i < history.size(); ++i) {
    validate(history[i]);
    points(static_cast<Eigen::Index>(i), 0) = history[i].pi_up;
    points(static_cast<Eigen::Index>(i), 1) = history[i].pi_dw;
  }
  const ClusterModel<double> model = kmeans<double>(points, k, seed);
  Family<RegulationPair> family;
  for (int c = 0; c < model.k(); ++c) {
    if (model.counts[c] == 0) continue;
    const RegulationPair pair{std::clamp(model.centroids(c, 0), 0.0, 1.0),
                              std::clamp(model.centroids(c, 1), 0.0, 1.0)};
    family.items.push_back({pair, model.probabilities(c)});
  }
  return family;
}

Family<HourlyVector> wind_scenarios(const ForecastSnapshot& snapshot) {
  validate(snapshot);
  Family<HourlyVector> family;
  for (const HourlyVector* curve : {&snapshot.p25, &snapshot.p50, &snapshot.p75}) {
    family.items.push_back({*curve, 1.0 / 3.0});
  }
  return family;
}

ScenarioSet combine(const Family<HourlyVector>& wind, const Family<DayPrices>& prices,
                    const Family<RegulationPair>& regulation) {
  if (wind.items.empty() || prices.items.empty() || regulation.items.empty()) {
    throw std::invalid_argument("combine needs non-empty wind, price and regulation families");
  }
  auto check = [](const auto& family, const char* name) {
    double sum = 0.0;
    for (const auto& item : family.items) sum += item.probability;
    if (std::abs(sum - 1.0) > ScenarioSet::kProbabilityTolerance) {
      throw std::invalid_argument(std::string(name) + " probabilities sum to " + std::to_string(sum));
    }
  };
  check(wind, "wind");
  check(prices, "price");
  check(regulation, "regulation");

  std::vector<Scenario> out;
  out.reserve(wind.size() * prices.size() * regulation.size());
  for (const auto& w : wind.items) {
    for (const auto& p : prices.items) {
      for (const auto& r : regulation.items) {
        out.push_back({w.value, p.value, r.value, w.probability * p.probability * r.probability});
      }
    }
  }
  return ScenarioSet(std::move(out));
}

Observation& Observation::reveal(const DayPrices& realized, std::initializer_list<PriceColumn> columns) {
  for (PriceColumn c : columns) {
    prices.column(c) = realized.column(c);
    known_prices[index_of(c)] = true;
  }
  return *this;
}

Observation& Observation::reveal_all_prices(const DayPrices& realized) {
  prices = realized;
  known_prices.fill(true);
  return *this;
}

ScenarioSet collapse_to_realized(const ScenarioSet& set, const Observation& observed) {
  std::vector<Scenario> merged;
  for (Scenario s : set) {
    if (observed.wind) s.wind = *observed.wind;
    if (observed.regulation) s.regulation = *observed.regulation;
    for (int c = 0; c < kPriceColumns; ++c) {
      if (observed.known_prices[c]) s.prices.values.col(c) = observed.prices.values.col(c);
    }
    auto same = std::find_if(merged.begin(), merged.end(), [&](const Scenario& m) {
      return m.wind == s.wind && m.prices == s.prices && m.regulation == s.regulation;
    });
    if (same != merged.end()) {
      same->probability += s.probability;
    } else {
      merged.push_back(std::move(s));
    }
  }
  return ScenarioSet(std::move(merged));
}

}  // namespace wspp
