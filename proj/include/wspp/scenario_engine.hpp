#pragma once

#include "wspp/kmeans.hpp"
#include "wspp/market_model.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wspp {

template <typename T>
struct Weighted {
  T value;
  double probability = 0.0;
};

/// Scenarios of one uncertainty family plus any repairs applied to centroids.
template <typename T>
struct Family {
  std::vector<Weighted<T>> items;
  std::vector<std::string> warnings;

  std::size_t size() const { return items.size(); }
};

/// Percentile curves of one wind forecast issue (1 = earliest, 4 = latest).
struct ForecastSnapshot {
  int issue = 1;
  HourlyVector p25 = HourlyVector::Zero();
  HourlyVector p50 = HourlyVector::Zero();
  HourlyVector p75 = HourlyVector::Zero();
};

/// 0 <= p25 <= p50 <= p75 in every hour.
const ForecastSnapshot& validate(const ForecastSnapshot& snapshot);

inline constexpr int kPriceAttributes = kHours * kPriceColumns;
inline constexpr int kDefaultPriceClusters = 10;
inline constexpr int kDefaultRegulationClusters = 3;

/// Clusters day vectors (rows, hour-major 168 attributes) into k price days.
/// Negative centroid entries are clamped to zero and inverted balancing
/// prices swapped, each repair reported in `warnings`. Empty clusters are dropped.
Family<DayPrices> price_scenarios(const Eigen::MatrixXd& history, int k = kDefaultPriceClusters,
                                  std::uint64_t seed = 0);

/// Clusters (pi_up, pi_dw) observations into k regulation pairs clamped to [0, 1].
/// Empty clusters are dropped.
Family<RegulationPair> regulation_scenarios(const std::vector<RegulationPair>& history,
                                            int k = kDefaultRegulationClusters, std::uint64_t seed = 0);

/// p25, p50 and p75 curves with weight 1/3 each.
Family<HourlyVector> wind_scenarios(const ForecastSnapshot& snapshot);

/// Cartesian product with joint probability equal to the product of marginals.
/// Scenario index is (w * |prices| + p) * |regulation| + r.
ScenarioSet combine(const Family<HourlyVector>& wind, const Family<DayPrices>& prices,
                    const Family<RegulationPair>& regulation);

/// Realized values that replace the corresponding scenario components.
struct Observation {
  std::optional<HourlyVector> wind;
  std::optional<RegulationPair> regulation;
  DayPrices prices;
  std::array<bool, kPriceColumns> known_prices{};

  /// Marks `columns` of `realized` as known.
  Observation& reveal(const DayPrices& realized, std::initializer_list<PriceColumn> columns);
  Observation& reveal_all_prices(const DayPrices& realized);
};

/// Overwrites observed components in every scenario, then merges identical
/// scenarios (first occurrence keeps its position) and sums their probabilities.
ScenarioSet collapse_to_realized(const ScenarioSet& set, const Observation& observed);

}  // namespace wspp
