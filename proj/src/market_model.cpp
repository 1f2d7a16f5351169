#include "wspp/market_model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace wspp {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

}  // namespace

const SystemParams& validate(const SystemParams& p) {
  require(p.rated_wind_power > 0.0, "rated_wind_power must be positive");
  require(p.ess_capacity > 0.0, "ess_capacity must be positive");
  require(p.ess_power_limit > 0.0, "ess_power_limit must be positive");
  require(p.eta_in > 0.0 && p.eta_in < 1.0, "eta_in out of (0,1)");
  require(p.eta_out > 0.0 && p.eta_out < 1.0, "eta_out out of (0,1)");
  require(p.soc_min >= 0.0 && p.soc_min <= 1.0, "soc_min out of [0,1]");
  require(p.initial_energy >= p.soc_min * p.ess_capacity,
          "initial_energy below soc_min * ess_capacity");
  require(p.initial_energy <= p.ess_capacity, "initial_energy exceeds ess_capacity");
  require(p.kappa_rm > 1.0, "kappa_rm must exceed 1");
  require(p.r_rm_up > 0.0 && p.r_rm_up < 1.0, "r_rm_up out of (0,1)");
  return p;
}

Eigen::VectorXd DayPrices::flatten() const {
  Eigen::Matrix<double, kHours, kPriceColumns, Eigen::RowMajor> row_major = values;
  return Eigen::Map<const Eigen::VectorXd>(row_major.data(), kHours * kPriceColumns);
}

DayPrices DayPrices::unflatten(const Eigen::Ref<const Eigen::VectorXd>& flat) {
  if (flat.size() != kHours * kPriceColumns) {
    throw ValidationError("price vector must have 168 attributes");
  }
  Eigen::Matrix<double, kHours, kPriceColumns, Eigen::RowMajor> row_major =
      Eigen::Map<const Eigen::Matrix<double, kHours, kPriceColumns, Eigen::RowMajor>>(flat.data());
  DayPrices out;
  out.values = row_major;
  return out;
}

const DayPrices& validate(const DayPrices& prices) {
  require(prices.values.allFinite(), "prices must be finite");
  for (int t = 0; t < kHours; ++t) {
    for (int c = 0; c < kPriceColumns; ++c) {
      if (prices.values(t, c) < 0.0) {
        std::ostringstream os;
        os << kPriceColumnNames[c] << " negative at hour " << t;
        throw ValidationError(os.str());
      }
    }
    if (prices.lambda_bm_up()(t) > prices.lambda_bm_dw()(t)) {
      std::ostringstream os;
      os << "lambda_bm_up exceeds lambda_bm_dw at hour " << t;
      throw ValidationError(os.str());
    }
  }
  return prices;
}

const RegulationPair& validate(const RegulationPair& pair) {
  require(pair.pi_up >= 0.0 && pair.pi_up <= 1.0, "pi_up out of [0,1]");
  require(pair.pi_dw >= 0.0 && pair.pi_dw <= 1.0, "pi_dw out of [0,1]");
  return pair;
}

const HourlyVector& validate_wind(const HourlyVector& wind) {
  require(wind.allFinite(), "wind curve must be finite");
  require((wind.array() >= 0.0).all(), "wind curve must be non-negative");
  return wind;
}

ScenarioSet::ScenarioSet(std::vector<Scenario> scenarios) : scenarios_(std::move(scenarios)) {
  require(!scenarios_.empty(), "scenario set is empty");
  double sum = 0.0;
  for (const auto& s : scenarios_) {
    require(s.probability > 0.0 && s.probability <= 1.0 + kProbabilityTolerance, "scenario probability out of (0,1]");
    sum += s.probability;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "scenario probabilities sum to " << sum << ", not 1";
    throw ValidationError(os.str());
  }
}

const CommitmentSchedule& validate(const CommitmentSchedule& s, const SystemParams& p,
                                   double tol) {
  const double limit = p.trade_limit();
  for (int t = 0; t < kHours; ++t) {
    auto at = [t](const char* what) { return std::string(what) + " at hour " + std::to_string(t); };
    require(s.p_dam(t) >= -p.ess_power_limit - tol && s.p_dam(t) <= limit + tol,
            at("p_dam out of [-ess_power_limit, rated_wind_power + ess_power_limit]"));
    require(std::abs(s.p_idm(t)) <= limit + tol,
            at("|p_idm| exceeds rated_wind_power + ess_power_limit"));
    require(s.p_rm_up(t) >= -tol && s.p_rm_up(t) <= p.ess_power_limit + tol,
            at("p_rm_up out of [0, ess_power_limit]"));
    require(s.p_rm_dw(t) >= -tol && s.p_rm_dw(t) <= p.ess_power_limit + tol,
            at("p_rm_dw out of [0, ess_power_limit]"));
    const double band = s.p_rm_up(t) + s.p_rm_dw(t);
    require(std::abs(s.p_rm_up(t) - p.r_rm_up * band) <= tol * std::max(1.0, band),
            at("p_rm_up / (p_rm_up + p_rm_dw) differs from r_rm_up"));
  }
  return s;
}

IncomeBreakdown& IncomeBreakdown::operator+=(const IncomeBreakdown& o) {
  i_dam += o.i_dam;
  i_idm += o.i_idm;
  i_bm += o.i_bm;
  i_rm += o.i_rm;
  total += o.total;
  return *this;
}

IncomeBreakdown IncomeBreakdown::operator*(double s) const {
  return {i_dam * s, i_idm * s, i_bm * s, i_rm * s, total * s};
}

std::pair<HourlyVector, HourlyVector> rm_penalty_prices(const DayPrices& prices, double kappa) {
  return {kappa * prices.beta_rm_up(), kappa * prices.beta_rm_dw()};
}

}  // namespace wspp
