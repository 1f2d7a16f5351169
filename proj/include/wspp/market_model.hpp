#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wspp {

/// Hourly resolution is fixed: one trading day is 24 settlement periods.
inline constexpr int kHours = 24;

/// Number of market price series carried per hour.
inline constexpr int kPriceColumns = 7;

template <typename Scalar>
using Hourly = Eigen::Matrix<Scalar, kHours, 1>;
using HourlyVector = Hourly<double>;

using PriceMatrix = Eigen::Matrix<double, kHours, kPriceColumns>;

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Physical and market constants of the wind & storage plant.
struct SystemParams {
  double rated_wind_power = 0.0;  // MW
  double ess_capacity = 0.0;      // MWh
  double ess_power_limit = 0.0;   // MW
  double eta_in = 0.0;
  double eta_out = 0.0;
  double initial_energy = 0.0;    // MWh
  double soc_min = 0.0;
  double kappa_rm = 0.0;          // reserve deviation penalty factor, > 1
  double r_rm_up = 0.0;           // up share of the regulation band

  /// Largest energy-market position the plant can physically back.
  double trade_limit() const { return rated_wind_power + ess_power_limit; }

  friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// Throws ValidationError naming the first violated range; returns the input otherwise.
const SystemParams& validate(const SystemParams& params);

/// Column order of DayPrices. The flattened 168-vector used for clustering is
/// hour-major with the columns in this order.
enum class PriceColumn : int {
  kBetaDam = 0,
  kBetaIdm,
  kGammaRm,
  kBetaRmUp,
  kBetaRmDw,
  kLambdaBmUp,
  kLambdaBmDw,
};

inline constexpr std::array<const char*, kPriceColumns> kPriceColumnNames = {
    "beta_dam",   "beta_idm",     "gamma_rm",    "beta_rm_up",
    "beta_rm_dw", "lambda_bm_up", "lambda_bm_dw"};

inline constexpr int index_of(PriceColumn c) { return static_cast<int>(c); }

/// One day of market prices, 24 hours by 7 series (EUR/MWh; gamma in EUR/MW).
struct DayPrices {
  PriceMatrix values = PriceMatrix::Zero();

  auto column(PriceColumn c) { return values.col(index_of(c)); }
  auto column(PriceColumn c) const { return values.col(index_of(c)); }

  auto beta_dam() const { return column(PriceColumn::kBetaDam); }
  auto beta_idm() const { return column(PriceColumn::kBetaIdm); }
  auto gamma_rm() const { return column(PriceColumn::kGammaRm); }
  auto beta_rm_up() const { return column(PriceColumn::kBetaRmUp); }
  auto beta_rm_dw() const { return column(PriceColumn::kBetaRmDw); }
  auto lambda_bm_up() const { return column(PriceColumn::kLambdaBmUp); }
  auto lambda_bm_dw() const { return column(PriceColumn::kLambdaBmDw); }

  /// Hour-major flattening (hour 0 columns 0..6, hour 1 columns 0..6, ...).
  Eigen::VectorXd flatten() const;
  static DayPrices unflatten(const Eigen::Ref<const Eigen::VectorXd>& flat);

  friend bool operator==(const DayPrices& a, const DayPrices& b) {
    return a.values == b.values;
  }
};

/// Non-negative entries and lambda_bm_up <= lambda_bm_dw in every hour.
const DayPrices& validate(const DayPrices& prices);

/// Share of the committed band called by the operator, one pair per day.
struct RegulationPair {
  double pi_up = 0.0;
  double pi_dw = 0.0;

  friend bool operator==(const RegulationPair&, const RegulationPair&) = default;
};

const RegulationPair& validate(const RegulationPair& pair);

/// Available wind power per hour (MW); non-negative and finite.
const HourlyVector& validate_wind(const HourlyVector& wind);

struct Scenario {
  HourlyVector wind = HourlyVector::Zero();
  DayPrices prices;
  RegulationPair regulation;
  double probability = 1.0;
};

/// Non-empty list of scenarios whose probabilities sum to one.
class ScenarioSet {
 public:
  static constexpr double kProbabilityTolerance = 1e-9;

  explicit ScenarioSet(std::vector<Scenario> scenarios);

  const std::vector<Scenario>& scenarios() const { return scenarios_; }
  const Scenario& operator[](std::size_t i) const { return scenarios_[i]; }
  std::size_t size() const { return scenarios_.size(); }
  auto begin() const { return scenarios_.begin(); }
  auto end() const { return scenarios_.end(); }

 private:
  std::vector<Scenario> scenarios_;
};

/// First-stage market positions per hour (MW).
struct CommitmentSchedule {
  HourlyVector p_dam = HourlyVector::Zero();
  HourlyVector p_idm = HourlyVector::Zero();
  HourlyVector p_rm_up = HourlyVector::Zero();
  HourlyVector p_rm_dw = HourlyVector::Zero();

  /// Net energy-market position, DAM plus IDM.
  auto p_pm() const { return p_dam + p_idm; }
  /// Total regulation band.
  auto p_rm() const { return p_rm_up + p_rm_dw; }
};

inline constexpr double kScheduleTolerance = 1e-9;

/// Checks the DAM/IDM/band limits and the up/down band ratio.
const CommitmentSchedule& validate(const CommitmentSchedule& schedule,
                                   const SystemParams& params,
                                   double tol = kScheduleTolerance);

/// Per-market income (EUR). `total` is always the sum of the four parts.
struct IncomeBreakdown {
  double i_dam = 0.0;
  double i_idm = 0.0;
  double i_bm = 0.0;
  double i_rm = 0.0;
  double total = 0.0;

  static IncomeBreakdown from_parts(double dam, double idm, double bm, double rm) {
    return {dam, idm, bm, rm, dam + idm + bm + rm};
  }
  IncomeBreakdown& operator+=(const IncomeBreakdown& o);
  IncomeBreakdown operator*(double s) const;

  friend bool operator==(const IncomeBreakdown&, const IncomeBreakdown&) = default;
};

/// Second-stage operation of the plant for one scenario (or the realized day).
struct RecourseTrace {
  HourlyVector wind_used = HourlyVector::Zero();
  HourlyVector ess_energy = HourlyVector::Zero();
  HourlyVector ess_in = HourlyVector::Zero();
  HourlyVector ess_out = HourlyVector::Zero();
  HourlyVector soc = HourlyVector::Zero();
  HourlyVector pm_traded = HourlyVector::Zero();
  HourlyVector bm_up = HourlyVector::Zero();
  HourlyVector bm_dw = HourlyVector::Zero();
  HourlyVector rm_energy_req_up = HourlyVector::Zero();
  HourlyVector rm_energy_req_dw = HourlyVector::Zero();
  HourlyVector rm_energy_off_up = HourlyVector::Zero();
  HourlyVector rm_energy_off_dw = HourlyVector::Zero();
  HourlyVector rm_dev_up = HourlyVector::Zero();
  HourlyVector rm_dev_dw = HourlyVector::Zero();
};

/// Stored energy after each hour: E_t = E_0 + sum eta_in*in - sum out/eta_out.
template <typename DerivedIn, typename DerivedOut>
HourlyVector ess_trajectory(const SystemParams& params,
                            const Eigen::MatrixBase<DerivedIn>& charge,
                            const Eigen::MatrixBase<DerivedOut>& discharge) {
  HourlyVector flow = params.eta_in * charge.derived().template cast<double>() -
                      discharge.derived().template cast<double>() / params.eta_out;
  HourlyVector energy;
  double level = params.initial_energy;
  for (int t = 0; t < kHours; ++t) {
    level += flow(t);
    energy(t) = level;
  }
  return energy;
}

/// State of charge as a fraction of capacity.
template <typename Derived>
auto state_of_charge(const SystemParams& params, const Eigen::MatrixBase<Derived>& energy) {
  return energy.derived() / params.ess_capacity;
}

/// Reserve deviation prices, lambda = kappa * beta for both directions.
std::pair<HourlyVector, HourlyVector> rm_penalty_prices(const DayPrices& prices, double kappa);

}  // namespace wspp
