#pragma once

#include "wspp/evaluation.hpp"
#include "wspp/lp.hpp"
#include "wspp/market_model.hpp"
#include "wspp/synth.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wspp::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DataPaths {
  std::filesystem::path prices;
  std::filesystem::path wind_forecasts;
  std::filesystem::path wind_actual;
  std::filesystem::path regulation;
};

/// Everything a command needs. Exactly one of `data` and `synthetic` is set.
struct RunConfig {
  SystemParams system;
  ScenarioConfig scenarios;
  lp::SolverOptions<double> solver;
  std::optional<DataPaths> data;
  std::optional<SynthConfig> synthetic;
  std::filesystem::path output_dir = "out";

  static constexpr int kWindScenarios = 3;
};

/// Parses `[section]` headers and `key = value` lines; `#` and `;` start
/// comments. Relative data paths resolve against `base_dir`.
///
/// Sections: system (all nine plant keys required), scenarios, solver,
/// data, synthetic, output. Unknown sections or keys fail with the line number.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});

RunConfig load_config(const std::filesystem::path& path);

/// Text of configs/default.ini, used when no --config is given.
std::string_view default_config_text();

}  // namespace wspp::cli
