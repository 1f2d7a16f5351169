#include "wspp/cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace wspp::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Line {
  int number;
  std::string value;
};

double to_double(const Line& l, const std::string& key) {
  const char* begin = l.value.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ConfigError("line " + std::to_string(l.number) + ": '" + key + "' expects a number, got '" +
                      l.value + "'");
  }
  return v;
}

long to_long(const Line& l, const std::string& key) {
  const char* begin = l.value.c_str();
  char* end = nullptr;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0') {
    throw ConfigError("line " + std::to_string(l.number) + ": '" + key + "' expects an integer, got '" +
                      l.value + "'");
  }
  return v;
}

bool to_bool(const Line& l, const std::string& key) {
  if (l.value == "true" || l.value == "1" || l.value == "yes") return true;
  if (l.value == "false" || l.value == "0" || l.value == "no") return false;
  throw ConfigError("line " + std::to_string(l.number) + ": '" + key + "' expects true or false");
}

using Setter = std::function<void(RunConfig&, const Line&)>;
using SectionTable = std::map<std::string, Setter>;

SectionTable system_keys() {
  SectionTable t;
  auto add = [&](const char* key, double SystemParams::*field) {
    t[key] = [key, field](RunConfig& c, const Line& l) { c.system.*field = to_double(l, key); };
  };
  add("rated_wind_power", &SystemParams::rated_wind_power);
  add("ess_capacity", &SystemParams::ess_capacity);
  add("ess_power_limit", &SystemParams::ess_power_limit);
  add("eta_in", &SystemParams::eta_in);
  add("eta_out", &SystemParams::eta_out);
  add("initial_energy", &SystemParams::initial_energy);
  add("soc_min", &SystemParams::soc_min);
  add("kappa_rm", &SystemParams::kappa_rm);
  add("r_rm_up", &SystemParams::r_rm_up);
  return t;
}

SectionTable scenario_keys() {
  SectionTable t;
  t["k_prices"] = [](RunConfig& c, const Line& l) { c.scenarios.k_prices = static_cast<int>(to_long(l, "k_prices")); };
  t["k_regulation"] = [](RunConfig& c, const Line& l) {
    c.scenarios.k_regulation = static_cast<int>(to_long(l, "k_regulation"));
  };
  t["seed"] = [](RunConfig& c, const Line& l) { c.scenarios.seed = static_cast<std::uint64_t>(to_long(l, "seed")); };
  t["snapshot_a"] = [](RunConfig& c, const Line& l) {
    c.scenarios.snapshot_a = static_cast<int>(to_long(l, "snapshot_a"));
  };
  return t;
}

SectionTable solver_keys() {
  SectionTable t;
  t["pivot_tolerance"] = [](RunConfig& c, const Line& l) { c.solver.pivot_tolerance = to_double(l, "pivot_tolerance"); };
  t["feasibility_tolerance"] = [](RunConfig& c, const Line& l) {
    c.solver.feasibility_tolerance = to_double(l, "feasibility_tolerance");
  };
  t["optimality_tolerance"] = [](RunConfig& c, const Line& l) {
    c.solver.optimality_tolerance = to_double(l, "optimality_tolerance");
  };
  t["max_iterations"] = [](RunConfig& c, const Line& l) { c.solver.max_iterations = to_long(l, "max_iterations"); };
  t["refactor_interval"] = [](RunConfig& c, const Line& l) {
    c.solver.refactor_interval = static_cast<int>(to_long(l, "refactor_interval"));
  };
  t["presolve"] = [](RunConfig& c, const Line& l) { c.solver.presolve = to_bool(l, "presolve"); };
  return t;
}

SectionTable data_keys() {
  SectionTable t;
  auto add = [&](const char* key, std::filesystem::path DataPaths::*field) {
    t[key] = [field](RunConfig& c, const Line& l) {
      if (!c.data) c.data.emplace();
      (*c.data).*field = l.value;
    };
  };
  add("prices", &DataPaths::prices);
  add("wind_forecasts", &DataPaths::wind_forecasts);
  add("wind_actual", &DataPaths::wind_actual);
  add("regulation", &DataPaths::regulation);
  return t;
}

SectionTable synthetic_keys() {
  SectionTable t;
  auto synth = [](RunConfig& c) -> SynthConfig& {
    if (!c.synthetic) c.synthetic.emplace();
    return *c.synthetic;
  };
  auto real = [&](const char* key, double SynthConfig::*field) {
    t[key] = [key, field, synth](RunConfig& c, const Line& l) { synth(c).*field = to_double(l, key); };
  };
  t["enabled"] = [synth](RunConfig& c, const Line& l) {
    if (to_bool(l, "enabled")) {
      synth(c);
    } else {
      c.synthetic.reset();
    }
  };
  t["seed"] = [synth](RunConfig& c, const Line& l) { synth(c).seed = static_cast<std::uint64_t>(to_long(l, "seed")); };
  t["n_days"] = [synth](RunConfig& c, const Line& l) { synth(c).n_days = static_cast<int>(to_long(l, "n_days")); };
  t["history_days"] = [synth](RunConfig& c, const Line& l) {
    synth(c).history_days = static_cast<int>(to_long(l, "history_days"));
  };
  real("price_level", &SynthConfig::price_level);
  real("price_volatility", &SynthConfig::price_volatility);
  real("idm_spread", &SynthConfig::idm_spread);
  real("bm_spread", &SynthConfig::bm_spread);
  real("reserve_price", &SynthConfig::reserve_price);
  real("rated_wind_power", &SynthConfig::rated_wind_power);
  real("wind_level", &SynthConfig::wind_level);
  real("wind_variability", &SynthConfig::wind_variability);
  real("wind_volatility", &SynthConfig::wind_volatility);
  real("regulation_up_rate", &SynthConfig::regulation_up_rate);
  real("regulation_dw_rate", &SynthConfig::regulation_dw_rate);
  real("regulation_volatility", &SynthConfig::regulation_volatility);
  t["forecast_decay"] = [synth](RunConfig& c, const Line& l) {
    std::stringstream ss(l.value);
    std::string item;
    int k = 0;
    while (std::getline(ss, item, ',')) {
      if (k >= kSnapshots) break;
      synth(c).forecast_decay[k++] = to_double({l.number, trim(item)}, "forecast_decay");
    }
    if (k != kSnapshots || std::getline(ss, item, ',')) {
      throw ConfigError("line " + std::to_string(l.number) + ": 'forecast_decay' expects 4 comma-separated values");
    }
  };
  return t;
}

SectionTable output_keys() {
  SectionTable t;
  t["dir"] = [](RunConfig& c, const Line& l) { c.output_dir = l.value; };
  return t;
}

void check_readable(const std::filesystem::path& p, const char* key) {
  if (p.empty()) throw ConfigError(std::string("[data] is missing '") + key + "'");
  std::ifstream in(p);
  if (!in) throw ConfigError(std::string("[data] ") + key + " file is not readable: " + p.string());
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
  const std::map<std::string, SectionTable> sections = {
      {"system", system_keys()}, {"scenarios", scenario_keys()}, {"solver", solver_keys()},
      {"data", data_keys()},     {"synthetic", synthetic_keys()}, {"output", output_keys()}};

  RunConfig config;
  std::set<std::string> seen_system;
  const SectionTable* current = nullptr;
  std::string section;
  std::stringstream in{std::string(text)};
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(number) + ": malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      const auto it = sections.find(section);
      if (it == sections.end()) {
        throw ConfigError("line " + std::to_string(number) + ": unknown section [" + section + "]");
      }
      current = &it->second;
      if (section == "synthetic" && !config.synthetic) config.synthetic.emplace();
      if (section == "data" && !config.data) config.data.emplace();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!current) throw ConfigError("line " + std::to_string(number) + ": key '" + key + "' outside any section");
    const auto setter = current->find(key);
    if (setter == current->end()) {
      throw ConfigError("line " + std::to_string(number) + ": unknown key '" + key + "' in [" + section + "]");
    }
    setter->second(config, Line{number, value});
    if (section == "system") seen_system.insert(key);
  }
  for (const auto& [key, _] : sections.at("system")) {
    if (!seen_system.count(key)) throw ConfigError("missing required key '" + key + "' in [system]");
  }
  try {
    validate(config.system);
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("[system] ") + e.what());
  }
  if (config.data.has_value() == config.synthetic.has_value()) {
    throw ConfigError("config must name exactly one data source: [data] files or a [synthetic] block");
  }
  if (config.synthetic) {
    try {
      validate(*config.synthetic);
    } catch (const ValidationError& e) {
      throw ConfigError(std::string("[synthetic] ") + e.what());
    }
  }
  if (config.data) {
    DataPaths& d = *config.data;
    for (auto* p : {&d.prices, &d.wind_forecasts, &d.wind_actual, &d.regulation}) {
      if (!p->empty() && p->is_relative() && !base_dir.empty()) *p = base_dir / *p;
    }
    check_readable(d.prices, "prices");
    check_readable(d.wind_forecasts, "wind_forecasts");
    check_readable(d.wind_actual, "wind_actual");
    check_readable(d.regulation, "regulation");
  }
  if (config.scenarios.k_prices < 1 || config.scenarios.k_regulation < 1) {
    throw ConfigError("[scenarios] cluster counts must be >= 1");
  }
  if (config.scenarios.snapshot_a < 1 || config.scenarios.snapshot_a > kSnapshots) {
    throw ConfigError("[scenarios] snapshot_a must be 1..4");
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::string_view default_config_text() {
  return R"(# Plant and market defaults with synthetic data.
[system]
rated_wind_power = 17.56
ess_capacity = 10
ess_power_limit = 5
eta_in = 0.9
eta_out = 0.9
initial_energy = 5
soc_min = 0.1
kappa_rm = 1.2
r_rm_up = 0.6

[scenarios]
k_prices = 10
k_regulation = 3
seed = 7
snapshot_a = 1

[solver]
pivot_tolerance = 1e-9
feasibility_tolerance = 1e-7
optimality_tolerance = 1e-9
refactor_interval = 100
presolve = true

[synthetic]
seed = 7
n_days = 60
history_days = 365

[output]
dir = out
)";
}

}  // namespace wspp::cli
