#pragma once

#include "wspp/cli/config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace wspp::cli {

/// Parsed command line: the subcommand plus overrides applied on top of the config.
struct CommandLine {
  std::string command;
  std::optional<std::filesystem::path> config;
  std::optional<int> days;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::string framework = "a";
  std::optional<double> tol;
  std::optional<int> day;
  std::optional<std::filesystem::path> commitments;
  std::optional<std::filesystem::path> scenarios;
};

inline constexpr const char* kCommands[] = {"synth", "scenarios", "solve-a", "solve-b", "evaluate", "compare"};

std::string usage();

/// Loads --config (or the built-in default) and applies the overrides:
/// --seed sets both the synthetic and clustering seeds, --days the synthetic
/// day count, --tol the feasibility tolerance and --out the output directory.
RunConfig resolve_config(const CommandLine& cl);

/// Runs one command. Returns 0 on success, 1 on a failed command and 2 on
/// an unknown command; diagnostics go to `err`.
int dispatch(const CommandLine& cl, std::ostream& out, std::ostream& err);

}  // namespace wspp::cli
