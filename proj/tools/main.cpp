#include "wspp/cli/dispatch.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using wspp::cli::CommandLine;

  if (argc < 2 || argv[1][0] == '-') {
    std::cerr << wspp::cli::usage();
    return argc < 2 ? 2 : (std::string(argv[1]) == "--help" || std::string(argv[1]) == "-h" ? 0 : 2);
  }

  CommandLine cl;
  cl.command = argv[1];

  CLI::App app{"Wind and storage market bidding"};
  app.name("wspp " + cl.command);
  std::string config, out, commitments, scenarios;
  int days = 0, day = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  app.add_option("--config", config, "configuration file");
  auto* days_opt = app.add_option("--days", days, "number of evaluation days");
  auto* seed_opt = app.add_option("--seed", seed, "seed for synthetic data and clustering");
  app.add_option("--out", out, "output directory");
  app.add_option("--framework", cl.framework, "a or b")->check(CLI::IsMember({"a", "b"}));
  auto* tol_opt = app.add_option("--tol", tol, "solver feasibility tolerance");
  auto* day_opt = app.add_option("--day", day, "evaluation day number");
  app.add_option("--commitments", commitments, "commitments.csv to evaluate");
  app.add_option("--scenarios", scenarios, "scenarios.csv for solve-a");

  try {
    app.parse(argc - 1, argv + 1);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (!config.empty()) cl.config = config;
  if (!out.empty()) cl.out = out;
  if (!commitments.empty()) cl.commitments = commitments;
  if (!scenarios.empty()) cl.scenarios = scenarios;
  if (*days_opt) cl.days = days;
  if (*seed_opt) cl.seed = seed;
  if (*tol_opt) cl.tol = tol;
  if (*day_opt) cl.day = day;

  return wspp::cli::dispatch(cl, std::cout, std::cerr);
}
