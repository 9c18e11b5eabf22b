#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dyon/run.hpp"
#include "dyon/scenario.hpp"
#include "dyon/version.hpp"

namespace {

int cmd_run(const std::string& scenario_path, const dyon::RunOptions& options) {
  std::ifstream in(scenario_path);
  if (!in) {
    std::cerr << "error: cannot read scenario file '" << scenario_path << "'\n";
    return 1;
  }
  std::ostringstream text;
  text << in.rdbuf();

  const auto parsed = dyon::parse_scenario(text.str());
  if (!parsed.scenario) {
    std::cerr << "scenario validation failed (" << parsed.errors.size() << " error"
              << (parsed.errors.size() == 1 ? "" : "s") << "):\n";
    for (const auto& e : parsed.errors) std::cerr << "  - " << e << "\n";
    return 1;
  }

  const auto result = dyon::run(*parsed.scenario, options);
  if (result.exit_code != 0) {
    std::cerr << "error: " << result.message << "\n";
    return result.exit_code;
  }
  if (result.summary) std::cout << result.summary->to_text();
  return 0;
}

int cmd_check_identities() {
  dyon::Scenario s;
  s.mode = dyon::RunMode::identity_suite;
  s.summary_path = "identities.txt";
  const auto result = dyon::run(s, {});
  std::cout << result.message << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-potential electrodynamics with magnetic charges"};
  app.require_subcommand(1);

  std::string scenario_path;
  dyon::RunOptions options;
  std::uint64_t seed = 0;
  int threads = 0;

  auto* run_cmd = app.add_subcommand("run", "run a scenario file");
  run_cmd->add_option("scenario", scenario_path, "scenario file (key = value schema)")
      ->required();
  auto* seed_opt = run_cmd->add_option("--seed", seed, "override the scenario seed");
  auto* threads_opt = run_cmd->add_option("--threads", threads, "override the worker count");
  run_cmd->add_option("--output-dir", options.output_dir, "directory for output files");

  auto* check_cmd = app.add_subcommand("check-identities",
                                       "run the exhaustive tensor identity suite");
  auto* version_cmd = app.add_subcommand("version", "print the library version");

  CLI11_PARSE(app, argc, argv);

  if (version_cmd->parsed()) {
    std::cout << "dyon " << dyon::kVersion << "\n";
    return 0;
  }
  if (check_cmd->parsed()) return cmd_check_identities();

  if (seed_opt->count() > 0) options.seed = seed;
  if (threads_opt->count() > 0) options.threads = threads;
  return cmd_run(scenario_path, options);
}
