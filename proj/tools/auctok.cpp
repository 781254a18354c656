// Command-line front end: config-driven experiment runner with reproducible,
// provenance-stamped CSV/JSON artifacts.
//
// Exit codes: 0 success, 2 config error, 3 numeric failure,
//             4 identity-check failure in demo modes.

#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "auctok/config.hpp"
#include "auctok/errors.hpp"
#include "auctok/runner.hpp"
#include "auctok/version.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> paths;
  std::optional<std::string> out_dir;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "scenario config file (JSON)")
      ->required();
  cmd->add_option("--seed", flags.seed, "override mc.seed");
  cmd->add_option("--paths", flags.paths, "override mc.paths");
  cmd->add_option("--out", flags.out_dir, "override output directory");
  cmd->add_option("--format", flags.format, "artifact format")
      ->check(CLI::IsMember({"csv", "json"}));
}

auctok::ScenarioConfig load_with_overrides(const CommonFlags& flags) {
  auctok::ScenarioConfig cfg = auctok::load_config_file(flags.config_path);
  if (flags.seed) cfg.mc_seed = *flags.seed;
  if (flags.paths) cfg.mc_paths = *flags.paths;
  if (flags.out_dir) cfg.output_dir = *flags.out_dir;
  return cfg;
}

auctok::ArtifactFormat parse_format(const std::string& f) {
  return f == "json" ? auctok::ArtifactFormat::json
                     : auctok::ArtifactFormat::csv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"repeated-auction simulator: dollar, token and equity regimes"};
  app.set_version_flag("--version", AUCTOK_VERSION);
  app.require_subcommand(1);

  using Runner = std::function<auctok::RunResult(const auctok::ScenarioConfig&,
                                                 auctok::ArtifactFormat)>;
  std::map<std::string, std::pair<CommonFlags, Runner>> commands;

  const auto add_runner = [&](const std::string& name, const std::string& help,
                              Runner fn) {
    CLI::App* cmd = app.add_subcommand(name, help);
    auto& entry = commands[name];
    entry.second = std::move(fn);
    add_common(cmd, entry.first);
  };

  add_runner("solve", "solve the equilibrium market-cap recursion",
             [](const auctok::ScenarioConfig& c, auctok::ArtifactFormat f) {
               return auctok::run_solve(c, f);
             });
  add_runner("simulate", "write per-path traces for the configured regimes",
             [](const auctok::ScenarioConfig& c, auctok::ArtifactFormat f) {
               return auctok::run_simulate(c, f);
             });
  add_runner("compare-formats",
             "second-price vs first-price expected revenue",
             [](const auctok::ScenarioConfig& c, auctok::ArtifactFormat f) {
               return auctok::run_compare_formats(c, f);
             });
  add_runner("burn-demo",
             "check the burn-policy revenue identities path by path",
             [](const auctok::ScenarioConfig& c, auctok::ArtifactFormat f) {
               return auctok::run_burn_demo(c, f);
             });
  add_runner("corollary",
             "utility comparison: burn policy vs dollar savings rules",
             [](const auctok::ScenarioConfig& c, auctok::ArtifactFormat f) {
               return auctok::run_corollary(c, f);
             });
  add_runner("extension",
             "two-period financing comparison over the hiding-cost grid",
             [](const auctok::ScenarioConfig& c, auctok::ArtifactFormat f) {
               return auctok::run_extension(c, f);
             });

  // validate: report violations without running anything
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "list config violations");
  std::string validate_path;
  validate_cmd->add_option("--config", validate_path, "config file to check")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) {
      const auto violations = auctok::validate_config_file(validate_path);
      if (violations.empty()) {
        std::cout << "ok\n";
        return 0;
      }
      for (const auto& v : violations) std::cout << v << "\n";
      return 2;
    }
    for (auto& [name, entry] : commands) {
      CLI::App* cmd = app.get_subcommand(name);
      if (!cmd->parsed()) continue;
      const auctok::ScenarioConfig cfg = load_with_overrides(entry.first);
      const auctok::RunResult result =
          entry.second(cfg, parse_format(entry.first.format));
      for (const auto& a : result.artifacts) std::cout << "artifact: " << a << "\n";
      return result.exit_code;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const auctok::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
