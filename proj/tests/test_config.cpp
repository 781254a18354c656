#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "auctok/config.hpp"

using namespace auctok;

namespace {

json base_config() {
  return json{
      {"distribution", {{"kind", "uniform"}, {"low", 0.0}, {"high", 1.0}}},
      {"n", 2},
      {"T", 3},
      {"beta", 0.9},
      {"M1", 1.0},
      {"policy",
       {{"tau", {0.0, 0.0, 0.0}}, {"sigma", {-1.0, -1.0, -1.0}}}},
      {"mc", {{"paths", 1000}, {"seed", 42}, {"tolerance_sigmas", 3.0}}},
  };
}

bool mentions(const std::vector<std::string>& violations,
              const std::string& needle) {
  for (const auto& v : violations) {
    if (v.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("valid config parses cleanly") {
  ScenarioConfig cfg;
  const auto violations = parse_config(base_config(), cfg);
  CHECK(violations.empty());
  CHECK(cfg.bidders == 2);
  CHECK(cfg.horizon == 3);
  CHECK(cfg.policy.sigma == std::vector<double>{-1.0, -1.0, -1.0});
  CHECK(cfg.mc_paths == 1000);
  CHECK(cfg.mc_seed == 42);
  CHECK(cfg.regimes.size() == 3);  // defaults to all three
}

TEST_CASE("policy bounds and lengths") {
  auto j = base_config();
  j["policy"]["sigma"] = {-1.0, -1.5, 0.0};
  ScenarioConfig cfg;
  CHECK(mentions(parse_config(j, cfg), "sigma below -1"));

  j = base_config();
  j["policy"]["tau"] = {0.0, 0.0};
  ScenarioConfig cfg2;
  CHECK(mentions(parse_config(j, cfg2), "policy.tau: length must equal T"));
}

TEST_CASE("unknown keys fail fast") {
  auto j = base_config();
  j["sigma"] = {-1.0};  // top-level typo
  ScenarioConfig cfg;
  CHECK(mentions(parse_config(j, cfg), "unknown key 'sigma'"));

  j = base_config();
  j["policy"]["taus"] = {0.0, 0.0, 0.0};
  ScenarioConfig cfg2;
  CHECK(mentions(parse_config(j, cfg2), "unknown key 'taus'"));
}

TEST_CASE("distribution block") {
  auto j = base_config();
  j["distribution"] = {{"kind", "discrete"},
                       {"atoms", {{1.0, 0.5}, {2.0, 0.5}}}};
  ScenarioConfig cfg;
  CHECK(parse_config(j, cfg).empty());
  CHECK(cfg.dist.is_discrete());

  j["distribution"] = {{"kind", "discrete"}, {"atoms", {{1.0, 0.4}}}};
  ScenarioConfig cfg2;
  CHECK(mentions(parse_config(j, cfg2), "probabilities must sum to 1"));

  j["distribution"] = {{"kind", "triangular"}, {"low", 0.0}, {"high", 1.0}};
  ScenarioConfig cfg3;
  CHECK(mentions(parse_config(j, cfg3), "distribution.kind"));
}

TEST_CASE("utility block") {
  auto j = base_config();
  j["utility"] = {{"kind", "log"}, {"w1", 1.0}};
  ScenarioConfig cfg;
  CHECK(parse_config(j, cfg).empty());
  REQUIRE(cfg.utility.has_value());
  CHECK(cfg.utility->kind == UtilityKind::log_utility);
  CHECK(cfg.utility->initial_assets == 1.0);

  j["utility"] = {{"kind", "crra"}, {"gamma", 1.0}, {"w1", 1.0}};
  ScenarioConfig cfg2;
  CHECK(mentions(parse_config(j, cfg2), "utility.gamma"));
}

TEST_CASE("scalar bounds") {
  auto j = base_config();
  j["beta"] = 1.0;
  ScenarioConfig cfg;
  CHECK(mentions(parse_config(j, cfg), "beta"));

  j = base_config();
  j["n"] = 1;
  ScenarioConfig cfg2;
  CHECK(mentions(parse_config(j, cfg2), "n: must be an integer >= 2"));

  j = base_config();
  j["mc"]["paths"] = 0;
  ScenarioConfig cfg3;
  CHECK(mentions(parse_config(j, cfg3), "mc.paths"));
}

TEST_CASE("extension grid") {
  auto j = base_config();
  j["extension"] = {{"c_grid", {0.0, 0.5, 0.2}}};
  ScenarioConfig cfg;
  CHECK(mentions(parse_config(j, cfg), "must be sorted"));

  j["extension"] = {{"c_grid", {0.0, 0.5, 1.0}}};
  ScenarioConfig cfg2;
  CHECK(parse_config(j, cfg2).empty());
  CHECK(cfg2.c_grid == std::vector<double>{0.0, 0.5, 1.0});
}

TEST_CASE("file loading") {
  CHECK_THROWS_AS(load_config_file("/nonexistent/nope.json"),
                  std::invalid_argument);
}
