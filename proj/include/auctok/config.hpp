#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "auctok/accounting.hpp"
#include "auctok/errors.hpp"
#include "auctok/market.hpp"
#include "auctok/simulation.hpp"
#include "auctok/valuation.hpp"

namespace auctok {

using json = nlohmann::json;

// One experiment scenario as read from a config file. Unknown keys are
// rejected outright: a typo in a policy vector must fail loudly, not run a
// different experiment.
struct ScenarioConfig {
  ValuationDistribution dist = ValuationDistribution::uniform(0.0, 1.0);
  int bidders = 2;
  int horizon = 1;
  double beta = 0.9;
  double initial_stock = 1.0;
  MonetaryPolicy policy;
  std::optional<UtilityModel> utility;
  std::uint64_t mc_paths = 100000;
  std::uint64_t mc_seed = 1;
  double tolerance_sigmas = 3.0;
  std::vector<Regime> regimes{Regime::tokens, Regime::dollars, Regime::equity};
  std::vector<double> c_grid{0.0, 0.5, 1.0, 2.0, 5.0};
  std::string output_dir = "out";
  std::string output_prefix;

  json raw;  // canonical source, used for the artifact hash

  SimulationConfig simulation() const {
    return {dist, bidders, horizon, beta, policy, initial_stock};
  }
};

namespace detail {

inline void check_keys(const json& obj, const std::string& where,
                       const std::vector<std::string>& allowed,
                       std::vector<std::string>& violations) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const auto& a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) violations.push_back(where + ": unknown key '" + key + "'");
  }
}

inline bool get_number(const json& obj, const std::string& where,
                       const std::string& key, double& out,
                       std::vector<std::string>& violations,
                       bool required = true) {
  if (!obj.contains(key)) {
    if (required) violations.push_back(where + "." + key + ": missing");
    return false;
  }
  if (!obj[key].is_number()) {
    violations.push_back(where + "." + key + ": not a number");
    return false;
  }
  out = obj[key].get<double>();
  return true;
}

}  // namespace detail

// Parse + validate. Returns the violation list; the config is runnable iff
// the list is empty. I/O failures throw (unreadable file is not a config
// defect).
inline std::vector<std::string> parse_config(const json& root,
                                             ScenarioConfig& cfg) {
  std::vector<std::string> v;
  if (!root.is_object()) {
    v.push_back("config: top level must be an object");
    return v;
  }
  detail::check_keys(root, "config",
                     {"distribution", "n", "T", "beta", "M1", "policy",
                      "utility", "mc", "regimes", "extension", "output"},
                     v);
  cfg.raw = root;

  // ---- distribution ----
  if (!root.contains("distribution") || !root["distribution"].is_object()) {
    v.push_back("distribution: missing or not an object");
  } else {
    const json& d = root["distribution"];
    detail::check_keys(d, "distribution", {"kind", "low", "high", "atoms"}, v);
    const std::string kind = d.value("kind", "");
    if (kind == "uniform") {
      double lo = 0.0, hi = 0.0;
      const bool ok_lo = detail::get_number(d, "distribution", "low", lo, v);
      const bool ok_hi = detail::get_number(d, "distribution", "high", hi, v);
      if (d.contains("atoms"))
        v.push_back("distribution.atoms: not allowed for uniform");
      if (ok_lo && ok_hi) {
        try {
          cfg.dist = ValuationDistribution::uniform(lo, hi);
        } catch (const std::invalid_argument& e) {
          v.push_back(std::string("distribution: ") + e.what());
        }
      }
    } else if (kind == "discrete") {
      if (!d.contains("atoms") || !d["atoms"].is_array()) {
        v.push_back("distribution.atoms: missing or not an array");
      } else {
        std::vector<Atom> atoms;
        bool ok = true;
        for (const auto& a : d["atoms"]) {
          if (!a.is_array() || a.size() != 2 || !a[0].is_number() ||
              !a[1].is_number()) {
            v.push_back("distribution.atoms: entries must be [value, prob]");
            ok = false;
            break;
          }
          atoms.push_back({a[0].get<double>(), a[1].get<double>()});
        }
        if (ok) {
          try {
            cfg.dist = ValuationDistribution::discrete(std::move(atoms));
          } catch (const std::invalid_argument& e) {
            v.push_back(std::string("distribution: ") + e.what());
          }
        }
      }
    } else {
      v.push_back("distribution.kind: must be 'uniform' or 'discrete'");
    }
  }

  // ---- scalars ----
  double num = 0.0;
  if (detail::get_number(root, "config", "n", num, v)) {
    if (num != std::floor(num) || num < 2)
      v.push_back("n: must be an integer >= 2");
    else
      cfg.bidders = static_cast<int>(num);
  }
  if (detail::get_number(root, "config", "T", num, v)) {
    if (num != std::floor(num) || num < 1)
      v.push_back("T: must be an integer >= 1");
    else
      cfg.horizon = static_cast<int>(num);
  }
  if (detail::get_number(root, "config", "beta", num, v)) {
    if (num <= 0.0 || num >= 1.0)
      v.push_back("beta: must be in (0,1)");
    else
      cfg.beta = num;
  }
  if (root.contains("M1") &&
      detail::get_number(root, "config", "M1", num, v)) {
    if (num <= 0.0)
      v.push_back("M1: must be positive");
    else
      cfg.initial_stock = num;
  }

  // ---- policy ----
  if (!root.contains("policy") || !root["policy"].is_object()) {
    v.push_back("policy: missing or not an object");
  } else {
    const json& p = root["policy"];
    detail::check_keys(p, "policy", {"tau", "sigma"}, v);
    const auto read_vec = [&](const char* name, std::vector<double>& out) {
      if (!p.contains(name) || !p[name].is_array()) {
        v.push_back(std::string("policy.") + name + ": missing or not an array");
        return;
      }
      std::size_t i = 0;
      for (const auto& x : p[name]) {
        if (!x.is_number()) {
          v.push_back(std::string("policy.") + name + "[" + std::to_string(i) +
                      "]: not a number");
          return;
        }
        const double val = x.get<double>();
        if (val < -1.0)
          v.push_back(std::string("policy.") + name + "[" + std::to_string(i) +
                      "]: " + name + " below -1");
        out.push_back(val);
        ++i;
      }
    };
    read_vec("tau", cfg.policy.tau);
    read_vec("sigma", cfg.policy.sigma);
    if (cfg.policy.tau.size() != static_cast<std::size_t>(cfg.horizon))
      v.push_back("policy.tau: length must equal T");
    if (cfg.policy.sigma.size() != static_cast<std::size_t>(cfg.horizon))
      v.push_back("policy.sigma: length must equal T");
  }

  // ---- utility ----
  if (root.contains("utility")) {
    if (!root["utility"].is_object()) {
      v.push_back("utility: not an object");
    } else {
      const json& u = root["utility"];
      detail::check_keys(u, "utility", {"kind", "w1", "gamma"}, v);
      UtilityModel model;
      model.beta = cfg.beta;
      const std::string kind = u.value("kind", "");
      if (kind == "risk-neutral") {
        model.kind = UtilityKind::risk_neutral;
      } else if (kind == "log") {
        model.kind = UtilityKind::log_utility;
      } else if (kind == "crra") {
        model.kind = UtilityKind::crra;
        if (detail::get_number(u, "utility", "gamma", num, v)) {
          if (num <= 0.0 || num == 1.0)
            v.push_back("utility.gamma: must be > 0 and != 1");
          else
            model.gamma = num;
        }
      } else {
        v.push_back("utility.kind: must be 'risk-neutral', 'log' or 'crra'");
      }
      if (detail::get_number(u, "utility", "w1", num, v, false)) {
        if (num < 0.0)
          v.push_back("utility.w1: must be >= 0");
        else
          model.initial_assets = num;
      }
      cfg.utility = model;
    }
  }

  // ---- mc ----
  if (!root.contains("mc") || !root["mc"].is_object()) {
    v.push_back("mc: missing or not an object");
  } else {
    const json& m = root["mc"];
    detail::check_keys(m, "mc", {"paths", "seed", "tolerance_sigmas"}, v);
    if (detail::get_number(m, "mc", "paths", num, v)) {
      if (num < 1 || num != std::floor(num))
        v.push_back("mc.paths: must be an integer >= 1");
      else
        cfg.mc_paths = static_cast<std::uint64_t>(num);
    }
    if (detail::get_number(m, "mc", "seed", num, v)) {
      if (num < 0 || num != std::floor(num))
        v.push_back("mc.seed: must be a nonnegative integer");
      else
        cfg.mc_seed = static_cast<std::uint64_t>(num);
    }
    if (detail::get_number(m, "mc", "tolerance_sigmas", num, v, false)) {
      if (num <= 0.0)
        v.push_back("mc.tolerance_sigmas: must be positive");
      else
        cfg.tolerance_sigmas = num;
    }
  }

  // ---- regimes ----
  if (root.contains("regimes")) {
    if (!root["regimes"].is_array()) {
      v.push_back("regimes: not an array");
    } else {
      cfg.regimes.clear();
      for (const auto& r : root["regimes"]) {
        const std::string name = r.is_string() ? r.get<std::string>() : "";
        if (name == "tokens")
          cfg.regimes.push_back(Regime::tokens);
        else if (name == "dollars")
          cfg.regimes.push_back(Regime::dollars);
        else if (name == "equity")
          cfg.regimes.push_back(Regime::equity);
        else
          v.push_back("regimes: must be 'tokens', 'dollars' or 'equity'");
      }
      if (cfg.regimes.empty()) v.push_back("regimes: empty list");
    }
  }

  // ---- extension ----
  if (root.contains("extension")) {
    if (!root["extension"].is_object()) {
      v.push_back("extension: not an object");
    } else {
      const json& e = root["extension"];
      detail::check_keys(e, "extension", {"c_grid"}, v);
      if (e.contains("c_grid")) {
        if (!e["c_grid"].is_array()) {
          v.push_back("extension.c_grid: not an array");
        } else {
          cfg.c_grid.clear();
          double prev = -1.0;
          for (const auto& x : e["c_grid"]) {
            if (!x.is_number()) {
              v.push_back("extension.c_grid: entries must be numbers");
              break;
            }
            const double c = x.get<double>();
            if (c < 0.0) v.push_back("extension.c_grid: c must be >= 0");
            if (c < prev) v.push_back("extension.c_grid: must be sorted");
            prev = c;
            cfg.c_grid.push_back(c);
          }
          if (cfg.c_grid.empty()) v.push_back("extension.c_grid: empty");
        }
      }
    }
  }

  // ---- output ----
  if (root.contains("output")) {
    if (!root["output"].is_object()) {
      v.push_back("output: not an object");
    } else {
      const json& o = root["output"];
      detail::check_keys(o, "output", {"dir", "prefix"}, v);
      if (o.contains("dir")) {
        if (!o["dir"].is_string())
          v.push_back("output.dir: not a string");
        else
          cfg.output_dir = o["dir"].get<std::string>();
      }
      if (o.contains("prefix")) {
        if (!o["prefix"].is_string())
          v.push_back("output.prefix: not a string");
        else
          cfg.output_prefix = o["prefix"].get<std::string>();
      }
    }
  }

  return v;
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_domain("cannot open config file: " + path);
  json root;
  try {
    in >> root;
  } catch (const json::parse_error& e) {
    fail_domain("config parse error in " + path + ": " + e.what());
  }
  return root;
}

// The validate operation: empty list iff the file holds a runnable config.
inline std::vector<std::string> validate_config_file(const std::string& path) {
  ScenarioConfig cfg;
  return parse_config(load_json_file(path), cfg);
}

inline ScenarioConfig load_config_file(const std::string& path) {
  ScenarioConfig cfg;
  const auto violations = parse_config(load_json_file(path), cfg);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "invalid config " << path << ":";
    for (const auto& s : violations) msg << "\n  - " << s;
    fail_domain(msg.str());
  }
  return cfg;
}

}  // namespace auctok
