#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "auctok/accounting.hpp"
#include "auctok/artifacts.hpp"
#include "auctok/auction.hpp"
#include "auctok/config.hpp"
#include "auctok/equilibrium.hpp"
#include "auctok/extension.hpp"
#include "auctok/simulation.hpp"

namespace auctok {

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> artifacts;
};

namespace detail {

inline std::filesystem::path artifact_path(const ScenarioConfig& cfg,
                                           const std::string& name,
                                           ArtifactFormat format) {
  std::string file = cfg.output_prefix.empty() ? name : cfg.output_prefix + "_" + name;
  file += artifact_extension(format);
  return std::filesystem::path(cfg.output_dir) / file;
}

inline ArtifactMeta meta_for(const ScenarioConfig& cfg) {
  return {config_hash(cfg.raw), cfg.mc_seed};
}

}  // namespace detail

// solve: backward-induct the expected market caps and report them.
inline RunResult run_solve(const ScenarioConfig& cfg, ArtifactFormat format,
                           std::ostream& log = std::cout) {
  const EquilibriumProfile profile =
      solve_backward(cfg.dist, cfg.bidders, cfg.horizon, cfg.beta, cfg.policy);
  ArtifactWriter w(detail::artifact_path(cfg, "solve", format), format,
                   detail::meta_for(cfg), {"t", "P_t", "speculation_prob"});
  log << "t  P_t  speculation_prob\n";
  for (int t = 1; t <= cfg.horizon; ++t) {
    w.row({static_cast<std::int64_t>(t), profile.market_caps[t - 1],
           profile.speculation_prob[t - 1]});
    log << t << "  " << profile.market_caps[t - 1] << "  "
        << profile.speculation_prob[t - 1] << "\n";
  }
  w.close();
  return {0, {w.path()}};
}

// simulate: one trace file per requested regime, common random numbers.
inline RunResult run_simulate(const ScenarioConfig& cfg, ArtifactFormat format,
                              std::ostream& log = std::cout) {
  RunResult result;
  const SimulationConfig sim = cfg.simulation();
  EquilibriumProfile profile;
  bool solved = false;
  for (Regime regime : cfg.regimes) {
    if (regime == Regime::tokens && !solved) {
      profile = solve_backward(cfg.dist, cfg.bidders, cfg.horizon, cfg.beta,
                               cfg.policy);
      solved = true;
    }
    ArtifactWriter w(
        detail::artifact_path(cfg, std::string("trace_") + regime_name(regime),
                              format),
        format, detail::meta_for(cfg),
        {"path_id", "t", "B", "p", "S", "M", "A", "revenue",
         "bidder_payoff_mean"});
    simulate_paths(regime, sim, solved ? &profile : nullptr, cfg.mc_paths,
                   cfg.mc_seed, [&](const SimulationTrace& trace) {
                     for (std::size_t i = 0; i < trace.periods.size(); ++i) {
                       const PeriodRecord& rec = trace.periods[i];
                       w.row({trace.path_id,
                              static_cast<std::int64_t>(i + 1),
                              rec.total_payment, rec.price,
                              rec.speculative_demand, rec.token_stock,
                              rec.auctioneer_tokens, rec.revenue,
                              rec.bidder_payoff_mean()});
                     }
                   });
    w.close();
    log << "wrote " << w.path() << " (" << cfg.mc_paths << " paths)\n";
    result.artifacts.push_back(w.path());
  }
  return result;
}

// compare-formats: second-price vs first-price expected revenue.
inline RunResult run_compare_formats(const ScenarioConfig& cfg,
                                     ArtifactFormat format,
                                     std::ostream& log = std::cout) {
  require(cfg.dist.is_continuous(),
          "compare-formats: first-price bids need a continuous distribution");
  const double k = expected_second_highest(cfg.dist, cfg.bidders);
  ArtifactWriter w(detail::artifact_path(cfg, "formats", format), format,
                   detail::meta_for(cfg),
                   {"format", "paths", "revenue_mean", "revenue_se", "k"});
  const auto run_one = [&](const char* name, const AuctionFormat& f,
                           std::uint64_t stream) {
    Rng rng(cfg.mc_seed, stream_id(StreamKind::generic, stream));
    const McEstimate est =
        expected_revenue(f, cfg.dist, cfg.bidders, cfg.mc_paths, rng);
    w.row({std::string(name), est.paths, est.mean, est.se, k});
    log << name << ": " << est.mean << " +- " << est.se << " (k=" << k << ")\n";
    return est;
  };
  run_one("second-price", AuctionFormat::second_price(cfg.dist.lower()), 0);
  run_one("first-price", AuctionFormat::first_price(cfg.dist), 1);
  w.close();
  return {0, {w.path()}};
}

// burn-demo: verify the burn-policy revenue identities path by path.
inline RunResult run_burn_demo(const ScenarioConfig& cfg, ArtifactFormat format,
                               std::ostream& log = std::cout) {
  for (double s : cfg.policy.sigma) {
    require(s == -1.0, "burn-demo: policy.sigma must be -1 in every period");
  }
  const EquilibriumProfile profile =
      solve_backward(cfg.dist, cfg.bidders, cfg.horizon, cfg.beta, cfg.policy);
  const double k = expected_second_highest(cfg.dist, cfg.bidders);
  const double pledge =
      cfg.beta * annuity_factor(cfg.beta, cfg.horizon - 1) * k;

  double worst_tail = 0.0;   // max |r_t|, t >= 2
  double worst_front = 0.0;  // max |r_1 - (B_1 + pledge)|
  MeanAccumulator r1_acc;
  simulate_paths(Regime::tokens, cfg.simulation(), &profile, cfg.mc_paths,
                 cfg.mc_seed, [&](const SimulationTrace& trace) {
                   const PeriodRecord& first = trace.periods.front();
                   r1_acc.add(first.revenue);
                   worst_front = std::max(
                       worst_front, std::abs(first.revenue -
                                             (first.total_payment + pledge)));
                   for (std::size_t t = 1; t < trace.periods.size(); ++t) {
                     worst_tail = std::max(
                         worst_tail, std::abs(trace.periods[t].revenue));
                   }
                 });

  const double expected_r1 = annuity_factor(cfg.beta, cfg.horizon) * k;
  const double mean_band = cfg.tolerance_sigmas * r1_acc.se();
  const bool tail_ok = worst_tail == 0.0;
  const bool front_ok = worst_front <= 1e-9;
  const bool mean_ok = std::abs(r1_acc.mean() - expected_r1) <= mean_band;

  ArtifactWriter w(detail::artifact_path(cfg, "burn_demo", format), format,
                   detail::meta_for(cfg),
                   {"check", "expected", "observed", "tolerance", "pass"});
  w.row({std::string("revenue_after_period_1"), 0.0, worst_tail, 0.0,
         std::string(tail_ok ? "yes" : "no")});
  w.row({std::string("period_1_identity_max_abs_err"), 0.0, worst_front, 1e-9,
         std::string(front_ok ? "yes" : "no")});
  w.row({std::string("mean_period_1_revenue"), expected_r1, r1_acc.mean(),
         mean_band, std::string(mean_ok ? "yes" : "no")});
  w.close();

  log << "burn-demo: tail=" << (tail_ok ? "pass" : "FAIL")
      << " identity=" << (front_ok ? "pass" : "FAIL")
      << " mean r1=" << r1_acc.mean() << " (expected " << expected_r1 << ") "
      << (mean_ok ? "pass" : "FAIL") << "\n";
  return {(tail_ok && front_ok && mean_ok) ? 0 : 4, {w.path()}};
}

// corollary: utility of the burn policy vs the smoothing bound vs feasible
// dollar-auction savings rules.
inline RunResult run_corollary(const ScenarioConfig& cfg, ArtifactFormat format,
                               std::ostream& log = std::cout) {
  require(cfg.utility.has_value(), "corollary: config needs a utility block");
  UtilityModel model = *cfg.utility;
  model.beta = cfg.beta;
  const SmoothingComparison rep = corollary_comparison(
      cfg.dist, cfg.bidders, cfg.horizon, model, cfg.mc_paths, cfg.mc_seed);

  ArtifactWriter w(detail::artifact_path(cfg, "corollary", format), format,
                   detail::meta_for(cfg),
                   {"quantity", "utility", "se", "margin", "margin_se"});
  w.row({std::string("token_burn"), rep.token_burn.mean, rep.token_burn.se,
         0.0, 0.0});
  w.row({std::string("smoothing_bound"), rep.upper_bound.mean,
         rep.upper_bound.se, 0.0, 0.0});
  bool ok = true;
  for (const RuleEstimate& rule : rep.dollar_rules) {
    w.row({std::string("dollar_") + savings_rule_name(rule.rule),
           rule.utility.mean, rule.utility.se, rule.margin.mean,
           rule.margin.se});
    const double band = cfg.tolerance_sigmas * rule.margin.se;
    if (model.strictly_concave()) {
      ok = ok && rule.margin.mean > band;
    } else {
      ok = ok && std::abs(rule.margin.mean) <= band;
    }
    log << "token_burn - dollar(" << savings_rule_name(rule.rule)
        << ") = " << rule.margin.mean << " +- " << rule.margin.se << "\n";
  }
  w.close();
  return {ok ? 0 : 4, {w.path()}};
}

// extension: hiding-cost sweep of the two-period financing comparison.
inline RunResult run_extension(const ScenarioConfig& cfg, ArtifactFormat format,
                               std::ostream& log = std::cout) {
  require(cfg.horizon == 2, "extension: requires T = 2");
  TwoPeriodConfig two;
  two.beta = cfg.beta;
  two.dist = cfg.dist;
  two.bidders = cfg.bidders;
  const RegimeComparison rep = compare_regimes(two, cfg.c_grid);

  ArtifactWriter w(detail::artifact_path(cfg, "extension", format), format,
                   detail::meta_for(cfg),
                   {"c", "dollar_utility", "token_utility", "sigma_star",
                    "expected_alpha"});
  for (const ComparisonRow& row : rep.rows) {
    w.row({row.c, row.dollar_utility, row.token_utility, rep.sigma_star,
           rep.expected_alpha});
  }
  w.close();

  log << "sigma* = " << rep.sigma_star << ", E[alpha] = " << rep.expected_alpha
      << ", token utility = " << rep.token_utility << "\n";
  if (rep.crossing_c) {
    log << "dollars preferred from c = " << *rep.crossing_c << "\n";
  } else {
    log << "tokens preferred on the whole grid\n";
  }
  return {0, {w.path()}};
}

}  // namespace auctok
