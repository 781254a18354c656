#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "auctok/errors.hpp"
#include "auctok/quadrature.hpp"
#include "auctok/rng.hpp"
#include "auctok/valuation.hpp"

namespace auctok {

enum class UtilityKind { risk_neutral, log_utility, crra };

// Concave per-period preferences with the standing assumption beta*R = 1:
// the gross risk-free return is pinned to 1/beta.
struct UtilityModel {
  UtilityKind kind = UtilityKind::risk_neutral;
  double gamma = 0.0;         // crra only; gamma > 0, gamma != 1
  double initial_assets = 0;  // w_1 >= 0
  double beta = 0.9;

  double gross_return() const { return 1.0 / beta; }
  bool strictly_concave() const { return kind != UtilityKind::risk_neutral; }

  void validate() const {
    require(beta > 0.0 && beta < 1.0, "UtilityModel: beta must be in (0,1)");
    require(initial_assets >= 0.0, "UtilityModel: initial assets must be >= 0");
    if (kind == UtilityKind::crra) {
      require(gamma > 0.0 && gamma != 1.0,
              "UtilityModel: crra needs gamma > 0, gamma != 1");
    }
  }

  double value(double c) const {
    switch (kind) {
      case UtilityKind::risk_neutral:
        return c;
      case UtilityKind::log_utility:
        require(c > 0.0, "UtilityModel: log utility needs positive consumption");
        return std::log(c);
      case UtilityKind::crra:
        require(c > 0.0, "UtilityModel: crra utility needs positive consumption");
        return std::pow(c, 1.0 - gamma) / (1.0 - gamma);
    }
    return 0.0;
  }

  double marginal(double c) const {
    switch (kind) {
      case UtilityKind::risk_neutral:
        return 1.0;
      case UtilityKind::log_utility:
        return 1.0 / c;
      case UtilityKind::crra:
        return std::pow(c, -gamma);
    }
    return 0.0;
  }
};

inline double pdv(std::span<const double> stream, double beta) {
  double acc = 0.0;
  double disc = 1.0;
  for (double x : stream) {
    acc += disc * x;
    disc *= beta;
  }
  return acc;
}

inline double annuity_factor(double beta, int periods) {
  return (1.0 - std::pow(beta, periods)) / (1.0 - beta);
}

// Continuation value of the token auctioneer at the start of period t:
// the dollar-auction continuation revenue minus the value of tokens
// currently outstanding with bidders.
inline double continuation_revenue_value(double k, int T, double beta, int t, double p_e_t,
                          double M_t, double A_t) {
  require(t >= 1 && t <= T, "continuation_revenue_value: period out of range");
  require(M_t >= A_t && A_t >= 0.0, "continuation_revenue_value: need M_t >= A_t >= 0");
  return annuity_factor(beta, T - t + 1) * k - p_e_t * (M_t - A_t);
}

struct SmoothingPlan {
  std::vector<double> assets;       // w_2 .. w_T (w_1 is in the model)
  std::vector<double> consumption;  // c_1 .. c_T
  double utility = 0.0;
};

// Deterministic lifetime consumption problem with borrowing allowed and
// w_{T+1} = 0: max sum beta^{t-1} U(c_t) s.t. c_t = y_t + w_t - w_{t+1}/R.
//
// Solved numerically on the Euler structure (with beta*R = 1 the Euler
// path is flat, so the program reduces to finding the budget-clearing
// constant); tests check the Euler residuals and the closed form.
inline SmoothingPlan optimal_riskfree_savings(std::span<const double> income,
                                              const UtilityModel& model) {
  model.validate();
  require(!income.empty(), "optimal_riskfree_savings: empty income stream");
  const int T = static_cast<int>(income.size());
  const double R = model.gross_return();
  const double beta = model.beta;
  const double wealth = model.initial_assets + pdv(income, beta);
  const double annuity = annuity_factor(beta, T);

  SmoothingPlan plan;
  plan.consumption.assign(income.begin(), income.end());

  if (model.kind == UtilityKind::risk_neutral) {
    // any feasible plan attains the same PDV; annuitize the assets
    const double extra = model.initial_assets / annuity;
    for (double& c : plan.consumption) c += extra;
  } else {
    require(wealth > 0.0,
            "optimal_riskfree_savings: nonpositive lifetime wealth");
    // bisection on the constant consumption level against the budget
    const auto budget_gap = [&](double c) { return c * annuity - wealth; };
    double hi = wealth / annuity * 2.0 + 1.0;
    const double c_bar = bisect(budget_gap, 0.0, hi, 1e-15 * std::max(1.0, hi));
    plan.consumption.assign(static_cast<std::size_t>(T), c_bar);
  }

  plan.assets.resize(static_cast<std::size_t>(T > 0 ? T - 1 : 0));
  double w = model.initial_assets;
  double disc = 1.0;
  plan.utility = 0.0;
  for (int t = 1; t <= T; ++t) {
    const double c = plan.consumption[static_cast<std::size_t>(t - 1)];
    const double w_next = R * (w + income[static_cast<std::size_t>(t - 1)] - c);
    if (t < T) plan.assets[static_cast<std::size_t>(t - 1)] = w_next;
    plan.utility += disc * model.value(c);
    disc *= beta;
    w = w_next;
  }
  return plan;
}

// Right-hand side of the smoothing bound: expectation over realized
// period-1 payments of the utility from the relaxed program in which all
// later income is the certain mean payment k and borrowing is allowed.
inline McEstimate smoothing_upper_bound(const ValuationDistribution& dist, int n,
                                     int T, const UtilityModel& model,
                                     std::uint64_t paths, std::uint64_t seed) {
  model.validate();
  require(T >= 1, "smoothing_upper_bound: horizon >= 1");
  const PaymentLaw law(dist, n);
  const double k = law.mean();
  Rng rng(seed, stream_id(StreamKind::accounting, 0));
  MeanAccumulator acc;
  std::vector<double> income(static_cast<std::size_t>(T), k);
  for (std::uint64_t p = 0; p < paths; ++p) {
    income[0] = law.sample(rng);
    acc.add(optimal_riskfree_savings(income, model).utility);
  }
  return {acc.mean(), acc.se(), paths};
}

enum class SavingsRule { consume_income, smooth_to_expected };

inline const char* savings_rule_name(SavingsRule r) {
  return r == SavingsRule::consume_income ? "consume-income"
                                          : "smooth-to-expected";
}

namespace detail {

// Feasible (no-borrowing) heuristic policies for the risky dollar-income
// stream. Both keep w_{t+1} >= 0 and exhaust wealth by T.
inline double rule_utility(SavingsRule rule, std::span<const double> income,
                           double k, const UtilityModel& model) {
  const int T = static_cast<int>(income.size());
  const double R = model.gross_return();
  const double beta = model.beta;
  double w = model.initial_assets;
  double utility = 0.0;
  double disc = 1.0;
  for (int t = 1; t <= T; ++t) {
    const double y = income[static_cast<std::size_t>(t - 1)];
    double c = 0.0;
    if (t == T) {
      c = y + w;  // terminal period: consume everything
      w = 0.0;
    } else if (rule == SavingsRule::consume_income) {
      // hold assets flat; consume income plus the interest equivalent
      c = y + w * (1.0 - beta);
    } else {
      // plan a flat path pretending future income equals its mean k,
      // truncated at the borrowing limit
      const double ann = annuity_factor(beta, T - t + 1);
      const double target = (w + y + (ann - 1.0) * k) / ann;
      const double w_next = std::max(0.0, R * (w + y - target));
      c = w + y - w_next / R;
      w = w_next;
    }
    if (model.strictly_concave() && c <= 0.0) {
      fail_domain(
          "savings rule hit nonpositive consumption; raise initial assets");
    }
    utility += disc * model.value(c);
    disc *= beta;
  }
  return utility;
}

}  // namespace detail

struct RuleEstimate {
  SavingsRule rule;
  McEstimate utility;
  McEstimate margin;  // token-burn utility minus this rule, paired paths
};

struct SmoothingComparison {
  McEstimate token_burn;       // front-loaded revenue, then optimal smoothing
  McEstimate upper_bound;      // the relaxed-program bound
  std::vector<RuleEstimate> dollar_rules;
  double k = 0.0;
};

// Utility comparison across financing regimes: the burn-policy token
// auction (which attains the smoothing bound by construction) against the
// dollar auction evaluated under feasible savings heuristics. Uses common
// payment draws so the margins are paired estimates.
inline SmoothingComparison corollary_comparison(
    const ValuationDistribution& dist, int n, int T, const UtilityModel& model,
    std::uint64_t paths, std::uint64_t seed) {
  model.validate();
  require(T >= 1, "corollary_comparison: horizon >= 1");
  const PaymentLaw law(dist, n);
  const double k = law.mean();
  const double pledge = model.beta * annuity_factor(model.beta, T - 1) * k;

  SmoothingComparison report;
  report.k = k;
  const std::vector<SavingsRule> rules{SavingsRule::consume_income,
                                       SavingsRule::smooth_to_expected};

  MeanAccumulator burn_acc, bound_acc;
  std::vector<MeanAccumulator> rule_acc(rules.size());
  std::vector<MeanAccumulator> margin_acc(rules.size());

  std::vector<double> income(static_cast<std::size_t>(T), 0.0);
  std::vector<double> bound_income(static_cast<std::size_t>(T), k);
  std::vector<double> burn_income(static_cast<std::size_t>(T), 0.0);

  Rng rng(seed, stream_id(StreamKind::accounting, 1));
  for (std::uint64_t p = 0; p < paths; ++p) {
    for (double& y : income) y = law.sample(rng);
    bound_income[0] = income[0];
    burn_income[0] = income[0] + pledge;

    const double burn_u =
        optimal_riskfree_savings(burn_income, model).utility;
    burn_acc.add(burn_u);
    bound_acc.add(optimal_riskfree_savings(bound_income, model).utility);

    for (std::size_t r = 0; r < rules.size(); ++r) {
      const double rule_u = detail::rule_utility(rules[r], income, k, model);
      rule_acc[r].add(rule_u);
      margin_acc[r].add(burn_u - rule_u);
    }
  }

  report.token_burn = {burn_acc.mean(), burn_acc.se(), paths};
  report.upper_bound = {bound_acc.mean(), bound_acc.se(), paths};
  for (std::size_t r = 0; r < rules.size(); ++r) {
    report.dollar_rules.push_back(
        {rules[r],
         {rule_acc[r].mean(), rule_acc[r].se(), paths},
         {margin_acc[r].mean(), margin_acc[r].se(), paths}});
  }
  return report;
}

}  // namespace auctok
