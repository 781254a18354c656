#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "auctok/errors.hpp"
#include "auctok/quadrature.hpp"
#include "auctok/valuation.hpp"

namespace auctok {

// Two-period financing comparison: a token auction with observable,
// non-contractible quality effort against a dollar auction backed by a
// contingent security whose state-wise payments are capped by the cost c
// of hiding revenue. Conventions: the initial token stock is normalized to
// 1, investors do not discount (risk-free return 1), the auctioneer
// discounts at beta.
struct TwoPeriodConfig {
  double beta = 0.9;
  double misappropriation_cost = 0.0;  // c
  ValuationDistribution dist = ValuationDistribution::uniform(1.0, 2.0);
  int bidders = 2;

  void validate() const {
    require(beta > 0.0 && beta <= 1.0, "TwoPeriodConfig: beta must be in (0,1]");
    require(misappropriation_cost >= 0.0, "TwoPeriodConfig: c must be >= 0");
    require(bidders >= 2, "TwoPeriodConfig: n >= 2 required");
  }
};

// Fraction of the period-2 token stock held by the auctioneer, as a
// function of realized period-1 payments and the bid-token growth factor.
// Also the equilibrium effort level.
inline double alpha_of(double total_payment_1, double sigma, double k) {
  require(total_payment_1 >= 0.0, "alpha_of: negative payments");
  require(sigma >= -1.0, "alpha_of: sigma below -1");
  require(k >= 0.0, "alpha_of: k must be >= 0");
  const double root =
      std::sqrt(k * k + 4.0 * total_payment_1 * (1.0 + sigma));
  return std::min(1.0, 0.5 * (root - k));
}

struct AlphaSolution {
  double alpha = 0.0;
  double speculative_share = 0.0;  // S_1, fraction of the unit stock
};

// Independent route to alpha: solve the period-1 speculative-share fixed
// point jointly with the stock-composition identity
//   alpha = (1-S)(1+sigma)(1+tau) / ((1-S)(1+sigma)(1+tau) + S(1+tau)),
//   S     = max{0, 1 - B1 (1-S)(1+sigma)(1+tau) / ((k+alpha) alpha (1+tau))},
// by bracketed bisection on S. The tau factors are kept explicit so the
// numeric result demonstrates, rather than assumes, that tau cancels.
inline AlphaSolution alpha_fixed_point_oracle(double total_payment_1,
                                              double sigma, double tau,
                                              double k) {
  require(total_payment_1 >= 0.0, "alpha_fixed_point_oracle: negative payments");
  require(sigma >= -1.0, "alpha_fixed_point_oracle: sigma below -1");
  require(tau > -1.0,
          "alpha_fixed_point_oracle: tau = -1 leaves no period-2 stock");
  require(k > 0.0, "alpha_fixed_point_oracle: k must be positive");

  if (sigma == -1.0 || total_payment_1 == 0.0) {
    // bid tokens are destroyed (or there are none): investors end up with
    // the whole stock
    return {0.0, 1.0};
  }

  const auto alpha_at = [&](double s) {
    const double kept = (1.0 - s) * (1.0 + sigma) * (1.0 + tau);
    return kept / (kept + s * (1.0 + tau));
  };
  const auto residual = [&](double s) {
    const double a = alpha_at(s);
    // period-2 expected price for a unit initial stock
    const double p2e =
        (k + a) * a / ((1.0 - s) * (1.0 + sigma) * (1.0 + tau));
    const double spend_share = total_payment_1 / (p2e * (1.0 + tau));
    return s - std::max(0.0, 1.0 - spend_share);
  };

  if (residual(0.0) >= 0.0) {
    return {1.0, 0.0};  // bidding demand alone absorbs the whole stock
  }
  const double hi = 1.0 - 1e-13;
  if (residual(hi) < 0.0) {
    fail_numeric("alpha_fixed_point_oracle: fixed point not bracketed");
  }
  const double s = bisect(residual, 0.0, hi, 1e-13);
  return {alpha_at(s), s};
}

struct Period2Equilibrium {
  double effort = 0.0;          // e* = alpha
  double expected_price = 0.0;  // (k + alpha) / M2
  double investor_value = 0.0;  // (1 - alpha)(k + alpha)
};

inline Period2Equilibrium token_equilibrium_period2(double alpha, double k,
                                                    double stock_2) {
  require(alpha >= 0.0 && alpha <= 1.0, "token_equilibrium_period2: alpha in [0,1]");
  require(stock_2 > 0.0, "token_equilibrium_period2: M2 must be positive");
  return {alpha, (k + alpha) / stock_2, (1.0 - alpha) * (k + alpha)};
}

struct IntegrationSpec {
  double tol = 1e-10;
};

// Auctioneer's expected utility in the token regime, as of period 1:
//   k + E[(1-alpha)(k+alpha)] + beta ( E[alpha (k+alpha)] - E[alpha^2]/2 ),
// expectation over the period-1 payment law. Period-1 revenue is the bids
// plus the fair value of the tokens investors carry; period 2 brings
// alpha(k+e*) at effort cost e*^2/2 with e* = alpha.
inline double token_auctioneer_utility(double sigma, const TwoPeriodConfig& cfg,
                                       const IntegrationSpec& spec = {}) {
  cfg.validate();
  require(sigma >= -1.0, "token_auctioneer_utility: sigma below -1");
  const PaymentLaw law(cfg.dist, cfg.bidders);
  const double k = law.mean();

  const auto payoff = [&](double b1) {
    const double a = alpha_of(b1, sigma, k);
    return k + (1.0 - a) * (k + a) +
           cfg.beta * (a * (k + a) - 0.5 * a * a);
  };
  // alpha saturates at 1 when B1 (1+sigma) reaches k+1
  std::array<double, 1> kink{};
  std::span<const double> breaks{};
  if (1.0 + sigma > 0.0) {
    kink[0] = (k + 1.0) / (1.0 + sigma);
    breaks = std::span<const double>(kink);
  }
  return law.expect(payoff, breaks, spec.tol);
}

inline double expected_alpha(double sigma, const TwoPeriodConfig& cfg,
                             const IntegrationSpec& spec = {}) {
  const PaymentLaw law(cfg.dist, cfg.bidders);
  const double k = law.mean();
  std::array<double, 1> kink{};
  std::span<const double> breaks{};
  if (1.0 + sigma > 0.0) {
    kink[0] = (k + 1.0) / (1.0 + sigma);
    breaks = std::span<const double>(kink);
  }
  return law.expect([&](double b1) { return alpha_of(b1, sigma, k); }, breaks,
                    spec.tol);
}

// Smallest sigma at which alpha = 1 for every payment realization:
// lowest-support bids already absorb the stock, v_low (1+sigma) = k+1.
inline double sigma_upper_bound(const TwoPeriodConfig& cfg) {
  const double v_low = cfg.dist.lower();
  require(v_low > 0.0,
          "sigma_upper_bound: support must be bounded away from 0");
  const double k = expected_second_highest(cfg.dist, cfg.bidders);
  return (k + 1.0) / v_low - 1.0;
}

struct SigmaOptimum {
  double sigma = 0.0;
  double utility = 0.0;
  double expected_alpha = 0.0;
  bool boundary = false;
  std::string diagnostic;
};

// Maximize the token utility over sigma in [-1, sigma_bar]: coarse grid,
// then golden-section refinement around the best cell.
inline SigmaOptimum optimize_sigma(const TwoPeriodConfig& cfg,
                                   const IntegrationSpec& spec = {}) {
  cfg.validate();
  const double sigma_bar = sigma_upper_bound(cfg);
  const auto objective = [&](double s) {
    return token_auctioneer_utility(s, cfg, spec);
  };

  constexpr int kGrid = 257;
  double best_sigma = -1.0;
  double best_value = -std::numeric_limits<double>::infinity();
  double worst_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double s = -1.0 + (sigma_bar + 1.0) * i / double(kGrid - 1);
    const double u = objective(s);
    if (u > best_value) {
      best_value = u;
      best_sigma = s;
    }
    worst_value = std::min(worst_value, u);
  }

  SigmaOptimum out;
  if (best_value - worst_value < 1e-12) {
    out.sigma = sigma_bar;
    out.utility = objective(sigma_bar);
    out.expected_alpha = expected_alpha(sigma_bar, cfg, spec);
    out.boundary = true;
    out.diagnostic = "objective flat within tolerance; returning the boundary";
    return out;
  }

  const double h = (sigma_bar + 1.0) / double(kGrid - 1);
  const double lo = std::max(-1.0, best_sigma - h);
  const double hi = std::min(sigma_bar, best_sigma + h);
  out.sigma = golden_section_max(objective, lo, hi, 1e-11);
  out.utility = objective(out.sigma);
  out.expected_alpha = expected_alpha(out.sigma, cfg, spec);
  out.boundary = (out.sigma >= sigma_bar - 1e-9) || (out.sigma <= -1.0 + 1e-9);
  return out;
}

// Contingent security sold to investors against period-2 revenue: an
// unconditional payment plus an extra penalty payment whenever realized
// revenue falls below the threshold. Incentive compatibility caps every
// state-wise payment at c; investor rationality pins y1 = E[y2].
struct ContractSpec {
  double y1 = 0.0;
  double base = 0.0;
  double penalty = 0.0;
  double threshold = 0.0;
};

namespace detail {

// Best-response effort to a penalty schedule: maximize
//   phi(e) = e - penalty * P(B < threshold - e) - e^2/2.
// The payoff has kinks where threshold - e crosses the payment support (or
// its atoms), so candidates are the kink points plus grid-refined interior
// stationary points.
inline double effort_best_response(const PaymentLaw& law, double penalty,
                                   double threshold) {
  const auto phi = [&](double e) {
    return e - penalty * law.prob_below(threshold - e) - 0.5 * e * e;
  };
  std::vector<double> candidates{0.0, 1.0};
  if (law.is_discrete()) {
    for (const Atom& a : law.pmf()) candidates.push_back(threshold - a.value);
  } else {
    candidates.push_back(threshold - law.lower());
    candidates.push_back(threshold - law.upper());
  }
  const double e_max = std::max(1.0, threshold - law.lower()) + 1.0;
  constexpr int kGrid = 2001;
  for (int i = 0; i <= kGrid; ++i) candidates.push_back(e_max * i / kGrid);

  double best_e = 0.0;
  double best_phi = -std::numeric_limits<double>::infinity();
  for (double e : candidates) {
    if (e < 0.0 || e > e_max) continue;
    const double value = phi(e);
    if (value > best_phi) {
      best_phi = value;
      best_e = e;
    }
  }
  if (!law.is_discrete()) {
    const double h = e_max / kGrid;
    const double refined = golden_section_max(
        phi, std::max(0.0, best_e - h), std::min(e_max, best_e + h), 1e-12);
    if (phi(refined) > best_phi) best_e = refined;
  }
  return best_e;
}

}  // namespace detail

// Build a contract with investor-rational y1 for given schedule parameters.
inline ContractSpec make_rational_contract(const TwoPeriodConfig& cfg,
                                           double base, double penalty,
                                           double threshold) {
  cfg.validate();
  require(base >= 0.0 && penalty >= 0.0,
          "make_rational_contract: payments must be >= 0");
  require(base + penalty <= cfg.misappropriation_cost + 1e-12,
          "make_rational_contract: state-wise payment exceeds the hiding cost");
  const PaymentLaw law(cfg.dist, cfg.bidders);
  const double effort = detail::effort_best_response(law, penalty, threshold);
  const double y1 = base + penalty * law.prob_below(threshold - effort);
  return {y1, base, penalty, threshold};
}

struct DollarOutcome {
  double effort = 0.0;
  double utility = 0.0;
  double investor_payoff = 0.0;  // zero under investor rationality
};

// Dollar-regime value for a given security (or none). With no outside
// financing the auctioneer keeps the full marginal return to effort, so
// e = 1 and utility is k + beta(k + 1/2); a security front-loads y1 at the
// price of repaying it (in expectation) out of period-2 consumption.
inline DollarOutcome dollar_regime(const TwoPeriodConfig& cfg,
                                   const std::optional<ContractSpec>& contract) {
  cfg.validate();
  const PaymentLaw law(cfg.dist, cfg.bidders);
  const double k = law.mean();
  if (!contract) {
    return {1.0, k + cfg.beta * (k + 0.5), 0.0};
  }
  require(contract->base >= 0.0 && contract->penalty >= 0.0,
          "dollar_regime: negative contract payments");
  require(contract->base + contract->penalty <=
              cfg.misappropriation_cost + 1e-12,
          "dollar_regime: contract violates the state-wise payment cap");
  const double effort =
      detail::effort_best_response(law, contract->penalty, contract->threshold);
  const double expected_repay =
      contract->base +
      contract->penalty * law.prob_below(contract->threshold - effort);
  require(std::abs(expected_repay - contract->y1) <= 1e-8,
          "dollar_regime: y1 violates investor rationality");
  const double utility =
      k + contract->y1 +
      cfg.beta * (k + effort - expected_repay - 0.5 * effort * effort);
  return {effort, utility, 0.0};
}

// The constructive efficient security, feasible once c >= k+1: pledge the
// whole expected revenue k+1 unconditionally and keep the punishment
// threshold at the efficient-revenue floor.
inline ContractSpec first_best_contract(const TwoPeriodConfig& cfg) {
  const double k = expected_second_highest(cfg.dist, cfg.bidders);
  require(cfg.misappropriation_cost >= k + 1.0 - 1e-12,
          "first_best_contract: needs c >= k+1");
  const double penalty = cfg.misappropriation_cost - (k + 1.0);
  return make_rational_contract(cfg, k + 1.0, penalty, cfg.dist.lower() + 1.0);
}

struct DollarOptimum {
  ContractSpec contract;
  DollarOutcome outcome;
};

// Optimize the dollar regime over the security family. Thresholds live in
// [v_low, v_low + 1] (punishing below the efficient revenue floor, as in
// the constructive benchmark) and the pledge is capped by expected
// period-2 revenue k + e*: the security sells future cash flow, it is not
// unsecured borrowing. Grid search with one local refinement pass.
inline DollarOptimum optimize_dollar_contract(const TwoPeriodConfig& cfg) {
  cfg.validate();
  const PaymentLaw law(cfg.dist, cfg.bidders);
  const double k = law.mean();
  const double c = cfg.misappropriation_cost;

  const auto evaluate = [&](double penalty, double threshold) {
    const double effort = detail::effort_best_response(law, penalty, threshold);
    const double prob = law.prob_below(threshold - effort);
    double base = std::min(c - penalty, k + effort - penalty * prob);
    base = std::max(base, 0.0);
    const double y1 = base + penalty * prob;
    const double utility =
        k + y1 + cfg.beta * (k + effort - y1 - 0.5 * effort * effort);
    return std::tuple{utility, base, effort};
  };

  const double th_lo = cfg.dist.lower();
  const double th_hi = cfg.dist.lower() + 1.0;
  double best_u = -std::numeric_limits<double>::infinity();
  double best_penalty = 0.0, best_th = th_lo, best_base = 0.0;
  constexpr int kSteps = 40;
  for (int pass = 0; pass < 2; ++pass) {
    const double p_lo = pass == 0 ? 0.0 : std::max(0.0, best_penalty - c / kSteps);
    const double p_hi = pass == 0 ? c : std::min(c, best_penalty + c / kSteps);
    const double t_lo =
        pass == 0 ? th_lo : std::max(th_lo, best_th - (th_hi - th_lo) / kSteps);
    const double t_hi =
        pass == 0 ? th_hi : std::min(th_hi, best_th + (th_hi - th_lo) / kSteps);
    for (int i = 0; i <= kSteps; ++i) {
      const double penalty =
          p_lo + (p_hi - p_lo) * (kSteps ? double(i) / kSteps : 0.0);
      for (int j = 0; j <= kSteps; ++j) {
        const double th =
            t_lo + (t_hi - t_lo) * (kSteps ? double(j) / kSteps : 0.0);
        const auto [u, base, effort] = evaluate(penalty, th);
        if (u > best_u) {
          best_u = u;
          best_penalty = penalty;
          best_th = th;
          best_base = base;
        }
      }
    }
    if (c == 0.0) break;
  }

  DollarOptimum out;
  out.contract = make_rational_contract(cfg, best_base, best_penalty, best_th);
  out.outcome = dollar_regime(cfg, out.contract);
  return out;
}

struct ComparisonRow {
  double c = 0.0;
  double dollar_utility = 0.0;
  double token_utility = 0.0;
};

struct RegimeComparison {
  std::vector<ComparisonRow> rows;
  double sigma_star = 0.0;
  double token_utility = 0.0;
  double expected_alpha = 0.0;
  std::optional<double> crossing_c;  // smallest grid c with dollars >= tokens
};

// Sweep the hiding cost: the token side is c-invariant (optimized once over
// sigma); the dollar side re-optimizes its security per c.
inline RegimeComparison compare_regimes(const TwoPeriodConfig& base_cfg,
                                        std::span<const double> c_grid) {
  base_cfg.validate();
  require(!c_grid.empty(), "compare_regimes: empty c grid");
  require(std::is_sorted(c_grid.begin(), c_grid.end()),
          "compare_regimes: c grid must be sorted");
  require(c_grid.front() >= 0.0, "compare_regimes: c must be >= 0");

  RegimeComparison report;
  const SigmaOptimum token = optimize_sigma(base_cfg);
  report.sigma_star = token.sigma;
  report.token_utility = token.utility;
  report.expected_alpha = token.expected_alpha;

  for (double c : c_grid) {
    TwoPeriodConfig cfg = base_cfg;
    cfg.misappropriation_cost = c;
    const DollarOptimum dollar = optimize_dollar_contract(cfg);
    report.rows.push_back({c, dollar.outcome.utility, token.utility});
    if (!report.crossing_c && dollar.outcome.utility >= token.utility) {
      report.crossing_c = c;
    }
  }
  return report;
}

}  // namespace auctok
