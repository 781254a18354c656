#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "auctok/errors.hpp"

namespace auctok {

constexpr double kLedgerTol = 1e-9;

// Committed per-period token rules: tau rescales every token between
// periods, sigma rescales only the tokens that were used to pay the
// auctioneer (sigma = -1 burns them).
struct MonetaryPolicy {
  std::vector<double> tau;
  std::vector<double> sigma;

  static MonetaryPolicy constant(int horizon, double tau_value, double sigma_value) {
    MonetaryPolicy p;
    p.tau.assign(static_cast<std::size_t>(horizon), tau_value);
    p.sigma.assign(static_cast<std::size_t>(horizon), sigma_value);
    p.validate();
    return p;
  }

  int horizon() const { return static_cast<int>(tau.size()); }

  void validate() const {
    require(tau.size() == sigma.size(),
            "MonetaryPolicy: tau and sigma must have equal length");
    for (double t : tau) require(t >= -1.0, "MonetaryPolicy: tau below -1");
    for (double s : sigma) require(s >= -1.0, "MonetaryPolicy: sigma below -1");
  }

  bool operator==(const MonetaryPolicy&) const = default;
};

// Token holdings at the start of a period. Feasibility: auctioneer plus
// bidder holdings account for the whole stock.
struct LedgerState {
  int t = 1;                          // period index, 1-based
  double total_stock = 0.0;           // M_t
  double auctioneer_tokens = 0.0;     // A_t
  std::vector<double> bidder_tokens;  // a_{i,t}

  static LedgerState initial(double m1, int bidders) {
    require(m1 >= 0.0, "LedgerState: initial stock must be >= 0");
    LedgerState s;
    s.t = 1;
    s.total_stock = m1;
    s.auctioneer_tokens = m1;  // the auctioneer creates and owns the stock
    s.bidder_tokens.assign(static_cast<std::size_t>(bidders), 0.0);
    return s;
  }

  double bidder_total() const {
    return std::accumulate(bidder_tokens.begin(), bidder_tokens.end(), 0.0);
  }

  void validate() const {
    require(total_stock >= 0.0, "LedgerState: negative stock");
    require(auctioneer_tokens >= -kLedgerTol &&
                auctioneer_tokens <= total_stock + kLedgerTol,
            "LedgerState: auctioneer holdings outside [0, M]");
    for (double a : bidder_tokens)
      require(a >= -kLedgerTol, "LedgerState: negative bidder holdings");
    require(std::abs(auctioneer_tokens + bidder_total() - total_stock) <= kLedgerTol,
            "LedgerState: holdings do not sum to the stock");
  }
};

struct MarketClearingResult {
  double price = 0.0;               // p_t, dollars per token
  double speculative_demand = 0.0;  // S_t, tokens bought but not spent on bids
  double tokens_paid = 0.0;         // B_t / p_t
  bool degenerate = false;          // zero-price state (B = 0 and no resale value)
};

// Per-period token market clearing.
//
// Holding a token to next period returns beta*(1+tau)*p_next per dollar of
// price paid, versus 1 on the risk-free asset, so no equilibrium price can
// sit below the floor beta*(1+tau)*p_next. Above the floor, only bidding
// demand B/p clears against the stock M; at the floor, speculators absorb
// the remainder:
//   p = max{ B/M, beta*(1+tau)*p_next },
//   S = max{ M - B / (beta*(1+tau)*p_next), 0 }.
inline MarketClearingResult clear_market(double total_payment, double stock,
                                         double beta, double tau,
                                         double p_next_expected) {
  require(stock > 0.0, "clear_market: stock must be positive");
  require(total_payment >= 0.0, "clear_market: negative payments");
  require(p_next_expected >= 0.0, "clear_market: negative expected price");
  require(beta > 0.0 && beta < 1.0, "clear_market: beta must be in (0,1)");
  require(tau >= -1.0, "clear_market: tau below -1");

  const double floor = beta * (1.0 + tau) * p_next_expected;
  MarketClearingResult r;
  if (total_payment == 0.0 && floor == 0.0) {
    // No bidding demand and no resale value: price collapses; flag rather
    // than abort so policy sweeps can continue.
    r.price = 0.0;
    r.speculative_demand = stock;
    r.tokens_paid = 0.0;
    r.degenerate = true;
    return r;
  }
  const double bid_price = total_payment / stock;
  if (bid_price > floor) {
    r.price = bid_price;
    r.speculative_demand = 0.0;
    r.tokens_paid = stock;  // B / (B/M) = M: bidding demand absorbs the stock
  } else {
    r.price = floor;
    r.tokens_paid = total_payment / floor;
    r.speculative_demand = std::max(stock - r.tokens_paid, 0.0);
  }
  return r;
}

// Same equilibrium condition written in market-cap space X_t = p_t * M_t.
//
// The clearing price depends on p_next = P_next / M_next while M_next itself
// depends on how many tokens the current payments absorb; substituting the
// policy transition M_next = (1+tau)(M + sigma*B/p) into the floor condition
// collapses the joint restriction to
//   X = max{ B, beta*P_next - sigma*B },
// which depends on neither tau nor the current stock. Speculation is active
// exactly when (1+sigma)*B < beta*P_next, and X >= B always.
inline double market_cap_fixed_point(double total_payment, double sigma,
                                     double beta, double P_next) {
  require(total_payment >= 0.0, "market_cap_fixed_point: negative payments");
  require(P_next >= 0.0, "market_cap_fixed_point: negative continuation cap");
  require(beta > 0.0 && beta < 1.0, "market_cap_fixed_point: beta in (0,1)");
  require(sigma >= -1.0, "market_cap_fixed_point: sigma below -1");
  return std::max(total_payment, beta * P_next - sigma * total_payment);
}

// Advance the ledger one period. The auctioneer liquidates his whole stock
// each period, so next period he holds only the (sigma-scaled) payment
// tokens; bidders carry their speculative purchases, tau-scaled.
inline LedgerState apply_policy(const LedgerState& ledger, double tokens_paid,
                                std::span<const double> speculator_holdings,
                                double tau, double sigma) {
  require(tau >= -1.0, "apply_policy: tau below -1");
  require(sigma >= -1.0, "apply_policy: sigma below -1");
  require(tokens_paid >= 0.0, "apply_policy: negative payment tokens");
  require(speculator_holdings.size() == ledger.bidder_tokens.size(),
          "apply_policy: speculator vector size mismatch");
  double spec_total = 0.0;
  for (double s : speculator_holdings) {
    require(s >= -kLedgerTol, "apply_policy: negative speculative holdings");
    spec_total += s;
  }
  require(tokens_paid + spec_total <= ledger.total_stock + kLedgerTol,
          "apply_policy: outflows exceed the stock");

  LedgerState next;
  next.t = ledger.t + 1;
  next.auctioneer_tokens = (1.0 + tau) * (1.0 + sigma) * tokens_paid;
  next.bidder_tokens.resize(speculator_holdings.size());
  double bidder_total = 0.0;
  for (std::size_t i = 0; i < speculator_holdings.size(); ++i) {
    next.bidder_tokens[i] = (1.0 + tau) * speculator_holdings[i];
    bidder_total += next.bidder_tokens[i];
  }
  next.total_stock = next.auctioneer_tokens + bidder_total;
  return next;
}

}  // namespace auctok
