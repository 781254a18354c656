#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "auctok/auction.hpp"
#include "auctok/equilibrium.hpp"
#include "auctok/errors.hpp"
#include "auctok/market.hpp"
#include "auctok/rng.hpp"
#include "auctok/valuation.hpp"

namespace auctok {

enum class Regime { dollars, tokens, equity };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::dollars: return "dollars";
    case Regime::tokens: return "tokens";
    case Regime::equity: return "equity";
  }
  return "?";
}

struct PeriodRecord {
  std::vector<double> valuations;
  std::vector<double> messages;
  std::vector<double> payments;        // b_i, dollars
  double total_payment = 0.0;          // B_t
  double price = 0.0;                  // p_t (0 in the dollar/equity regimes)
  double speculative_demand = 0.0;     // S_t
  double tokens_paid = 0.0;            // B_t / p_t
  double token_stock = 0.0;            // M_t
  double auctioneer_tokens = 0.0;      // A_t
  double revenue = 0.0;                // r_t, dollars
  std::vector<double> bidder_payoffs;  // per-period cash flow per bidder
  bool degenerate = false;

  double bidder_payoff_mean() const {
    if (bidder_payoffs.empty()) return 0.0;
    double s = 0.0;
    for (double x : bidder_payoffs) s += x;
    return s / static_cast<double>(bidder_payoffs.size());
  }
};

struct SimulationTrace {
  std::uint64_t path_id = 0;
  std::uint64_t seed = 0;
  Regime regime = Regime::dollars;
  std::vector<PeriodRecord> periods;
};

namespace detail {

// The per-path valuation draws are a pure function of (seed, path), so every
// regime simulated from the same seed sees the same bid realizations; the
// cross-regime identities then hold path by path, not just in expectation.
inline void draw_period(const ValuationDistribution& dist, int n, Rng& rng,
                        PeriodRecord& rec) {
  rec.valuations.resize(static_cast<std::size_t>(n));
  for (double& v : rec.valuations) v = dist.sample(rng);
}

inline void record_auction(const AuctionFormat& format, PeriodRecord& rec) {
  AuctionOutcome out = run_auction(format, rec.valuations);
  rec.messages = std::move(out.messages);
  rec.payments = std::move(out.payments);
  rec.total_payment = out.total_payment;
  rec.bidder_payoffs.assign(rec.valuations.size(), 0.0);
  if (out.winner) {
    rec.bidder_payoffs[static_cast<std::size_t>(*out.winner)] =
        rec.valuations[static_cast<std::size_t>(*out.winner)];
  }
  for (std::size_t i = 0; i < rec.payments.size(); ++i) {
    rec.bidder_payoffs[i] -= rec.payments[i];
  }
}

}  // namespace detail

struct SimulationConfig {
  ValuationDistribution dist = ValuationDistribution::uniform(0.0, 1.0);
  int bidders = 2;
  int horizon = 1;
  double beta = 0.9;
  MonetaryPolicy policy;  // tokens regime only
  double initial_stock = 1.0;
};

// Simulate one token-regime path into `trace` (reused buffer).
//
// Within a period, the market cap X_t = max{B_t, beta*P_{t+1} - sigma_t B_t}
// pins the price p_t = X_t / M_t; the induced next-period expected price
// P_{t+1} / M_{t+1} then satisfies the clearing floor exactly (a property
// the tests verify rather than assume). Auctioneer revenue is the value of
// the stock he liquidates, r_t = p_t * A_t. Bidder payoffs use the period
// cash flow v*win - p_t*q_i with the speculative position split equally.
inline void simulate_token_path(const EquilibriumProfile& profile,
                                const SimulationConfig& cfg,
                                std::uint64_t path_id, std::uint64_t seed,
                                SimulationTrace& trace) {
  const int n = cfg.bidders;
  const int T = cfg.horizon;
  Rng rng(seed, stream_id(StreamKind::path, path_id));
  trace.path_id = path_id;
  trace.seed = seed;
  trace.regime = Regime::tokens;
  trace.periods.resize(static_cast<std::size_t>(T));

  const auto format = AuctionFormat::second_price(cfg.dist.lower());
  LedgerState ledger = LedgerState::initial(cfg.initial_stock, n);
  for (int t = 1; t <= T; ++t) {
    PeriodRecord& rec = trace.periods[static_cast<std::size_t>(t - 1)];
    rec = PeriodRecord{};
    detail::draw_period(cfg.dist, n, rng, rec);
    detail::record_auction(format, rec);

    const double sigma = cfg.policy.sigma[static_cast<std::size_t>(t - 1)];
    const double tau = cfg.policy.tau[static_cast<std::size_t>(t - 1)];
    const double B = rec.total_payment;
    const double P_next = profile.market_cap(t + 1);
    const double M = ledger.total_stock;

    rec.token_stock = M;
    rec.auctioneer_tokens = ledger.auctioneer_tokens;

    if (M <= 0.0) {
      fail_numeric("simulate_token_path: token stock exhausted (tau = -1?)");
    }
    const double spec_cap = cfg.beta * P_next - sigma * B;
    double paid_tokens = 0.0;
    double spec_tokens = 0.0;
    if (B <= 0.0 && spec_cap <= 0.0) {
      rec.degenerate = true;
      rec.price = 0.0;
      spec_tokens = M;
    } else if (spec_cap > B) {
      // floor binds strictly: speculators absorb what bidding does not
      const double X = spec_cap;
      rec.price = X / M;
      paid_tokens = B / rec.price;
      spec_tokens = std::max(M - paid_tokens, 0.0);
    } else {
      rec.price = B / M;
      paid_tokens = M;
      spec_tokens = 0.0;
    }
    rec.tokens_paid = paid_tokens;
    rec.speculative_demand = spec_tokens;
    rec.revenue = rec.price * ledger.auctioneer_tokens;

    // per-bidder cash flow: v*win - b_i + p*(a_i - new speculative share)
    const double spec_share = spec_tokens / static_cast<double>(n);
    for (int i = 0; i < n; ++i) {
      rec.bidder_payoffs[static_cast<std::size_t>(i)] +=
          rec.price * (ledger.bidder_tokens[static_cast<std::size_t>(i)] -
                       spec_share);
    }

    std::vector<double> spec_split(static_cast<std::size_t>(n), spec_share);
    ledger = apply_policy(ledger, paid_tokens, spec_split, tau, sigma);
  }
}

inline void simulate_dollar_path(const SimulationConfig& cfg,
                                 std::uint64_t path_id, std::uint64_t seed,
                                 SimulationTrace& trace) {
  Rng rng(seed, stream_id(StreamKind::path, path_id));
  trace.path_id = path_id;
  trace.seed = seed;
  trace.regime = Regime::dollars;
  trace.periods.resize(static_cast<std::size_t>(cfg.horizon));
  const auto format = AuctionFormat::second_price(cfg.dist.lower());
  for (int t = 1; t <= cfg.horizon; ++t) {
    PeriodRecord& rec = trace.periods[static_cast<std::size_t>(t - 1)];
    rec = PeriodRecord{};
    detail::draw_period(cfg.dist, cfg.bidders, rng, rec);
    detail::record_auction(format, rec);
    rec.revenue = rec.total_payment;
  }
}

// Dollar auction plus a period-1 sale of all later cash flows at fair value:
// r_1 = B_1 + beta*(1-beta^{T-1})/(1-beta)*k, nothing afterwards. Under a
// shared seed this reproduces the burn-policy token revenue path exactly.
inline void simulate_equity_path(const SimulationConfig& cfg, double k,
                                 std::uint64_t path_id, std::uint64_t seed,
                                 SimulationTrace& trace) {
  simulate_dollar_path(cfg, path_id, seed, trace);
  trace.regime = Regime::equity;
  const int T = cfg.horizon;
  const double pledge =
      cfg.beta * (1.0 - std::pow(cfg.beta, T - 1)) / (1.0 - cfg.beta) * k;
  trace.periods.front().revenue = trace.periods.front().total_payment + pledge;
  for (int t = 2; t <= T; ++t) {
    trace.periods[static_cast<std::size_t>(t - 1)].revenue = 0.0;
  }
}

// Stream `paths` traces of one regime through a visitor without storing
// them; the trace buffer is reused, so visitors must copy what they keep.
template <class Visitor>
void simulate_paths(Regime regime, const SimulationConfig& cfg,
                    const EquilibriumProfile* profile, std::uint64_t paths,
                    std::uint64_t seed, Visitor&& visit) {
  require(cfg.bidders >= 2, "simulate_paths: at least two bidders");
  require(cfg.horizon >= 1, "simulate_paths: horizon >= 1");
  require(cfg.beta > 0.0 && cfg.beta < 1.0, "simulate_paths: beta in (0,1)");
  double k = 0.0;
  if (regime == Regime::tokens) {
    require(profile != nullptr, "simulate_paths: token regime needs a profile");
    require(cfg.initial_stock > 0.0, "simulate_paths: initial stock > 0");
    require(profile->matches(cfg.dist, cfg.bidders, cfg.horizon, cfg.beta,
                             cfg.policy),
            "simulate_paths: profile was solved for a different scenario");
  } else if (regime == Regime::equity) {
    k = expected_second_highest(cfg.dist, cfg.bidders);
  }
  SimulationTrace trace;
  for (std::uint64_t p = 0; p < paths; ++p) {
    switch (regime) {
      case Regime::tokens:
        simulate_token_path(*profile, cfg, p, seed, trace);
        break;
      case Regime::dollars:
        simulate_dollar_path(cfg, p, seed, trace);
        break;
      case Regime::equity:
        simulate_equity_path(cfg, k, p, seed, trace);
        break;
    }
    visit(trace);
  }
}

inline std::vector<SimulationTrace> simulate_token_auction(
    const EquilibriumProfile& profile, const ValuationDistribution& dist,
    int n, int T, double initial_stock, std::uint64_t paths,
    std::uint64_t seed) {
  SimulationConfig cfg{dist, n, T, profile.beta, profile.policy, initial_stock};
  std::vector<SimulationTrace> out;
  out.reserve(paths);
  simulate_paths(Regime::tokens, cfg, &profile, paths, seed,
                 [&](const SimulationTrace& t) { out.push_back(t); });
  return out;
}

inline std::vector<SimulationTrace> simulate_dollar_auction(
    const ValuationDistribution& dist, int n, int T, std::uint64_t paths,
    std::uint64_t seed) {
  // revenue in this regime never touches the discount factor
  SimulationConfig cfg{dist, n, T, 0.5, MonetaryPolicy::constant(T, 0.0, 0.0),
                       1.0};
  std::vector<SimulationTrace> out;
  out.reserve(paths);
  simulate_paths(Regime::dollars, cfg, nullptr, paths, seed,
                 [&](const SimulationTrace& t) { out.push_back(t); });
  return out;
}

inline std::vector<SimulationTrace> simulate_equity_benchmark(
    const ValuationDistribution& dist, int n, int T, double beta,
    std::uint64_t paths, std::uint64_t seed) {
  SimulationConfig cfg{dist, n, T, beta, MonetaryPolicy::constant(T, 0.0, 0.0),
                       1.0};
  std::vector<SimulationTrace> out;
  out.reserve(paths);
  simulate_paths(Regime::equity, cfg, nullptr, paths, seed,
                 [&](const SimulationTrace& t) { out.push_back(t); });
  return out;
}

// Present-discounted value of a trace's revenue stream.
inline double revenue_pdv(const SimulationTrace& trace, double beta) {
  double acc = 0.0;
  double disc = 1.0;
  for (const PeriodRecord& rec : trace.periods) {
    acc += disc * rec.revenue;
    disc *= beta;
  }
  return acc;
}

}  // namespace auctok
