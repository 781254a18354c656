#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "auctok/errors.hpp"
#include "auctok/quadrature.hpp"
#include "auctok/rng.hpp"
#include "auctok/valuation.hpp"

namespace auctok {

enum class FormatKind { second_price, first_price };

// One-period sealed-bid format. First-price needs the valuation law to map
// types to equilibrium bids, so it carries a copy of the distribution.
struct AuctionFormat {
  FormatKind kind = FormatKind::second_price;
  double reserve = 0.0;
  std::optional<ValuationDistribution> bid_dist;  // first-price only

  static AuctionFormat second_price(double reserve = 0.0) {
    require(reserve >= 0.0, "AuctionFormat: reserve must be >= 0");
    return AuctionFormat{FormatKind::second_price, reserve, std::nullopt};
  }

  static AuctionFormat first_price(const ValuationDistribution& dist,
                                   std::optional<double> reserve = std::nullopt) {
    require(dist.is_continuous(),
            "first_price: equilibrium bids with atoms are unsupported");
    const double r = reserve.value_or(dist.lower());
    require(r >= 0.0, "AuctionFormat: reserve must be >= 0");
    return AuctionFormat{FormatKind::first_price, r, dist};
  }
};

struct AuctionOutcome {
  std::optional<int> winner;     // none if every message is below the reserve
  std::vector<double> messages;  // dollar bids m_i
  std::vector<double> payments;  // dollar payments b_i (b_i <= m_i)
  double total_payment = 0.0;    // B = sum of b_i
};

// Symmetric equilibrium bid in the first-price auction with reserve at the
// lower support bound: b(v) = v - int_{lo}^{v} F(x)^{n-1} dx / F(v)^{n-1}.
// Nondecreasing in v; the lowest type bids the reserve.
inline double fpa_equilibrium_bid(const ValuationDistribution& dist, int n,
                                  double v) {
  require(n >= 2, "fpa_equilibrium_bid: n >= 2 required");
  require(dist.is_continuous(),
          "fpa_equilibrium_bid: discrete distributions unsupported");
  require(v >= dist.lower() - 1e-12 && v <= dist.upper() + 1e-12,
          "fpa_equilibrium_bid: v outside support");
  if (v <= dist.lower()) return dist.lower();
  const double Fv = dist.cdf(v);
  if (Fv <= 0.0) return dist.lower();
  const double shade = integrate(
      [&](double x) { return std::pow(dist.cdf(x), n - 1); }, dist.lower(), v,
      1e-12);
  return v - shade / std::pow(Fv, n - 1);
}

// Run one period's auction. Second-price: truthful messages (dominant
// strategy); first-price: equilibrium bids. Ties among highest messages go
// to the lowest bidder index.
inline AuctionOutcome run_auction(const AuctionFormat& format,
                                  std::span<const double> valuations) {
  require(valuations.size() >= 2, "run_auction: at least two bidders required");
  const int n = static_cast<int>(valuations.size());
  AuctionOutcome out;
  out.messages.resize(valuations.size());
  out.payments.assign(valuations.size(), 0.0);

  if (format.kind == FormatKind::second_price) {
    for (int i = 0; i < n; ++i) {
      require(valuations[i] >= 0.0, "run_auction: negative valuation");
      out.messages[i] = valuations[i];
    }
  } else {
    require(format.bid_dist.has_value(),
            "run_auction: first-price format lacks its valuation law");
    for (int i = 0; i < n; ++i) {
      require(valuations[i] >= 0.0, "run_auction: negative valuation");
      out.messages[i] = fpa_equilibrium_bid(*format.bid_dist, n, valuations[i]);
    }
  }

  int best = 0;
  int second = -1;
  for (int i = 1; i < n; ++i) {
    if (out.messages[i] > out.messages[best]) {
      second = best;
      best = i;
    } else if (second < 0 || out.messages[i] > out.messages[second]) {
      second = i;
    }
  }
  if (out.messages[best] < format.reserve) {
    return out;  // no sale
  }
  out.winner = best;
  if (format.kind == FormatKind::second_price) {
    out.payments[best] = std::max(out.messages[second], format.reserve);
  } else {
    out.payments[best] = out.messages[best];  // winner pays own bid
  }
  out.total_payment = out.payments[best];
  return out;
}

// Monte Carlo expected revenue for a format, with standard error.
inline McEstimate expected_revenue(const AuctionFormat& format,
                                   const ValuationDistribution& dist, int n,
                                   std::uint64_t paths, Rng& rng) {
  require(paths >= 10000, "expected_revenue: at least 1e4 paths required");
  MeanAccumulator acc;
  std::vector<double> v(static_cast<std::size_t>(n));
  for (std::uint64_t p = 0; p < paths; ++p) {
    for (double& x : v) x = dist.sample(rng);
    acc.add(run_auction(format, v).total_payment);
  }
  return {acc.mean(), acc.se(), paths};
}

}  // namespace auctok
