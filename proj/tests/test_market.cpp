#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "auctok/market.hpp"
#include "auctok/rng.hpp"

using namespace auctok;

TEST_CASE("monetary policy validation") {
  auto p = MonetaryPolicy::constant(3, 0.0, -1.0);
  CHECK(p.horizon() == 3);

  MonetaryPolicy bad;
  bad.tau = {0.0, 0.0};
  bad.sigma = {0.0, -1.5};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad.sigma = {0.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("ledger feasibility") {
  auto s = LedgerState::initial(2.0, 3);
  CHECK(s.auctioneer_tokens == 2.0);
  CHECK(s.bidder_total() == 0.0);
  s.validate();

  s.bidder_tokens[0] = 0.5;  // now A + sum a != M
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("market clearing: slack floor, binding floor, terminal") {
  // beta(1+tau)p_next = 0.2 in the first two cases
  auto r = clear_market(0.3, 1.0, 0.8, 0.0, 0.25);
  CHECK(r.price == Catch::Approx(0.3));
  CHECK(r.speculative_demand == 0.0);
  CHECK(r.tokens_paid == Catch::Approx(1.0));
  CHECK_FALSE(r.degenerate);

  r = clear_market(0.1, 1.0, 0.8, 0.0, 0.25);
  CHECK(r.price == Catch::Approx(0.2));
  CHECK(r.speculative_demand == Catch::Approx(0.5));
  CHECK(r.tokens_paid == Catch::Approx(0.5));

  // terminal period: no continuation value
  r = clear_market(0.4, 2.0, 0.9, 0.0, 0.0);
  CHECK(r.price == Catch::Approx(0.2));
  CHECK(r.speculative_demand == 0.0);

  // degenerate zero-price state
  r = clear_market(0.0, 1.5, 0.9, 0.0, 0.0);
  CHECK(r.degenerate);
  CHECK(r.price == 0.0);
  CHECK(r.speculative_demand == 1.5);
  CHECK(r.tokens_paid == 0.0);
}

TEST_CASE("market clearing respects the price floor") {
  Rng rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    const double B = rng.uniform(0.0, 2.0);
    const double M = rng.uniform(0.1, 5.0);
    const double beta = rng.uniform(0.05, 0.95);
    const double tau = rng.uniform(-1.0, 2.0);
    const double p_next = rng.uniform(0.0, 1.0);
    const auto r = clear_market(B, M, beta, tau, p_next);
    const double floor = beta * (1.0 + tau) * p_next;
    CHECK(r.price >= floor - 1e-12);
    CHECK(r.speculative_demand >= 0.0);
    CHECK(r.speculative_demand + r.tokens_paid <= M + 1e-9);
    if (r.price > floor + 1e-12) {
      CHECK(r.speculative_demand == 0.0);
    }
  }
}

TEST_CASE("market cap fixed point") {
  // full burn: the continuation value stacks on top of the payments
  CHECK(market_cap_fixed_point(0.25, -1.0, 0.5, 0.6) == Catch::Approx(0.55));
  // slack floor
  CHECK(market_cap_fixed_point(0.3, 0.0, 0.5, 0.4) == Catch::Approx(0.3));
  // speculative branch
  CHECK(market_cap_fixed_point(0.1, 0.0, 0.5, 0.4) == Catch::Approx(0.2));

  Rng rng(19);
  for (int trial = 0; trial < 2000; ++trial) {
    const double B = rng.uniform(0.0, 2.0);
    const double sigma = rng.uniform(-1.0, 3.0);
    const double beta = rng.uniform(0.05, 0.95);
    const double P_next = rng.uniform(0.0, 2.0);
    const double X = market_cap_fixed_point(B, sigma, beta, P_next);
    CHECK(X >= B);  // the cap never falls below the bids
    const bool speculation = (1.0 + sigma) * B < beta * P_next;
    if (speculation) {
      CHECK(X == Catch::Approx(beta * P_next - sigma * B));
    } else {
      CHECK(X == Catch::Approx(B));
    }
  }
}

TEST_CASE("clearing and the market-cap equation tell the same story") {
  // feeding the fixed-point-consistent expected price back into the
  // clearing operation must reproduce p = X / M
  Rng rng(29);
  for (int trial = 0; trial < 2000; ++trial) {
    const double B = rng.uniform(0.01, 2.0);
    const double M = rng.uniform(0.1, 5.0);
    const double beta = rng.uniform(0.1, 0.95);
    const double tau = rng.uniform(-0.9, 2.0);
    const double sigma = rng.uniform(-1.0, 2.0);
    const double P_next = rng.uniform(0.0, 2.0);
    const double X = market_cap_fixed_point(B, sigma, beta, P_next);
    const double price = X / M;
    const double paid = B / price;
    const double M_next = (1.0 + tau) * (M + sigma * paid);
    if (M_next <= 1e-9) continue;
    const auto r = clear_market(B, M, beta, tau, P_next / M_next);
    CHECK(r.price == Catch::Approx(price).margin(1e-9));
  }
}

TEST_CASE("policy transition examples") {
  // burn removes the paid tokens
  auto ledger = LedgerState::initial(1.0, 2);
  auto next = apply_policy(ledger, 0.4, std::vector<double>{0.3, 0.3}, 0.0, -1.0);
  CHECK(next.total_stock == Catch::Approx(0.6));
  CHECK(next.auctioneer_tokens == 0.0);
  next.validate();

  // uniform doubling
  next = apply_policy(ledger, 0.5, std::vector<double>{0.25, 0.25}, 1.0, 0.0);
  CHECK(next.total_stock == Catch::Approx(2.0));
  CHECK(next.auctioneer_tokens == Catch::Approx(1.0));
  next.validate();

  // identity policy
  next = apply_policy(ledger, 0.7, std::vector<double>{0.2, 0.1}, 0.0, 0.0);
  CHECK(next.total_stock == Catch::Approx(1.0));
  next.validate();

  CHECK_THROWS_AS(
      apply_policy(ledger, 0.9, std::vector<double>{0.2, 0.2}, 0.0, 0.0),
      std::invalid_argument);  // outflows exceed the stock
}

TEST_CASE("policy transition conserves the stock identity") {
  Rng rng(23);
  for (int trial = 0; trial < 2000; ++trial) {
    const double M = rng.uniform(0.1, 4.0);
    auto ledger = LedgerState::initial(M, 2);
    const double paid = rng.uniform(0.0, M);
    const double spec = M - paid;
    const double tau = rng.uniform(-1.0, 2.0);
    const double sigma = rng.uniform(-1.0, 2.0);
    const auto next = apply_policy(
        ledger, paid, std::vector<double>{spec / 2, spec / 2}, tau, sigma);
    CHECK(next.total_stock ==
          Catch::Approx((1.0 + tau) * (M + sigma * paid)).margin(1e-9));
    next.validate();
  }
}
