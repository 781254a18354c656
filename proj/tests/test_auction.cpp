#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "auctok/auction.hpp"
#include "auctok/valuation.hpp"

using namespace auctok;

namespace {

// Payoff of bidder i in a second-price auction when the submitted message
// vector is `messages` and i's true value is `v`.
double spa_payoff(const std::vector<double>& messages, int i, double v,
                  double reserve = 0.0) {
  const auto out = run_auction(AuctionFormat::second_price(reserve), messages);
  if (out.winner && *out.winner == i) {
    return v - out.payments[static_cast<std::size_t>(i)];
  }
  return 0.0;
}

}  // namespace

TEST_CASE("second-price outcomes") {
  const auto fmt = AuctionFormat::second_price(0.0);

  auto out = run_auction(fmt, std::vector<double>{0.8, 0.3});
  REQUIRE(out.winner.has_value());
  CHECK(*out.winner == 0);
  CHECK(out.payments == std::vector<double>{0.3, 0.0});
  CHECK(out.total_payment == 0.3);

  // tie goes to the lowest index
  out = run_auction(fmt, std::vector<double>{0.5, 0.5});
  REQUIRE(out.winner.has_value());
  CHECK(*out.winner == 0);
  CHECK(out.total_payment == 0.5);

  // reserve lifts the payment
  out = run_auction(AuctionFormat::second_price(0.5),
                    std::vector<double>{0.8, 0.3});
  CHECK(out.total_payment == 0.5);

  // nobody clears the reserve
  out = run_auction(AuctionFormat::second_price(0.9),
                    std::vector<double>{0.8, 0.3});
  CHECK_FALSE(out.winner.has_value());
  CHECK(out.total_payment == 0.0);

  CHECK_THROWS_AS(run_auction(fmt, std::vector<double>{}),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_auction(fmt, std::vector<double>{1.0}),
                  std::invalid_argument);
}

TEST_CASE("messages bound payments") {
  Rng rng(11);
  auto u = ValuationDistribution::uniform(0.0, 1.0);
  const auto spa = AuctionFormat::second_price(0.0);
  const auto fpa = AuctionFormat::first_price(u);
  for (int trial = 0; trial < 200; ++trial) {
    auto v = sample_valuations(u, 4, rng);
    for (const auto& fmt : {spa, fpa}) {
      const auto out = run_auction(fmt, v);
      for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(out.payments[i] <= out.messages[i] + 1e-12);
      }
      REQUIRE(out.winner.has_value());
      // the winner holds the highest valuation (both bid rules are monotone)
      CHECK(v[static_cast<std::size_t>(*out.winner)] ==
            *std::max_element(v.begin(), v.end()));
    }
  }
}

TEST_CASE("first-price equilibrium bids") {
  auto u01 = ValuationDistribution::uniform(0.0, 1.0);
  CHECK(fpa_equilibrium_bid(u01, 2, 0.8) == Catch::Approx(0.4).epsilon(1e-9));
  CHECK(fpa_equilibrium_bid(u01, 3, 0.9) == Catch::Approx(0.6).epsilon(1e-9));

  // lowest type bids the reserve
  auto shifted = ValuationDistribution::uniform(0.2, 1.0);
  CHECK(fpa_equilibrium_bid(shifted, 2, 0.2) == Catch::Approx(0.2));

  // nondecreasing in v
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = i / 100.0;
    const double b = fpa_equilibrium_bid(u01, 2, v);
    CHECK(b >= prev - 1e-12);
    prev = b;
  }

  auto d = ValuationDistribution::discrete({{1.0, 1.0}});
  CHECK_THROWS_AS(fpa_equilibrium_bid(d, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(AuctionFormat::first_price(d), std::invalid_argument);
}

TEST_CASE("first-price auction outcome") {
  auto u01 = ValuationDistribution::uniform(0.0, 1.0);
  const auto out = run_auction(AuctionFormat::first_price(u01),
                               std::vector<double>{0.8, 0.3});
  REQUIRE(out.winner.has_value());
  CHECK(*out.winner == 0);
  CHECK(out.total_payment == Catch::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("truthfulness: exhaustive deviation search on a grid") {
  const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
  // bidder 0 against every opponent pair; every deviation weakly loses
  for (double v : grid) {
    for (double o1 : grid) {
      for (double o2 : grid) {
        const double truthful = spa_payoff({v, o1, o2}, 0, v);
        for (double dev : grid) {
          CHECK(truthful >= spa_payoff({dev, o1, o2}, 0, v) - 1e-12);
        }
      }
    }
  }
  // same check from a non-first position (tie-breaking favors rivals)
  for (double v : grid) {
    for (double o1 : grid) {
      const double truthful = spa_payoff({o1, v}, 1, v);
      for (double dev : grid) {
        CHECK(truthful >= spa_payoff({o1, dev}, 1, v) - 1e-12);
      }
    }
  }
}

TEST_CASE("expected revenue, both formats") {
  auto u01 = ValuationDistribution::uniform(0.0, 1.0);
  Rng rng_a(42), rng_b(43);
  const auto spa = expected_revenue(AuctionFormat::second_price(0.0), u01, 2,
                                    200'000, rng_a);
  CHECK(std::abs(spa.mean - 1.0 / 3) <= 3.0 * spa.se);

  const auto fpa = expected_revenue(AuctionFormat::first_price(u01), u01, 2,
                                    200'000, rng_b);
  const double pooled = std::sqrt(spa.se * spa.se + fpa.se * fpa.se);
  CHECK(std::abs(fpa.mean - spa.mean) <= 3.0 * pooled);

  // degenerate distribution: both formats collapse to the atom value
  auto atom = ValuationDistribution::discrete({{0.7, 1.0}});
  Rng rng_c(44);
  const auto deg = expected_revenue(AuctionFormat::second_price(0.7), atom, 2,
                                    10'000, rng_c);
  CHECK(deg.mean == Catch::Approx(0.7));
  CHECK(deg.se == 0.0);

  Rng rng_d(45);
  CHECK_THROWS_AS(expected_revenue(AuctionFormat::second_price(0.0), u01, 2,
                                   100, rng_d),
                  std::invalid_argument);
}
