#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "auctok/extension.hpp"

using namespace auctok;

namespace {

TwoPeriodConfig make_config(double beta, const ValuationDistribution& dist,
                            int n = 2, double c = 0.0) {
  TwoPeriodConfig cfg;
  cfg.beta = beta;
  cfg.dist = dist;
  cfg.bidders = n;
  cfg.misappropriation_cost = c;
  return cfg;
}

}  // namespace

TEST_CASE("alpha closed form") {
  const double k = 1.0 / 3;
  CHECK(alpha_of(0.7, -1.0, k) == 0.0);
  CHECK(alpha_of(0.0, 2.0, k) == 0.0);
  CHECK(alpha_of(0.3, 0.0, k) == Catch::Approx(0.4058521345772557).epsilon(1e-9));
  // saturation: B1 (1+sigma) = 1.5 above k+1 = 4/3
  CHECK(alpha_of(0.5, 2.0, k) == 1.0);
  // exactly at the knee it is still 1
  CHECK(alpha_of((k + 1.0) / 3.0, 2.0, k) == Catch::Approx(1.0));

  // monotone in sigma and in the payments
  double prev = -1.0;
  for (double sigma : {-1.0, -0.5, 0.0, 1.0, 3.0}) {
    const double a = alpha_of(0.4, sigma, k);
    CHECK(a >= prev);
    prev = a;
  }
  prev = -1.0;
  for (double b1 : {0.0, 0.2, 0.5, 1.0, 2.0}) {
    const double a = alpha_of(b1, 0.5, k);
    CHECK(a >= prev);
    prev = a;
  }
}

TEST_CASE("alpha fixed point agrees with the closed form") {
  const double k = 1.0 / 3;
  for (int i = 0; i <= 30; ++i) {
    const double b1 = 3.0 * i / 30.0;
    for (int j = 0; j <= 30; ++j) {
      const double sigma = -1.0 + 5.0 * j / 30.0;
      const auto fp = alpha_fixed_point_oracle(b1, sigma, 0.0, k);
      CHECK(std::abs(fp.alpha - alpha_of(b1, sigma, k)) <= 1e-9);
    }
  }
}

TEST_CASE("alpha fixed point is tau-invariant") {
  const double k = 0.8;
  const auto base = alpha_fixed_point_oracle(0.6, 0.4, 0.0, k);
  for (double tau : {-0.5, 3.0}) {
    const auto other = alpha_fixed_point_oracle(0.6, 0.4, tau, k);
    CHECK(std::abs(other.alpha - base.alpha) <= 1e-12);
    CHECK(std::abs(other.speculative_share - base.speculative_share) <= 1e-12);
  }
  // full burn: investors hold everything, no auctioneer stake
  const auto burn = alpha_fixed_point_oracle(0.6, -1.0, 0.0, k);
  CHECK(burn.alpha == 0.0);
  CHECK(burn.speculative_share == 1.0);
}

TEST_CASE("period-2 equilibrium block") {
  auto eq = token_equilibrium_period2(0.0, 0.5, 1.0);
  CHECK(eq.effort == 0.0);
  CHECK(eq.investor_value == Catch::Approx(0.5));

  eq = token_equilibrium_period2(1.0, 0.5, 2.0);
  CHECK(eq.investor_value == 0.0);
  CHECK(eq.expected_price == Catch::Approx(0.75));

  eq = token_equilibrium_period2(0.4058521345772557, 1.0 / 3, 1.0);
  CHECK(eq.investor_value == Catch::Approx(0.4392).margin(1e-4));

  // the effort problem's first-order condition holds at e = alpha:
  // d/de [alpha (k + e) - e^2/2] = alpha - e
  const double alpha = 0.37;
  CHECK(std::abs(alpha - token_equilibrium_period2(alpha, 0.5, 1.0).effort) <=
        1e-12);
}

TEST_CASE("token utility endpoints") {
  auto u12 = ValuationDistribution::uniform(1.0, 2.0);
  auto cfg = make_config(0.9, u12);
  const double k = 4.0 / 3;

  // full burn: zero effort, everything front-loaded
  CHECK(token_auctioneer_utility(-1.0, cfg) ==
        Catch::Approx(2 * k).epsilon(1e-8));

  // at the sigma ceiling alpha is 1 a.s.: matches the unfinanced dollar value
  const double sigma_bar = sigma_upper_bound(cfg);
  CHECK(sigma_bar == Catch::Approx((k + 1.0) / 1.0 - 1.0).epsilon(1e-9));
  CHECK(token_auctioneer_utility(sigma_bar, cfg) ==
        Catch::Approx(k + 0.9 * (k + 0.5)).margin(1e-8));
  const auto dollar = dollar_regime(cfg, std::nullopt);
  CHECK(std::abs(token_auctioneer_utility(sigma_bar, cfg) - dollar.utility) <=
        1e-8);
}

TEST_CASE("token utility is nondecreasing in sigma when beta = 1") {
  auto u12 = ValuationDistribution::uniform(1.0, 2.0);
  auto cfg = make_config(1.0, u12);
  const double sigma_bar = sigma_upper_bound(cfg);
  double prev = -1e9;
  for (int i = 0; i <= 40; ++i) {
    const double s = -1.0 + (sigma_bar + 1.0) * i / 40.0;
    const double u = token_auctioneer_utility(s, cfg);
    CHECK(u >= prev - 1e-10);
    prev = u;
  }
}

TEST_CASE("sigma optimization: degenerate payment law has a calculus answer") {
  // single atom at v0: B1 = v0 = k deterministically; the first-order
  // condition 1 - k - 2 alpha + beta (k + alpha) = 0 gives the target alpha,
  // and sigma follows from alpha (k + alpha) = v0 (1 + sigma).
  const double v0 = 1.0;
  const double beta = 0.5;
  auto atom = ValuationDistribution::discrete({{v0, 1.0}});
  auto cfg = make_config(beta, atom);
  const double alpha_star = (1.0 - (1.0 - beta) * v0) / (2.0 - beta);
  const double sigma_star = alpha_star * (v0 + alpha_star) / v0 - 1.0;

  const auto opt = optimize_sigma(cfg);
  CHECK(std::abs(opt.sigma - sigma_star) <= 1e-6);
  CHECK(std::abs(opt.expected_alpha - alpha_star) <= 1e-6);
  const double expected_u =
      v0 + (1 - alpha_star) * (v0 + alpha_star) +
      beta * (alpha_star * (v0 + alpha_star) - 0.5 * alpha_star * alpha_star);
  CHECK(opt.utility == Catch::Approx(expected_u).epsilon(1e-8));
}

TEST_CASE("sigma optimization: interior optimum, partial effort") {
  auto u12 = ValuationDistribution::uniform(1.0, 2.0);
  for (double beta : {0.3, 0.6, 0.9}) {
    auto cfg = make_config(beta, u12);
    const auto opt = optimize_sigma(cfg);
    CHECK(opt.expected_alpha < 1.0);
    CHECK_FALSE(opt.boundary);
    const double at_bar =
        token_auctioneer_utility(sigma_upper_bound(cfg), cfg);
    CHECK(opt.utility > at_bar);
    CHECK(opt.utility >= token_auctioneer_utility(-1.0, cfg));
  }
}

TEST_CASE("dollar regime without financing") {
  auto u01 = ValuationDistribution::uniform(0.0, 1.0);
  auto cfg = make_config(0.9, u01);
  const auto out = dollar_regime(cfg, std::nullopt);
  CHECK(out.effort == Catch::Approx(1.0));
  CHECK(out.utility == Catch::Approx(1.0 / 3 + 0.9 * (1.0 / 3 + 0.5))
                           .epsilon(1e-8));  // 1.0833...
}

TEST_CASE("dollar regime with the efficient security") {
  auto u01 = ValuationDistribution::uniform(0.0, 1.0);
  auto cfg = make_config(0.9, u01, 2, /*c=*/5.0);
  const auto contract = first_best_contract(cfg);
  CHECK(contract.y1 == Catch::Approx(1.0 / 3 + 1.0).epsilon(1e-8));
  const auto out = dollar_regime(cfg, contract);
  CHECK(out.effort == Catch::Approx(1.0));
  CHECK(out.utility ==
        Catch::Approx(1.0 / 3 + (1.0 / 3 + 1.0) - 0.45).epsilon(1e-8));
}

TEST_CASE("null contract reduces to the unfinanced outcome regardless of c") {
  auto u01 = ValuationDistribution::uniform(0.0, 1.0);
  for (double c : {0.0, 1.0, 10.0}) {
    auto cfg = make_config(0.9, u01, 2, c);
    const auto null_contract = make_rational_contract(cfg, 0.0, 0.0, 0.5);
    CHECK(null_contract.y1 == 0.0);
    const auto with = dollar_regime(cfg, null_contract);
    const auto without = dollar_regime(cfg, std::nullopt);
    CHECK(with.utility == Catch::Approx(without.utility).margin(1e-12));
    CHECK(with.effort == Catch::Approx(without.effort).margin(1e-12));
  }
}

TEST_CASE("contract validation") {
  auto u01 = ValuationDistribution::uniform(0.0, 1.0);
  auto cfg = make_config(0.9, u01, 2, /*c=*/0.5);
  // state-wise payments above c are not credible
  CHECK_THROWS_AS(make_rational_contract(cfg, 0.4, 0.2, 0.5),
                  std::invalid_argument);
  // y1 out of line with the induced effort violates rationality
  ContractSpec bad = make_rational_contract(cfg, 0.3, 0.1, 0.8);
  bad.y1 += 0.01;
  CHECK_THROWS_AS(dollar_regime(cfg, bad), std::invalid_argument);
}

TEST_CASE("optimized dollar value: flat pledge at the cap") {
  auto u12 = ValuationDistribution::uniform(1.0, 2.0);
  const double k = 4.0 / 3;
  const double beta = 0.9;
  for (double c : {0.0, 0.5, 1.0, 3.0}) {
    auto cfg = make_config(beta, u12, 2, c);
    const auto opt = optimize_dollar_contract(cfg);
    const double expected =
        k + (1 - beta) * std::min(c, k + 1.0) + beta * (k + 0.5);
    CHECK(opt.outcome.utility == Catch::Approx(expected).margin(1e-9));
    CHECK(opt.outcome.effort == Catch::Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("regime comparison across the hiding-cost grid") {
  auto u12 = ValuationDistribution::uniform(1.0, 2.0);
  auto cfg = make_config(0.9, u12);
  const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 5.0};
  const auto rep = compare_regimes(cfg, grid);
  REQUIRE(rep.rows.size() == grid.size());

  // token value is c-invariant; dollar value climbs with c
  for (const auto& row : rep.rows) {
    CHECK(row.token_utility == Catch::Approx(rep.token_utility));
  }
  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    CHECK(rep.rows[i + 1].dollar_utility >= rep.rows[i].dollar_utility - 1e-9);
  }

  // tokens win without contracting; dollars win at the top of the grid
  CHECK(rep.rows.front().dollar_utility < rep.token_utility);
  CHECK(rep.rows.back().dollar_utility >= rep.token_utility);
  REQUIRE(rep.crossing_c.has_value());
  CHECK(*rep.crossing_c > 0.0);
  CHECK(rep.expected_alpha < 1.0);
}
