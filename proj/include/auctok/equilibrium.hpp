#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "auctok/auction.hpp"
#include "auctok/errors.hpp"
#include "auctok/market.hpp"
#include "auctok/rng.hpp"
#include "auctok/valuation.hpp"

namespace auctok {

enum class SolveMethod { quadrature, monte_carlo };

struct SolverOptions {
  SolveMethod method = SolveMethod::quadrature;
  std::uint64_t paths = 1'000'000;  // monte_carlo only
  std::uint64_t seed = 1;           // monte_carlo only
  double tol = 1e-10;               // quadrature only
};

// Backward-solved sequence of expected market caps P_t = E[p_t * M_t].
//
// Prices are degree-(-1) homogeneous in the token stock, so the recursion
// lives entirely in market-cap space: one scalar expectation per period,
// no state grid. P_{T+1} = 0 by convention; the induced expected price in
// any period is P_t divided by whatever the realized stock happens to be.
struct EquilibriumProfile {
  int horizon = 0;
  double beta = 0.0;
  int bidders = 0;
  ValuationDistribution dist = ValuationDistribution::uniform(0.0, 1.0);
  MonetaryPolicy policy;
  std::vector<double> market_caps;       // P_1..P_T
  std::vector<double> speculation_prob;  // P((1+sigma_t) B < beta P_{t+1})
  std::vector<double> standard_errors;   // zero for exact methods

  // P_t with the terminal convention P_{T+1} = 0. 1-based period index.
  double market_cap(int t) const {
    require(t >= 1 && t <= horizon + 1, "market_cap: period out of range");
    if (t == horizon + 1) return 0.0;
    return market_caps[static_cast<std::size_t>(t - 1)];
  }

  bool matches(const ValuationDistribution& d, int n, int T, double b,
               const MonetaryPolicy& p) const {
    return dist == d && bidders == n && horizon == T && beta == b &&
           policy == p;
  }
};

inline double expected_price(const EquilibriumProfile& profile, int t,
                             double stock) {
  require(stock > 0.0, "expected_price: stock must be positive");
  return profile.market_cap(t) / stock;
}

namespace detail {

// One backward step: P_t = E[max{B, beta*P_next - sigma*B}] plus the
// probability that the speculative branch is the strict maximum.
struct BackwardStep {
  double market_cap = 0.0;
  double spec_prob = 0.0;
};

inline BackwardStep backward_step_exact(const PaymentLaw& law, double sigma,
                                        double beta, double P_next,
                                        double tol) {
  BackwardStep step;
  const auto cap = [&](double b) {
    return market_cap_fixed_point(b, sigma, beta, P_next);
  };
  if (law.is_discrete()) {
    double mean = 0.0, prob = 0.0;
    for (const Atom& a : law.pmf()) {
      mean += a.prob * cap(a.value);
      if ((1.0 + sigma) * a.value < beta * P_next) prob += a.prob;
    }
    step.market_cap = mean;
    step.spec_prob = prob;
    return step;
  }
  // kink of the max{...} in B
  std::array<double, 1> kink{};
  std::span<const double> breaks{};
  if (1.0 + sigma > 0.0) {
    kink[0] = beta * P_next / (1.0 + sigma);
    breaks = std::span<const double>(kink);
  }
  step.market_cap = law.expect(cap, breaks, tol);
  step.spec_prob =
      (1.0 + sigma > 0.0)
          ? law.prob_below(beta * P_next / (1.0 + sigma))
          : (beta * P_next > 0.0 ? 1.0 : 0.0);  // sigma = -1: always binds
  return step;
}

}  // namespace detail

// Solve the price recursion for a horizon, policy, and valuation law.
// Quadrature is exact for uniform/discrete laws (tolerance ~1e-10);
// monte_carlo reports a per-period standard error that includes the
// error propagated from later periods.
inline EquilibriumProfile solve_backward(const ValuationDistribution& dist,
                                         int n, int T, double beta,
                                         const MonetaryPolicy& policy,
                                         const SolverOptions& options = {}) {
  require(T >= 1, "solve_backward: horizon must be >= 1");
  require(beta > 0.0 && beta < 1.0, "solve_backward: beta must be in (0,1)");
  policy.validate();
  require(policy.horizon() == T,
          "solve_backward: policy length does not match the horizon");

  const PaymentLaw law(dist, n);
  EquilibriumProfile profile;
  profile.horizon = T;
  profile.beta = beta;
  profile.bidders = n;
  profile.dist = dist;
  profile.policy = policy;
  profile.market_caps.assign(static_cast<std::size_t>(T), 0.0);
  profile.speculation_prob.assign(static_cast<std::size_t>(T), 0.0);
  profile.standard_errors.assign(static_cast<std::size_t>(T), 0.0);

  double P_next = 0.0;
  double se_next = 0.0;
  for (int t = T; t >= 1; --t) {
    const double sigma = policy.sigma[static_cast<std::size_t>(t - 1)];
    if (options.method == SolveMethod::quadrature) {
      const auto step =
          detail::backward_step_exact(law, sigma, beta, P_next, options.tol);
      profile.market_caps[t - 1] = step.market_cap;
      profile.speculation_prob[t - 1] = step.spec_prob;
    } else {
      Rng rng(options.seed, stream_id(StreamKind::solver,
                                      static_cast<std::uint64_t>(t)));
      MeanAccumulator acc;
      std::uint64_t hits = 0;
      for (std::uint64_t i = 0; i < options.paths; ++i) {
        const double b = law.sample(rng);
        acc.add(market_cap_fixed_point(b, sigma, beta, P_next));
        if ((1.0 + sigma) * b < beta * P_next) ++hits;
      }
      profile.market_caps[t - 1] = acc.mean();
      profile.speculation_prob[t - 1] =
          static_cast<double>(hits) / static_cast<double>(options.paths);
      // d P_t / d P_next = beta * P(speculation); propagate in quadrature
      const double carried = beta * profile.speculation_prob[t - 1] * se_next;
      profile.standard_errors[t - 1] =
          std::sqrt(acc.se() * acc.se() + carried * carried);
    }
    P_next = profile.market_caps[t - 1];
    se_next = profile.standard_errors[t - 1];
  }
  return profile;
}

// Exact enumeration oracle for small discrete instances: runs the actual
// auction on every valuation profile instead of going through the payment
// law, so it independently checks both the law and the recursion.
inline EquilibriumProfile solve_discrete_oracle(const ValuationDistribution& dist,
                                                int n, int T, double beta,
                                                const MonetaryPolicy& policy) {
  require(dist.is_discrete(), "solve_discrete_oracle: discrete inputs only");
  require(dist.atoms().size() <= 8, "solve_discrete_oracle: at most 8 atoms");
  require(n >= 2 && n <= 4, "solve_discrete_oracle: n in [2,4]");
  require(T >= 1 && T <= 4, "solve_discrete_oracle: T in [1,4]");
  require(beta > 0.0 && beta < 1.0, "solve_discrete_oracle: beta in (0,1)");
  policy.validate();
  require(policy.horizon() == T, "solve_discrete_oracle: policy length mismatch");

  // law of B by brute force over all m^n profiles
  const auto& atoms = dist.atoms();
  const auto format = AuctionFormat::second_price(dist.lower());
  std::map<double, double> pmf;
  std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
  std::vector<double> vals(static_cast<std::size_t>(n), 0.0);
  bool done = false;
  while (!done) {
    double prob = 1.0;
    for (int i = 0; i < n; ++i) {
      vals[i] = atoms[idx[i]].value;
      prob *= atoms[idx[i]].prob;
    }
    pmf[run_auction(format, vals).total_payment] += prob;
    // odometer increment
    done = true;
    for (int i = 0; i < n; ++i) {
      if (++idx[i] < atoms.size()) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
  }

  EquilibriumProfile profile;
  profile.horizon = T;
  profile.beta = beta;
  profile.bidders = n;
  profile.dist = dist;
  profile.policy = policy;
  profile.market_caps.assign(static_cast<std::size_t>(T), 0.0);
  profile.speculation_prob.assign(static_cast<std::size_t>(T), 0.0);
  profile.standard_errors.assign(static_cast<std::size_t>(T), 0.0);

  double P_next = 0.0;
  for (int t = T; t >= 1; --t) {
    const double sigma = policy.sigma[static_cast<std::size_t>(t - 1)];
    double mean = 0.0, prob = 0.0;
    for (const auto& [b, p] : pmf) {
      mean += p * std::max(b, beta * P_next - sigma * b);
      if ((1.0 + sigma) * b < beta * P_next) prob += p;
    }
    profile.market_caps[t - 1] = mean;
    profile.speculation_prob[t - 1] = prob;
    P_next = mean;
  }
  return profile;
}

}  // namespace auctok
