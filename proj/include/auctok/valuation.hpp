#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "auctok/errors.hpp"
#include "auctok/quadrature.hpp"
#include "auctok/rng.hpp"

namespace auctok {

constexpr double kProbTol = 1e-12;

struct Atom {
  double value = 0.0;
  double prob = 0.0;
};

// Law of per-period private values. Continuous support is uniform only;
// any other shape is expressed as a discrete grid, which keeps every
// expectation either closed-form or an exact finite sum.
class ValuationDistribution {
 public:
  enum class Kind { uniform, discrete };

  static ValuationDistribution uniform(double lo, double hi) {
    require(lo >= 0.0, "uniform support: lower bound must be >= 0");
    require(hi >= lo, "uniform support: upper bound must be >= lower bound");
    ValuationDistribution d;
    d.kind_ = Kind::uniform;
    d.lo_ = lo;
    d.hi_ = hi;
    return d;
  }

  static ValuationDistribution discrete(std::vector<Atom> atoms) {
    require(!atoms.empty(), "discrete distribution: needs at least one atom");
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.value < b.value; });
    // merge duplicate support points
    std::vector<Atom> merged;
    for (const Atom& a : atoms) {
      require(a.prob >= 0.0, "discrete distribution: negative probability");
      require(a.value >= 0.0, "discrete distribution: negative value");
      if (!merged.empty() && a.value == merged.back().value) {
        merged.back().prob += a.prob;
      } else {
        merged.push_back(a);
      }
    }
    double total = 0.0;
    for (const Atom& a : merged) total += a.prob;
    require(std::abs(total - 1.0) <= kProbTol,
            "discrete distribution: probabilities must sum to 1 (within 1e-12)");
    ValuationDistribution d;
    d.kind_ = Kind::discrete;
    d.atoms_ = std::move(merged);
    d.lo_ = d.atoms_.front().value;
    d.hi_ = d.atoms_.back().value;
    return d;
  }

  Kind kind() const { return kind_; }
  bool is_continuous() const { return kind_ == Kind::uniform; }
  bool is_discrete() const { return kind_ == Kind::discrete; }
  double lower() const { return lo_; }
  double upper() const { return hi_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  double cdf(double v) const {
    if (is_continuous()) {
      if (v < lo_) return 0.0;
      if (v >= hi_) return 1.0;
      return hi_ > lo_ ? (v - lo_) / (hi_ - lo_) : 1.0;
    }
    double acc = 0.0;
    for (const Atom& a : atoms_) {
      if (a.value <= v) acc += a.prob;
    }
    return std::min(acc, 1.0);
  }

  // Density; defined for the continuous case only.
  double pdf(double v) const {
    require(is_continuous(), "pdf: discrete distribution has no density");
    if (v < lo_ || v > hi_ || hi_ == lo_) return 0.0;
    return 1.0 / (hi_ - lo_);
  }

  double sample(Rng& rng) const {
    if (is_continuous()) return rng.uniform(lo_, hi_);
    const double u = rng.uniform01();
    double acc = 0.0;
    for (const Atom& a : atoms_) {
      acc += a.prob;
      if (u < acc) return a.value;
    }
    return atoms_.back().value;
  }

  bool operator==(const ValuationDistribution& o) const {
    if (kind_ != o.kind_ || lo_ != o.lo_ || hi_ != o.hi_) return false;
    if (atoms_.size() != o.atoms_.size()) return false;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (atoms_[i].value != o.atoms_[i].value || atoms_[i].prob != o.atoms_[i].prob)
        return false;
    }
    return true;
  }

 private:
  Kind kind_ = Kind::uniform;
  double lo_ = 0.0;
  double hi_ = 1.0;
  std::vector<Atom> atoms_;  // discrete only, sorted, deduplicated
};

inline std::vector<double> sample_valuations(const ValuationDistribution& dist,
                                             int n, Rng& rng) {
  require(n >= 2, "sample_valuations: the model assumes n >= 2 bidders");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = dist.sample(rng);
  return v;
}

namespace detail {

// P(second-highest of n i.i.d. draws <= x) = F^n + n F^{n-1}(1-F):
// at most one draw above x. Holds for any distribution, atoms included.
inline double second_highest_cdf(double F, int n) {
  const double Fn1 = std::pow(F, n - 1);
  return Fn1 * F + n * Fn1 * (1.0 - F);
}

inline double highest_cdf(double F, int n) { return std::pow(F, n); }

// Exact pmf of an order-statistic given the atom grid and a cdf transform.
template <class CdfTransform>
std::vector<Atom> order_stat_pmf(const ValuationDistribution& dist, int n,
                                 CdfTransform&& tr) {
  std::vector<Atom> pmf;
  pmf.reserve(dist.atoms().size());
  double prev = 0.0;
  for (const Atom& a : dist.atoms()) {
    const double here = tr(dist.cdf(a.value), n);
    const double p = here - prev;
    prev = here;
    if (p > 0.0) pmf.push_back({a.value, p});
  }
  return pmf;
}

}  // namespace detail

// Expected second-highest valuation k: the per-period expected payment
// under the second-price format with reserve at the support's lower bound.
inline double expected_second_highest(const ValuationDistribution& dist, int n) {
  require(n >= 2, "expected_second_highest: n >= 2 required");
  if (dist.is_discrete()) {
    double mean = 0.0;
    for (const Atom& a : detail::order_stat_pmf(dist, n, detail::second_highest_cdf))
      mean += a.value * a.prob;
    return mean;
  }
  if (dist.upper() == dist.lower()) return dist.lower();
  // density of the (n-1)-th order statistic: n(n-1) F^{n-2} (1-F) f
  const auto integrand = [&](double x) {
    const double F = dist.cdf(x);
    return x * n * (n - 1) * std::pow(F, n - 2) * (1.0 - F) * dist.pdf(x);
  };
  return integrate(integrand, dist.lower(), dist.upper(), 1e-10);
}

inline double expected_highest(const ValuationDistribution& dist, int n) {
  require(n >= 1, "expected_highest: n >= 1 required");
  if (dist.is_discrete()) {
    double mean = 0.0;
    for (const Atom& a : detail::order_stat_pmf(dist, n, detail::highest_cdf))
      mean += a.value * a.prob;
    return mean;
  }
  if (dist.upper() == dist.lower()) return dist.lower();
  const auto integrand = [&](double x) {
    const double F = dist.cdf(x);
    return x * n * std::pow(F, n - 1) * dist.pdf(x);
  };
  return integrate(integrand, dist.lower(), dist.upper(), 1e-10);
}

// Per-bidder ex-ante auction surplus g = E[max{v_i - v_(2nd), 0}].
// Continuous case via g = integral of F^{n-1}(1-F); discrete case by exact
// convolution of own value with the max of the n-1 rivals. Ties earn zero
// surplus, so lowest-index tie-breaking keeps bidders ex-ante symmetric.
inline double expected_bidder_surplus(const ValuationDistribution& dist, int n) {
  require(n >= 2, "expected_bidder_surplus: n >= 2 required");
  if (dist.is_continuous()) {
    if (dist.upper() == dist.lower()) return 0.0;
    const auto integrand = [&](double y) {
      const double F = dist.cdf(y);
      return std::pow(F, n - 1) * (1.0 - F);
    };
    return integrate(integrand, dist.lower(), dist.upper(), 1e-10);
  }
  // law of the strongest rival
  std::vector<Atom> rival;
  double prev = 0.0;
  for (const Atom& a : dist.atoms()) {
    const double here = std::pow(dist.cdf(a.value), n - 1);
    if (here - prev > 0.0) rival.push_back({a.value, here - prev});
    prev = here;
  }
  double g = 0.0;
  for (const Atom& own : dist.atoms()) {
    for (const Atom& r : rival) {
      if (own.value > r.value) g += own.prob * r.prob * (own.value - r.value);
    }
  }
  return g;
}

// Diagnostic for the hazard condition v f(v) >= 1 - F(v) (discrete analogue:
// v_j p_j >= 1 - F(v_j)). When it fails, a reserve at the support's lower
// bound is not guaranteed revenue-maximizing; callers may still proceed.
inline bool regularity_check(const ValuationDistribution& dist) {
  if (dist.is_discrete()) {
    for (const Atom& a : dist.atoms()) {
      if (a.value * a.prob < 1.0 - dist.cdf(a.value) - kProbTol) return false;
    }
    return true;
  }
  if (dist.upper() == dist.lower()) return true;
  constexpr int kGrid = 2001;
  for (int i = 0; i < kGrid; ++i) {
    const double v = dist.lower() +
                     (dist.upper() - dist.lower()) * i / double(kGrid - 1);
    if (v * dist.pdf(v) < 1.0 - dist.cdf(v) - kProbTol) return false;
  }
  return true;
}

// Law of the period payment total B (the second-highest order statistic
// under the second-price format with reserve at the lower support bound).
// Exposes exact pmf for discrete inputs, closed-form density for uniform,
// a sampler, and expectations of functions of B via quadrature / atom sums.
class PaymentLaw {
 public:
  PaymentLaw(ValuationDistribution dist, int n)
      : dist_(std::move(dist)), n_(n) {
    require(n >= 2, "PaymentLaw: n >= 2 required");
    if (dist_.is_discrete()) {
      pmf_ = detail::order_stat_pmf(dist_, n_, detail::second_highest_cdf);
    }
  }

  const ValuationDistribution& dist() const { return dist_; }
  int bidders() const { return n_; }
  double lower() const { return dist_.lower(); }
  double upper() const { return dist_.upper(); }
  bool is_discrete() const { return dist_.is_discrete(); }

  // Exact probability mass function (discrete inputs only).
  const std::vector<Atom>& pmf() const {
    require(is_discrete(), "PaymentLaw::pmf: continuous law has no pmf");
    return pmf_;
  }

  double pdf(double x) const {
    require(!is_discrete(), "PaymentLaw::pdf: discrete law has a pmf, not a density");
    const double F = dist_.cdf(x);
    return n_ * (n_ - 1) * std::pow(F, n_ - 2) * (1.0 - F) * dist_.pdf(x);
  }

  double cdf(double x) const {
    return detail::second_highest_cdf(dist_.cdf(x), n_);
  }

  double mean() const {
    return expected_second_highest(dist_, n_);
  }

  // One draw of B: draw the full valuation profile, keep the second-highest.
  double sample(Rng& rng) const {
    double top = -1.0, second = -1.0;
    for (int i = 0; i < n_; ++i) {
      const double v = dist_.sample(rng);
      if (v > top) {
        second = top;
        top = v;
      } else if (v > second) {
        second = v;
      }
    }
    return second;
  }

  // E[f(B)]; breakpoints mark kinks of f so each quadrature panel is smooth.
  template <std::invocable<double> F>
  double expect(F&& f, std::span<const double> breaks = {},
                double tol = 1e-10) const {
    if (is_discrete()) {
      double acc = 0.0;
      for (const Atom& a : pmf_) acc += a.prob * f(a.value);
      return acc;
    }
    if (upper() == lower()) return f(lower());
    const auto integrand = [&](double x) { return f(x) * pdf(x); };
    return integrate(integrand, lower(), upper(), breaks, tol);
  }

  // P(B < x) with strict inequality (matters only for the discrete case).
  double prob_below(double x) const {
    if (is_discrete()) {
      double acc = 0.0;
      for (const Atom& a : pmf_) {
        if (a.value < x) acc += a.prob;
      }
      return acc;
    }
    return cdf(x);
  }

 private:
  ValuationDistribution dist_;
  int n_;
  std::vector<Atom> pmf_;
};

inline PaymentLaw total_payment_distribution(const ValuationDistribution& dist,
                                             int n) {
  return PaymentLaw(dist, n);
}

}  // namespace auctok
