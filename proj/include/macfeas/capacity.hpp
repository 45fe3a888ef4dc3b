#pragma once

// Gaussian multiple-access capacity region as a polymatroid.
//
// For a subset S of users the sum-rate bound is
//     g(S) = W log2(1 + P(S) / (N0 W))
// and a rate vector R is achievable iff the gap f(S) = g(S) - R(S) is
// non-negative for every S. Both g and f are submodular with g(∅) = f(∅) = 0.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "macfeas/error.hpp"
#include "macfeas/rate_vector.hpp"
#include "macfeas/subset.hpp"

namespace macfeas {

struct ChannelConfig {
  double bandwidth = 0.0;      // W, Hz
  double noise_density = 0.0;  // N0, W/Hz; noise power over the band is N0 W
  std::vector<double> powers;  // W per user

  std::size_t user_count() const { return powers.size(); }

  double noise_power() const { return noise_density * bandwidth; }

  double power_sum(SubsetMask s) const {
    double acc = 0.0;
    for (auto i : s.members()) acc += powers[i];
    return acc;
  }

  void validate() const {
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
      throw DomainError("bandwidth must be positive and finite");
    }
    if (!(noise_density > 0.0) || !std::isfinite(noise_density)) {
      throw DomainError("noise density must be positive and finite");
    }
    if (powers.empty()) throw DomainError("at least one user is required");
    if (powers.size() > kMaxUsers) {
      throw UserCountExceedsCap("at most " + std::to_string(kMaxUsers) + " users are supported");
    }
    for (std::size_t i = 0; i < powers.size(); ++i) {
      if (!(powers[i] >= 0.0) || !std::isfinite(powers[i])) {
        throw UserError(i, "power must be finite and non-negative");
      }
    }
  }
};

enum class Method { kBruteForce, kEqualPower, kSfm };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::kBruteForce: return "brute-force";
    case Method::kEqualPower: return "equal-power";
    case Method::kSfm: return "sfm";
  }
  return "?";
}

/// Outcome of a capacity-region membership test.
///
/// `min_gap` is min_S f(S) when `exact` is set. Methods that stop as soon as
/// the verdict is proven report the best gap they saw instead, together with
/// `lower_bound`, a certified lower bound on the true minimum.
struct FeasibilityVerdict {
  bool feasible = true;
  double min_gap = 0.0;
  SubsetMask witness;
  Method method = Method::kBruteForce;
  bool exact = true;
  double lower_bound = 0.0;
  std::uint64_t evaluations = 0;
};

/// Slack below zero that still counts as feasible, in bits/s. Boundary points
/// such as a minimum-sum-power allocation land exactly on a face.
inline double feasibility_tolerance(const ChannelConfig& cfg) { return 1e-9 * cfg.bandwidth; }

namespace detail {

inline double shannon_rate(double bandwidth, double power, double noise_power) {
  return bandwidth * std::log1p(power / noise_power) / std::numbers::ln2;
}

inline void check_dimensions(const ChannelConfig& cfg, const RateVector& rates) {
  if (rates.size() != cfg.user_count()) {
    throw DimensionError("rate vector has " + std::to_string(rates.size()) +
                         " entries but the channel has " + std::to_string(cfg.user_count()) +
                         " users");
  }
}

inline void check_subset(const ChannelConfig& cfg, SubsetMask s) {
  if (!s.fits(cfg.user_count())) {
    throw DimensionError("subset " + s.to_string() + " has members beyond user " +
                         std::to_string(cfg.user_count()));
  }
}

}  // namespace detail

/// g(S) = W log2(1 + P(S)/(N0 W)).
inline double capacity_of_subset(const ChannelConfig& cfg, SubsetMask s) {
  detail::check_subset(cfg, s);
  if (s.is_empty()) return 0.0;
  return detail::shannon_rate(cfg.bandwidth, cfg.power_sum(s), cfg.noise_power());
}

/// f(S) = g(S) - R(S).
inline double gap(const ChannelConfig& cfg, const RateVector& rates, SubsetMask s) {
  detail::check_dimensions(cfg, rates);
  if (s.is_empty()) return 0.0;
  return capacity_of_subset(cfg, s) - rates.sum(s);
}

struct BruteForceOptions {
  std::size_t max_users = 25;
};

/// Evaluates f on all 2^N subsets in increasing bitmask order. Ties on the
/// minimum go to the smallest bitmask, so a feasible instance whose minimum is
/// attained at ∅ reports the empty witness.
inline FeasibilityVerdict check_feasibility_bruteforce(const ChannelConfig& cfg,
                                                       const RateVector& rates,
                                                       BruteForceOptions opts = {}) {
  cfg.validate();
  detail::check_dimensions(cfg, rates);
  rates.validate();
  const std::size_t n = cfg.user_count();
  if (n > opts.max_users || n > 40) {
    throw UserCountExceedsCap("exhaustive check of " + std::to_string(n) +
                              " users exceeds the cap of " + std::to_string(opts.max_users));
  }

  // P(S) and R(S) split into low/high halves of the mask so that each subset
  // costs O(1) and the rounding does not depend on enumeration order.
  const std::size_t lo_bits = n / 2;
  const std::size_t hi_bits = n - lo_bits;
  auto half_sums = [&](std::size_t offset, std::size_t bits, const std::vector<double>& v) {
    std::vector<double> t(std::size_t{1} << bits, 0.0);
    for (std::uint64_t m = 1; m < t.size(); ++m) {
      const auto low = static_cast<std::size_t>(std::countr_zero(m));
      t[m] = t[m & (m - 1)] + v[offset + low];
    }
    return t;
  };
  const auto p_lo = half_sums(0, lo_bits, cfg.powers);
  const auto p_hi = half_sums(lo_bits, hi_bits, cfg.powers);
  const auto r_lo = half_sums(0, lo_bits, rates.rates);
  const auto r_hi = half_sums(lo_bits, hi_bits, rates.rates);

  const double w = cfg.bandwidth;
  const double inv_noise = 1.0 / cfg.noise_power();
  const double scale = w / std::numbers::ln2;
  const std::uint64_t lo_mask = (std::uint64_t{1} << lo_bits) - 1;
  const std::uint64_t total = std::uint64_t{1} << n;

  double best = 0.0;  // f(∅)
  std::uint64_t best_mask = 0;
  for (std::uint64_t m = 1; m < total; ++m) {
    const std::uint64_t l = m & lo_mask;
    const std::uint64_t h = m >> lo_bits;
    const double f = scale * std::log1p((p_lo[l] + p_hi[h]) * inv_noise) - (r_lo[l] + r_hi[h]);
    if (f < best) {
      best = f;
      best_mask = m;
    }
  }

  FeasibilityVerdict v;
  v.method = Method::kBruteForce;
  v.witness = SubsetMask{best_mask};
  v.min_gap = gap(cfg, rates, v.witness);
  v.lower_bound = v.min_gap;
  v.feasible = v.min_gap >= -feasibility_tolerance(cfg);
  v.evaluations = total - 1;
  return v;
}

/// True when every power equals the first within relative 1e-12.
inline bool has_equal_powers(const ChannelConfig& cfg) {
  if (cfg.powers.empty()) return true;
  const double p0 = cfg.powers.front();
  const double tol = 1e-12 * std::max(std::abs(p0), std::numeric_limits<double>::min());
  return std::all_of(cfg.powers.begin(), cfg.powers.end(),
                     [&](double p) { return std::abs(p - p0) <= tol; });
}

/// Equal-power membership test: with a common power P the subset bound
/// depends only on |S|, so the binding subsets are the prefixes of the rates
/// sorted in decreasing order and N inequalities decide membership.
inline FeasibilityVerdict check_feasibility_equal_power(const ChannelConfig& cfg,
                                                        const RateVector& rates) {
  cfg.validate();
  detail::check_dimensions(cfg, rates);
  rates.validate();
  if (!has_equal_powers(cfg)) {
    throw UnequalPowersError("equal-power check requires identical user powers");
  }
  const std::size_t n = cfg.user_count();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rates[a] > rates[b]; });

  FeasibilityVerdict v;
  v.method = Method::kEqualPower;
  SubsetMask prefix;
  for (std::size_t k = 0; k < n; ++k) {
    prefix = prefix.with(order[k]);
    const double f = gap(cfg, rates, prefix);
    if (f < v.min_gap) {
      v.min_gap = f;
      v.witness = prefix;
    }
  }
  v.lower_bound = v.min_gap;
  v.feasible = v.min_gap >= -feasibility_tolerance(cfg);
  v.evaluations = n;
  return v;
}

}  // namespace macfeas
