#pragma once

// Minimum sum power for a rate vector and the proportional power
// reallocations that meet it.
//
// Inverting the capacity bounds gives the feasible power region
//     P(S) >= (2^(R(S)/W) - 1) N0 W   for every S,
// whose S = E constraint is the minimum sum power. Allocating power in
// proportion to a_j = 2^(R_j/W) - 1 satisfies every other constraint as well.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string_view>
#include <vector>

#include "macfeas/capacity.hpp"
#include "macfeas/error.hpp"
#include "macfeas/membership.hpp"
#include "macfeas/rate_vector.hpp"

namespace macfeas {

enum class AllocationMode { kOptimalMinSum, kFixedSum };

inline std::string_view to_string(AllocationMode m) {
  return m == AllocationMode::kOptimalMinSum ? "optimal-min-sum" : "fixed-sum";
}

struct AllocationResult {
  std::vector<double> powers;  // W
  double sum_power = 0.0;      // W
  AllocationMode mode = AllocationMode::kOptimalMinSum;
  double threshold = 0.0;      // minimum sum power, W
};

namespace detail {

inline void check_channel(double bandwidth, double noise_density) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw DomainError("bandwidth must be positive and finite");
  }
  if (!(noise_density > 0.0) || !std::isfinite(noise_density)) {
    throw DomainError("noise density must be positive and finite");
  }
}

// 2^(r/W) - 1 without cancellation for small r/W.
inline double power_weight(double rate, double bandwidth) {
  return std::expm1(rate / bandwidth * std::numbers::ln2);
}

inline std::vector<double> power_weights(const RateVector& rates, double bandwidth) {
  std::vector<double> a(rates.size());
  for (std::size_t i = 0; i < rates.size(); ++i) a[i] = power_weight(rates[i], bandwidth);
  return a;
}

inline double sum(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace detail

/// (2^(ΣR/W) - 1) N0 W: no split of less total power reaches the rates.
inline double min_sum_power(const RateVector& rates, double bandwidth, double noise_density) {
  detail::check_channel(bandwidth, noise_density);
  rates.validate();
  return detail::power_weight(rates.total(), bandwidth) * noise_density * bandwidth;
}

/// P_j = a_j / Σa · threshold. Spends exactly the minimum sum power and puts
/// the rate vector on the sum-rate face of the resulting region.
inline AllocationResult allocate_optimal(const RateVector& rates, double bandwidth,
                                         double noise_density) {
  const double threshold = min_sum_power(rates, bandwidth, noise_density);
  const auto a = detail::power_weights(rates, bandwidth);
  const double total_weight = detail::sum(a);
  if (!(total_weight > 0.0)) throw DomainError("at least one rate must be positive");
  AllocationResult out;
  out.mode = AllocationMode::kOptimalMinSum;
  out.threshold = threshold;
  out.powers.resize(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out.powers[j] = a[j] * threshold / total_weight;
  out.sum_power = threshold;
  return out;
}

/// P_j = a_j / Σa · sum_power for a budget at or above the threshold.
inline AllocationResult allocate_fixed_sum(const RateVector& rates, double bandwidth,
                                           double noise_density, double sum_power) {
  const double threshold = min_sum_power(rates, bandwidth, noise_density);
  if (!(sum_power >= 0.0) || !std::isfinite(sum_power)) {
    throw DomainError("sum power must be finite and non-negative");
  }
  if (sum_power < threshold * (1.0 - 1e-12)) throw BelowThresholdError(sum_power, threshold);
  const auto a = detail::power_weights(rates, bandwidth);
  const double total_weight = detail::sum(a);
  if (!(total_weight > 0.0)) throw DomainError("at least one rate must be positive");
  AllocationResult out;
  out.mode = AllocationMode::kFixedSum;
  out.threshold = threshold;
  out.powers.resize(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out.powers[j] = a[j] * sum_power / total_weight;
  out.sum_power = sum_power;
  return out;
}

/// Checks P(S) >= (2^((R(S) - tol)/W) - 1) N0 W for every S, the power-domain
/// form of capacity membership with the same tolerance tol as the capacity
/// checks. Above the brute-force cap it defers to check_feasibility_sfm.
/// The verdict comes from the power inequalities; min_gap and the witness are
/// the exact minimum of the rate gap over the same enumeration, as in
/// check_feasibility_bruteforce.
inline FeasibilityVerdict verify_power_feasibility(std::span<const double> powers,
                                                   const RateVector& rates, double bandwidth,
                                                   double noise_density,
                                                   BruteForceOptions brute = {}) {
  if (powers.size() != rates.size()) {
    throw DimensionError("power vector has " + std::to_string(powers.size()) +
                         " entries but the rate vector has " + std::to_string(rates.size()));
  }
  const ChannelConfig cfg{bandwidth, noise_density, {powers.begin(), powers.end()}};
  cfg.validate();
  rates.validate();
  const std::size_t n = cfg.user_count();
  if (n > brute.max_users) return check_feasibility_sfm(cfg, rates);

  const double tol = feasibility_tolerance(cfg);
  const double noise = cfg.noise_power();
  double worst_slack = 0.0;
  double min_gap = 0.0;  // f(∅)
  std::uint64_t min_mask = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t m = 1; m < total; ++m) {
    const SubsetMask s{m};
    const double r = rates.sum(s);
    const double p = cfg.power_sum(s);
    worst_slack = std::min(worst_slack, p - detail::power_weight(r - tol, bandwidth) * noise);
    const double f = detail::shannon_rate(bandwidth, p, noise) - r;
    if (f < min_gap) {
      min_gap = f;
      min_mask = m;
    }
  }
  FeasibilityVerdict v;
  v.method = Method::kBruteForce;
  v.feasible = worst_slack >= 0.0;
  v.witness = SubsetMask{min_mask};
  v.min_gap = min_gap;
  v.lower_bound = min_gap;
  v.evaluations = total - 1;
  return v;
}

}  // namespace macfeas
