#pragma once

// Capacity-region membership through submodular minimization of the gap
// function, plus the method dispatcher used by the command-line tool.

#include <cstddef>
#include <optional>

#include "macfeas/capacity.hpp"
#include "macfeas/sfm.hpp"

namespace macfeas {

/// The gap f(S) = g(S) - R(S) as a minimizer oracle.
inline SubmodularOracle make_gap_oracle(const ChannelConfig& cfg, const RateVector& rates) {
  detail::check_dimensions(cfg, rates);
  // Captured by value: the oracle may outlive the arguments.
  return SubmodularOracle(cfg.user_count(), [cfg, rates](SubsetMask s) {
    if (s.is_empty()) return 0.0;
    return detail::shannon_rate(cfg.bandwidth, cfg.power_sum(s), cfg.noise_power()) - rates.sum(s);
  });
}

struct SfmCheckOptions {
  /// Accuracy of the minimizer in bits/s; defaults to 1e-6 W.
  std::optional<double> epsilon;
  /// Stop as soon as the verdict is proven either way.
  bool early_exit = true;
};

/// Membership by scaling minimization of the gap. With early exit the run
/// stops when some f(S) < -tol is seen (infeasible) or when x⁻(E) > -tol
/// (feasible); `min_gap` is then the best gap seen and `exact` is false.
inline FeasibilityVerdict check_feasibility_sfm(const ChannelConfig& cfg, const RateVector& rates,
                                                SfmCheckOptions opts = {}) {
  cfg.validate();
  detail::check_dimensions(cfg, rates);
  rates.validate();
  const double tol = feasibility_tolerance(cfg);
  auto oracle = make_gap_oracle(cfg, rates);
  SfmOptions sopts;
  sopts.epsilon = opts.epsilon.value_or(1e-6 * cfg.bandwidth);
  if (opts.early_exit) {
    sopts.stop_below = -tol;
    sopts.stop_when_dual_above = -tol;
  }
  const auto cert = minimize(oracle, sopts);

  FeasibilityVerdict v;
  v.method = Method::kSfm;
  v.witness = cert.minimizing_set;
  v.min_gap = cert.min_value;
  v.lower_bound = cert.dual_value;
  v.exact = cert.exact();
  v.feasible = cert.stop == SfmStop::kDualAbove || v.min_gap >= -tol;
  v.evaluations = cert.oracle_calls;
  return v;
}

enum class MethodChoice { kAuto, kBruteForce, kEqualPower, kSfm };

/// auto: equal-power when all powers match, brute force up to the cap,
/// scaling minimization beyond it.
inline FeasibilityVerdict check_feasibility(const ChannelConfig& cfg, const RateVector& rates,
                                            MethodChoice method = MethodChoice::kAuto,
                                            BruteForceOptions brute = {}) {
  switch (method) {
    case MethodChoice::kBruteForce: return check_feasibility_bruteforce(cfg, rates, brute);
    case MethodChoice::kEqualPower: return check_feasibility_equal_power(cfg, rates);
    case MethodChoice::kSfm: return check_feasibility_sfm(cfg, rates);
    case MethodChoice::kAuto: break;
  }
  cfg.validate();
  if (has_equal_powers(cfg)) return check_feasibility_equal_power(cfg, rates);
  if (cfg.user_count() > brute.max_users) return check_feasibility_sfm(cfg, rates);
  return check_feasibility_bruteforce(cfg, rates, brute);
}

}  // namespace macfeas
