#pragma once

// Delay requirement -> service rate conversion for Poisson arrivals.
//
// Packets have a fixed length of one bit, so packets/s and bits/s coincide
// and every rate in this header is in bits/s.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "macfeas/error.hpp"
#include "macfeas/rate_vector.hpp"

namespace macfeas {

/// One user's traffic: Poisson arrival rate (packets/s) and mean delay bound (s).
struct UserDemand {
  double arrival_rate = 0.0;
  double delay_bound = 0.0;

  void validate() const {
    if (!(arrival_rate > 0.0) || !std::isfinite(arrival_rate)) {
      throw DomainError("arrival rate must be positive and finite");
    }
    if (!(delay_bound > 0.0) || !std::isfinite(delay_bound)) {
      throw DomainError("delay bound must be positive and finite");
    }
  }
};

/// Mean service rate and coefficient of variation of the service time of an
/// M/G/1 server.
struct ServiceSpec {
  double mean_rate = 0.0;
  double cv_service_time = 0.0;

  void validate() const {
    if (!(mean_rate > 0.0) || !std::isfinite(mean_rate)) {
      throw DomainError("service rate must be positive and finite");
    }
    if (!(cv_service_time >= 0.0) || !std::isfinite(cv_service_time)) {
      throw DomainError("coefficient of variation must be non-negative");
    }
  }
};

/// Mean sojourn time (waiting + service) of an M/G/1 queue, from the
/// Pollaczek-Khinchine mean queue length and Little's law.
inline double sojourn_time(const ServiceSpec& spec, double arrival_rate) {
  spec.validate();
  if (!(arrival_rate > 0.0) || !std::isfinite(arrival_rate)) {
    throw DomainError("arrival rate must be positive and finite");
  }
  const double r = spec.mean_rate;
  if (arrival_rate >= r) {
    throw UnstableQueueError("arrival rate " + std::to_string(arrival_rate) +
                             " >= service rate " + std::to_string(r));
  }
  const double cv2 = spec.cv_service_time * spec.cv_service_time;
  // λ/R² · (1+c²) / (2(1-λ/R)) rewritten as λ(1+c²) / (2R(R-λ)).
  return 1.0 / r + arrival_rate * (1.0 + cv2) / (2.0 * r * (r - arrival_rate));
}

/// Smallest mean service rate whose M/G/1 sojourn time equals the delay bound,
/// for a service-time coefficient of variation `cv`.
inline double required_rate_general(const UserDemand& demand, double cv) {
  demand.validate();
  if (!(cv >= 0.0) || !std::isfinite(cv)) {
    throw DomainError("coefficient of variation must be non-negative");
  }
  const double tau = demand.delay_bound;
  const double a = demand.arrival_rate * tau;
  const double cv2 = cv * cv;
  const double s = std::sqrt(a * a + 2.0 * a * cv2 + 1.0);
  if (a <= 1.0) return ((a + 1.0) + s) / (2.0 * tau);
  // For λτ > 1 the excess R - λ = (1 - a + s)/(2τ) cancels; rationalize it.
  return demand.arrival_rate + a * (1.0 + cv2) / (tau * (s + a - 1.0));
}

/// Deterministic-service (M/D/1) special case, which minimizes the required
/// rate over all service distributions. Always exceeds the arrival rate.
inline double required_rate(const UserDemand& demand) {
  return required_rate_general(demand, 0.0);
}

/// Element-wise required_rate, order preserving. Errors name the user index.
inline RateVector required_rate_vector(std::span<const UserDemand> demands) {
  if (demands.empty()) throw DomainError("demand list is empty");
  RateVector out;
  out.rates.reserve(demands.size());
  for (std::size_t i = 0; i < demands.size(); ++i) {
    try {
      out.rates.push_back(required_rate(demands[i]));
    } catch (const DomainError& e) {
      throw UserError(i, e.what());
    }
  }
  return out;
}

}  // namespace macfeas
