#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <vector>

#include "macfeas/error.hpp"
#include "macfeas/subset.hpp"

namespace macfeas {

/// Per-user service rates in bits/s.
struct RateVector {
  std::vector<double> rates;

  RateVector() = default;
  explicit RateVector(std::vector<double> r) : rates(std::move(r)) {}
  RateVector(std::initializer_list<double> r) : rates(r) {}

  std::size_t size() const { return rates.size(); }
  double operator[](std::size_t i) const { return rates[i]; }
  double& operator[](std::size_t i) { return rates[i]; }
  std::span<const double> view() const { return rates; }

  /// R(S), summed in increasing member order.
  double sum(SubsetMask s) const {
    double acc = 0.0;
    for (auto i : s.members()) acc += rates[i];
    return acc;
  }
  double total() const { return std::accumulate(rates.begin(), rates.end(), 0.0); }

  void validate() const {
    for (std::size_t i = 0; i < rates.size(); ++i) {
      if (!(rates[i] >= 0.0) || !std::isfinite(rates[i])) {
        throw UserError(i, "rate must be finite and non-negative");
      }
    }
  }
};

}  // namespace macfeas
