#pragma once

// Independent oracles and random instance generators shared by the suites.
// Nothing here calls into the minimizer or the membership checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "macfeas/capacity.hpp"
#include "macfeas/subset.hpp"

namespace macfeas::testing {

struct ExhaustiveMinimum {
  double value = 0.0;
  SubsetMask set;
  double second = std::numeric_limits<double>::infinity();  // next distinct value
};

/// Minimum of f over all 2^n subsets; ties keep the smallest mask.
inline ExhaustiveMinimum exhaustive_minimum(const std::function<double(SubsetMask)>& f,
                                            std::size_t n) {
  ExhaustiveMinimum out{f(SubsetMask{}), SubsetMask{}};
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
    const double v = f(SubsetMask{m});
    if (v < out.value) {
      out.second = out.value;
      out.value = v;
      out.set = SubsetMask{m};
    } else if (v > out.value && v < out.second) {
      out.second = v;
    }
  }
  return out;
}

/// Direct evaluation of W log2(1 + P(S)/(N0 W)) - R(S), member by member.
inline double direct_gap(const ChannelConfig& cfg, const std::vector<double>& rates,
                         SubsetMask s) {
  double p = 0.0;
  double r = 0.0;
  for (std::size_t i = 0; i < cfg.powers.size(); ++i) {
    if (s.contains(i)) {
      p += cfg.powers[i];
      r += rates[i];
    }
  }
  return cfg.bandwidth * std::log2(1.0 + p / (cfg.noise_density * cfg.bandwidth)) - r;
}

struct MacInstance {
  ChannelConfig cfg;
  RateVector rates;
};

/// Random channel with log-uniform powers in [1e-3, 1] W and rates scattered
/// around the region boundary so both verdicts occur.
inline MacInstance random_mac_instance(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  MacInstance inst;
  inst.cfg.bandwidth = 2e5;
  inst.cfg.noise_density = 3e-7;
  for (std::size_t i = 0; i < n; ++i) inst.cfg.powers.push_back(std::pow(10.0, -3.0 * u01(rng)));
  // Random point on the sum-rate face: greedy vertex of a random ordering,
  // mixed with a second vertex, then scaled around 1.
  auto vertex = [&]() {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<double> v(n, 0.0);
    SubsetMask prefix;
    double prev = 0.0;
    for (auto i : order) {
      prefix = prefix.with(i);
      const double cur = capacity_of_subset(inst.cfg, prefix);
      v[i] = cur - prev;
      prev = cur;
    }
    return v;
  };
  const auto a = vertex();
  const auto b = vertex();
  const double t = u01(rng);
  const double scale = 0.85 + 0.3 * u01(rng);
  inst.rates.rates.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    inst.rates[i] = scale * (t * a[i] + (1.0 - t) * b[i]) * (0.8 + 0.4 * u01(rng));
  }
  return inst;
}

/// Equal-power channel with random rates near the boundary.
inline MacInstance random_equal_power_instance(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  MacInstance inst;
  inst.cfg.bandwidth = 2e5;
  inst.cfg.noise_density = 3e-7;
  const double p = std::pow(10.0, -3.0 * u01(rng));
  inst.cfg.powers.assign(n, p);
  const double full = capacity_of_subset(inst.cfg, SubsetMask::full(n));
  const double scale = 0.7 + 0.6 * u01(rng);
  std::vector<double> w(n);
  double sw = 0.0;
  for (auto& x : w) {
    x = std::pow(u01(rng), 2.0) + 0.01;
    sw += x;
  }
  inst.rates.rates.resize(n);
  for (std::size_t i = 0; i < n; ++i) inst.rates[i] = scale * full * w[i] / sw;
  return inst;
}

/// A normalized submodular function given as a plain callable.
struct SyntheticFunction {
  std::size_t n = 0;
  std::function<double(SubsetMask)> f;
  const char* family = "";
};

/// Families: weighted cut + modular, sum of concave-of-modular + modular,
/// weighted coverage - modular. All normalized and submodular.
inline SyntheticFunction random_submodular(std::mt19937_64& rng, std::size_t n, int family) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SyntheticFunction out;
  out.n = n;
  std::vector<double> modular(n);
  for (auto& c : modular) c = 2.0 * gauss(rng);
  switch (family % 3) {
    case 0: {
      std::vector<double> w(n * n, 0.0);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (a != b && u01(rng) < 0.5) w[a * n + b] = 3.0 * u01(rng);
      out.family = "cut";
      out.f = [n, w, modular](SubsetMask s) {
        double v = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
          if (!s.contains(a)) continue;
          v += modular[a];
          for (std::size_t b = 0; b < n; ++b)
            if (!s.contains(b)) v += w[a * n + b];
        }
        return v;
      };
      break;
    }
    case 1: {
      const std::size_t terms = 3;
      std::vector<std::vector<double>> weights(terms, std::vector<double>(n));
      for (auto& row : weights)
        for (auto& x : row) x = u01(rng) < 0.7 ? 4.0 * u01(rng) : 0.0;
      out.family = "concave";
      out.f = [n, weights, modular](SubsetMask s) {
        double v = 0.0;
        for (std::size_t k = 0; k < weights.size(); ++k) {
          double m = 0.0;
          for (std::size_t i = 0; i < n; ++i)
            if (s.contains(i)) m += weights[k][i];
          v += k == 0 ? std::sqrt(m) * 3.0 : (k == 1 ? 2.0 * std::log1p(m) : std::min(m, 5.0));
        }
        for (std::size_t i = 0; i < n; ++i)
          if (s.contains(i)) v += modular[i];
        return v;
      };
      break;
    }
    default: {
      const std::size_t items = 2 * n;
      std::vector<std::uint64_t> covers(n, 0);
      std::vector<double> item_weight(items);
      for (auto& x : item_weight) x = 2.0 * u01(rng);
      for (auto& c : covers)
        for (std::size_t j = 0; j < items; ++j)
          if (u01(rng) < 0.3) c |= std::uint64_t{1} << j;
      out.family = "coverage";
      out.f = [n, covers, item_weight, modular](SubsetMask s) {
        std::uint64_t u = 0;
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i)
          if (s.contains(i)) {
            u |= covers[i];
            v -= std::abs(modular[i]);
          }
        for (std::size_t j = 0; j < item_weight.size(); ++j)
          if ((u >> j) & 1u) v += item_weight[j];
        return v;
      };
      break;
    }
  }
  return out;
}

}  // namespace macfeas::testing
