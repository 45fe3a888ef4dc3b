#pragma once

// The four tool commands as library calls. Each returns a Report whose
// exit_code follows the tool's contract: 0 feasible or success, 2 infeasible
// or below threshold, 1 usage or parse error (raised as exceptions here and
// mapped by the caller).

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "macfeas/capacity.hpp"
#include "macfeas/membership.hpp"
#include "macfeas/power.hpp"
#include "macfeas/queueing.hpp"
#include "macfeas/report.hpp"
#include "macfeas/scenario.hpp"

namespace macfeas {

class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

inline Json members_json(SubsetMask s) {
  Json a = Json::array();
  for (auto i : s.members()) a.push_back(i + 1);
  return a;
}

inline Json verdict_json(const FeasibilityVerdict& v, const ChannelConfig& cfg) {
  return Json{{"verdict", v.feasible ? "feasible" : "infeasible"},
              {"method", std::string(to_string(v.method))},
              {"min_gap", v.min_gap},
              {"witness", members_json(v.witness)},
              {"exact", v.exact},
              {"lower_bound", v.lower_bound},
              {"tolerance", feasibility_tolerance(cfg)},
              {"oracle_calls", v.evaluations}};
}

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace detail

inline MethodChoice parse_method(const std::string& name) {
  if (name == "auto") return MethodChoice::kAuto;
  if (name == "brute") return MethodChoice::kBruteForce;
  if (name == "equal-power") return MethodChoice::kEqualPower;
  if (name == "sfm") return MethodChoice::kSfm;
  throw UsageError("unknown method \"" + name + "\" (auto, brute, equal-power, sfm)");
}

enum class AllocateMode { kOptimal, kKeepSum };

inline AllocateMode parse_allocate_mode(const std::string& name) {
  if (name == "optimal") return AllocateMode::kOptimal;
  if (name == "keep-sum") return AllocateMode::kKeepSum;
  throw UsageError("unknown mode \"" + name + "\" (optimal, keep-sum)");
}

// --- check ---------------------------------------------------------------

inline Report cmd_check(const Scenario& sc, MethodChoice method = MethodChoice::kAuto) {
  const auto start = detail::Clock::now();
  const auto rates = required_rate_vector(sc.demands);
  const auto v = check_feasibility(sc.channel, rates, method);
  Report r;
  r.command = "check";
  r.result["input"] = scenario_to_json(sc);
  r.result["required_rates"] = rates.rates;
  r.result["membership"] = detail::verdict_json(v, sc.channel);
  r.metadata["wall_time_s"] = detail::seconds_since(start);
  r.exit_code = v.feasible ? kExitSuccess : kExitNegative;
  return r;
}

// --- allocate ------------------------------------------------------------

inline Report cmd_allocate(const Scenario& sc, AllocateMode mode) {
  const auto start = detail::Clock::now();
  const auto rates = required_rate_vector(sc.demands);
  const auto& ch = sc.channel;
  const double current = detail::sum(ch.powers);
  const double threshold = min_sum_power(rates, ch.bandwidth, ch.noise_density);

  Report r;
  r.command = "allocate";
  r.result["input"] = scenario_to_json(sc);
  r.result["required_rates"] = rates.rates;
  r.result["threshold_w"] = threshold;
  r.result["current_sum_w"] = current;
  r.result["current"] = detail::verdict_json(check_feasibility(ch, rates), ch);
  r.result["mode"] = mode == AllocateMode::kOptimal ? "optimal" : "keep-sum";

  if (mode == AllocateMode::kKeepSum && current < threshold * (1.0 - 1e-12)) {
    r.result["status"] = "below-threshold";
    r.result["deficit_w"] = threshold - current;
    r.exit_code = kExitNegative;
    r.metadata["wall_time_s"] = detail::seconds_since(start);
    return r;
  }
  const auto alloc = mode == AllocateMode::kOptimal
                         ? allocate_optimal(rates, ch.bandwidth, ch.noise_density)
                         : allocate_fixed_sum(rates, ch.bandwidth, ch.noise_density, current);
  const auto stamp = verify_power_feasibility(alloc.powers, rates, ch.bandwidth, ch.noise_density);
  r.result["status"] = "allocated";
  r.result["allocation"] = Json{{"powers_w", alloc.powers},
                                {"sum_power_w", alloc.sum_power},
                                {"rule", std::string(to_string(alloc.mode))}};
  r.result["verification"] = detail::verdict_json(stamp, ChannelConfig{ch.bandwidth, ch.noise_density, alloc.powers});
  r.exit_code = stamp.feasible ? kExitSuccess : kExitNegative;
  r.metadata["wall_time_s"] = detail::seconds_since(start);
  return r;
}

// --- bench ---------------------------------------------------------------

struct BenchOptions {
  std::vector<std::size_t> ns{5, 10, 15, 20};
  std::size_t trials = 5;
  std::uint64_t seed = 1;
  BruteForceOptions brute;
  /// Each timing repeats the call until this much time has passed.
  double min_timing_s = 2e-3;
};

struct BenchTrial {
  std::size_t n = 0;
  std::size_t trial = 0;
  bool constructed_feasible = false;
  bool brute_run = false;
  bool brute_feasible = false;
  bool sfm_feasible = false;
  std::uint64_t brute_evaluations = 0;
  std::uint64_t sfm_oracle_calls = 0;
  double brute_s = 0.0;
  double sfm_s = 0.0;
};

struct BenchRow {
  std::size_t n = 0;
  double brute_median_s = 0.0;  // 0 when the traversal arm was skipped
  double sfm_median_s = 0.0;
  double sfm_feasible_median_s = 0.0;    // trials the minimizer found feasible
  double sfm_infeasible_median_s = 0.0;
  double sfm_median_calls = 0.0;
  std::uint64_t sfm_max_calls = 0;
  std::size_t feasible = 0;
  bool brute_run = false;
  bool agree = true;
};

struct BenchResult {
  BenchOptions options;
  std::vector<BenchTrial> trials;
  std::vector<BenchRow> rows;
};

/// Trial instance for (seed, N, trial). Powers are log-uniform in [1e-3, 1] W.
/// Even trials take a point on the sum-rate face (a convex combination of two
/// decoding-order corners) scaled by 0.97; odd trials then raise the rates of
/// a random subset T until R(T) = 1.02 g(T). Demands are recovered from the
/// rates with τ = 3/R, for which λ = 0.8 R.
inline Scenario bench_instance(std::uint64_t seed, std::size_t n, std::size_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  ChannelConfig cfg{2e5, 3e-7, {}};
  for (std::size_t i = 0; i < n; ++i) cfg.powers.push_back(std::pow(10.0, -3.0 * u01(rng)));

  auto corner = [&] {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<double> v(n);
    SubsetMask prefix;
    double prev = 0.0;
    for (auto i : order) {
      prefix = prefix.with(i);
      const double cur = capacity_of_subset(cfg, prefix);
      v[i] = cur - prev;
      prev = cur;
    }
    return v;
  };
  const auto a = corner();
  const auto b = corner();
  const double t = u01(rng);
  RateVector rates;
  for (std::size_t i = 0; i < n; ++i) rates.rates.push_back(0.97 * (t * a[i] + (1.0 - t) * b[i]));
  if (trial % 2 == 1) {
    SubsetMask sub;
    while (sub.is_empty()) sub = SubsetMask{rng() & SubsetMask::full(n).bits()};
    const double factor = 1.02 * capacity_of_subset(cfg, sub) / rates.sum(sub);
    for (auto i : sub.members()) rates[i] *= factor;
  }
  Scenario sc;
  sc.channel = cfg;
  for (double r : rates.rates) sc.demands.push_back({0.8 * r, 3.0 / r});
  return sc;
}

namespace detail {

// Per-call seconds, repeating until min_s has elapsed.
template <class F>
double time_call(F&& f, double min_s) {
  std::size_t reps = 0;
  const auto start = Clock::now();
  double elapsed = 0.0;
  do {
    f();
    ++reps;
    elapsed = seconds_since(start);
  } while (elapsed < min_s);
  return elapsed / static_cast<double>(reps);
}

}  // namespace detail

inline BenchResult run_bench(const BenchOptions& opts) {
  if (opts.ns.empty()) throw UsageError("bench needs at least one N");
  if (opts.trials == 0) throw UsageError("bench needs at least one trial");
  BenchResult out;
  out.options = opts;
  for (std::size_t n : opts.ns) {
    if (n == 0 || n > kMaxUsers) {
      throw UsageError("N must be in [1, " + std::to_string(kMaxUsers) + "]");
    }
    BenchRow row;
    row.n = n;
    std::vector<double> brute_times, sfm_times, calls, sfm_yes, sfm_no;
    for (std::size_t k = 0; k < opts.trials; ++k) {
      const auto sc = bench_instance(opts.seed, n, k);
      const auto rates = required_rate_vector(sc.demands);
      BenchTrial t;
      t.n = n;
      t.trial = k;
      t.constructed_feasible = k % 2 == 0;
      FeasibilityVerdict sv;
      t.sfm_s = detail::time_call([&] { sv = check_feasibility_sfm(sc.channel, rates); },
                                  opts.min_timing_s);
      t.sfm_feasible = sv.feasible;
      t.sfm_oracle_calls = sv.evaluations;
      if (n <= opts.brute.max_users) {
        FeasibilityVerdict bv;
        t.brute_s = detail::time_call(
            [&] { bv = check_feasibility_bruteforce(sc.channel, rates, opts.brute); },
            opts.min_timing_s);
        t.brute_run = true;
        t.brute_feasible = bv.feasible;
        t.brute_evaluations = bv.evaluations;
        brute_times.push_back(t.brute_s);
        row.agree = row.agree && bv.feasible == sv.feasible;
      }
      sfm_times.push_back(t.sfm_s);
      (sv.feasible ? sfm_yes : sfm_no).push_back(t.sfm_s);
      calls.push_back(static_cast<double>(t.sfm_oracle_calls));
      row.sfm_max_calls = std::max(row.sfm_max_calls, t.sfm_oracle_calls);
      row.feasible += sv.feasible;
      out.trials.push_back(t);
    }
    row.brute_run = !brute_times.empty();
    row.brute_median_s = detail::median(brute_times);
    row.sfm_median_s = detail::median(sfm_times);
    row.sfm_feasible_median_s = detail::median(sfm_yes);
    row.sfm_infeasible_median_s = detail::median(sfm_no);
    row.sfm_median_calls = detail::median(calls);
    out.rows.push_back(row);
  }
  return out;
}

inline Report bench_report(const BenchResult& b) {
  Report r;
  r.command = "bench";
  Json ns = Json::array();
  for (auto n : b.options.ns) ns.push_back(n);
  r.result["config"] = Json{{"n", ns},
                            {"trials", b.options.trials},
                            {"seed", b.options.seed},
                            {"brute_force_cap", b.options.brute.max_users}};
  Json rows = Json::array();
  Json timing = Json::array();
  bool all_agree = true;
  for (const auto& row : b.rows) {
    const double brute_calls = row.brute_run ? std::ldexp(1.0, static_cast<int>(row.n)) - 1.0 : 0.0;
    rows.push_back(Json{{"n", row.n},
                        {"feasible", row.feasible},
                        {"brute_evaluations", row.brute_run ? Json(brute_calls) : Json(nullptr)},
                        {"sfm_median_calls", row.sfm_median_calls},
                        {"sfm_max_calls", row.sfm_max_calls},
                        {"verdicts_agree", row.brute_run ? Json(row.agree) : Json(nullptr)}});
    timing.push_back(Json{{"n", row.n},
                          {"brute_median_s", row.brute_run ? Json(row.brute_median_s) : Json(nullptr)},
                          {"sfm_median_s", row.sfm_median_s},
                          {"sfm_feasible_median_s", row.sfm_feasible_median_s},
                          {"sfm_infeasible_median_s", row.sfm_infeasible_median_s},
                          {"brute_over_sfm", row.brute_run && row.sfm_median_s > 0.0
                                                 ? Json(row.brute_median_s / row.sfm_median_s)
                                                 : Json(nullptr)}});
    all_agree = all_agree && row.agree;
  }
  Json trials = Json::array();
  for (const auto& t : b.trials) {
    trials.push_back(Json{{"n", t.n},
                          {"trial", t.trial},
                          {"constructed", t.constructed_feasible ? "feasible" : "infeasible"},
                          {"sfm_verdict", t.sfm_feasible ? "feasible" : "infeasible"},
                          {"sfm_calls", t.sfm_oracle_calls}});
  }
  r.result["rows"] = rows;
  r.result["trials"] = trials;
  r.metadata["timing"] = timing;
  r.exit_code = all_agree ? kExitSuccess : kExitNegative;
  return r;
}

inline Report cmd_bench(const BenchOptions& opts) {
  const auto start = detail::Clock::now();
  auto r = bench_report(run_bench(opts));
  r.metadata["wall_time_s"] = detail::seconds_since(start);
  return r;
}

// --- region --------------------------------------------------------------

struct RegionRecord {
  std::string kind;  // vertex, facet, point, boundary
  std::string label;
  std::vector<double> x;
  double value = 0.0;
};

namespace detail {

inline std::string order_label(const std::vector<std::size_t>& order) {
  std::string s = "order:";
  for (std::size_t k = 0; k < order.size(); ++k) s += (k ? "," : "") + std::to_string(order[k] + 1);
  return s;
}

// Corner of the region restricted to the users in `order`, filled greedily in
// that order; users not listed get zero.
inline std::vector<double> greedy_corner(const ChannelConfig& cfg,
                                         const std::vector<std::size_t>& order) {
  std::vector<double> x(cfg.user_count(), 0.0);
  SubsetMask prefix;
  double prev = 0.0;
  for (auto i : order) {
    prefix = prefix.with(i);
    const double cur = capacity_of_subset(cfg, prefix);
    x[i] = cur - prev;
    prev = cur;
  }
  return x;
}

inline void add_vertex(std::vector<RegionRecord>& out, std::string label, std::vector<double> x) {
  for (const auto& r : out)
    if (r.kind == "vertex" && r.x == x) return;
  double s = 0.0;
  for (double v : x) s += v;
  out.push_back({"vertex", std::move(label), std::move(x), s});
}

inline void add_edge_samples(std::vector<RegionRecord>& out, const std::vector<double>& a,
                             const std::vector<double>& b, std::size_t resolution,
                             const std::string& label) {
  for (std::size_t k = 0; k < resolution; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(resolution);
    std::vector<double> x(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) x[i] = a[i] + t * (b[i] - a[i]);
    out.push_back({"boundary", label, x, t});
  }
}

}  // namespace detail

/// Plot data for N = 2 or 3: region vertices (decoding-order corners of every
/// coordinate face, axis intercepts and the origin), one facet record per
/// constraint x(S) <= g(S), the required-rate point, and `resolution`
/// samples per edge of the outer boundary.
inline std::vector<RegionRecord> region_records(const ChannelConfig& cfg, const RateVector& rates,
                                                std::size_t resolution) {
  cfg.validate();
  detail::check_dimensions(cfg, rates);
  const std::size_t n = cfg.user_count();
  if (n != 2 && n != 3) {
    throw UsageError("region output supports 2 or 3 users, got " + std::to_string(n));
  }
  if (resolution == 0) throw UsageError("resolution must be positive");
  std::vector<RegionRecord> out;

  detail::add_vertex(out, "origin", std::vector<double>(n, 0.0));
  // Corners of every coordinate face, smallest faces first.
  for (std::size_t size = 1; size <= n; ++size) {
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
      const SubsetMask s{m};
      if (s.size() != size) continue;
      auto order = s.members();
      do {
        detail::add_vertex(out, size == 1 ? "axis:" + std::to_string(order[0] + 1)
                                          : detail::order_label(order),
                           detail::greedy_corner(cfg, order));
      } while (std::next_permutation(order.begin(), order.end()));
    }
  }

  for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) {
    const SubsetMask s{m};
    std::vector<double> coef(n, 0.0);
    for (auto i : s.members()) coef[i] = 1.0;
    out.push_back({"facet", "S=" + s.to_string(), coef, capacity_of_subset(cfg, s)});
  }

  const auto v = check_feasibility_bruteforce(cfg, rates);
  const double tol = feasibility_tolerance(cfg);
  const char* status = v.min_gap > tol ? "inside" : (v.min_gap >= -tol ? "boundary" : "outside");
  out.push_back({"point", std::string("required:") + status, rates.rates, v.min_gap});

  if (n == 2) {
    const auto c12 = detail::greedy_corner(cfg, {0, 1});
    const auto c21 = detail::greedy_corner(cfg, {1, 0});
    const auto a1 = detail::greedy_corner(cfg, {0});
    const auto a2 = detail::greedy_corner(cfg, {1});
    detail::add_edge_samples(out, a1, c12, resolution, "S={1}");
    detail::add_edge_samples(out, c12, c21, resolution, "S={1,2}");
    detail::add_edge_samples(out, c21, a2, resolution, "S={2}");
    out.push_back({"boundary", "S={2}", a2, 1.0});
  } else {
    // Perimeter of the sum-rate face: orderings adjacent by one swap.
    const std::array<std::vector<std::size_t>, 6> ring{{
        {0, 1, 2}, {1, 0, 2}, {1, 2, 0}, {2, 1, 0}, {2, 0, 1}, {0, 2, 1}}};
    for (std::size_t k = 0; k < ring.size(); ++k) {
      const auto a = detail::greedy_corner(cfg, ring[k]);
      const auto b = detail::greedy_corner(cfg, ring[(k + 1) % ring.size()]);
      detail::add_edge_samples(out, a, b, resolution,
                               detail::order_label(ring[k]) + "->" +
                                   detail::order_label(ring[(k + 1) % ring.size()]).substr(6));
    }
  }
  return out;
}

inline std::string format_significant(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

/// Tab-delimited: a header line, then one record per line.
inline void write_region(std::ostream& os, const std::vector<RegionRecord>& records, std::size_t n) {
  os << "kind\tlabel";
  for (std::size_t i = 0; i < n; ++i) os << "\tx" << i + 1;
  os << "\tvalue\n";
  for (const auto& r : records) {
    os << r.kind << '\t' << r.label;
    for (double x : r.x) os << '\t' << format_significant(x);
    os << '\t' << format_significant(r.value) << '\n';
  }
}

inline Report cmd_region(const Scenario& sc, std::size_t resolution, std::ostream& os) {
  const auto start = detail::Clock::now();
  const auto rates = required_rate_vector(sc.demands);
  const auto records = region_records(sc.channel, rates, resolution);
  write_region(os, records, sc.user_count());

  Report r;
  r.command = "region";
  r.result["input"] = scenario_to_json(sc);
  r.result["required_rates"] = rates.rates;
  Json counts = Json::object();
  for (const char* kind : {"vertex", "facet", "point", "boundary"}) {
    counts[kind] = std::count_if(records.begin(), records.end(),
                                 [&](const RegionRecord& rec) { return rec.kind == kind; });
  }
  r.result["records"] = counts;
  const auto point = std::find_if(records.begin(), records.end(),
                                  [](const RegionRecord& rec) { return rec.kind == "point"; });
  r.result["point"] = Json{{"status", point->label.substr(9)}, {"min_gap", point->value}};
  r.metadata["wall_time_s"] = detail::seconds_since(start);
  return r;
}

}  // namespace macfeas
