#pragma once

// Combinatorial submodular function minimization by the scaling framework of
// Iwata, Fleischer and Fujishige (weakly polynomial variant).
//
// The minimizer keeps a base x of the base polyhedron B(f) as a convex
// combination of extreme bases, each generated by a linear ordering, plus a
// flow φ on the complete directed graph over the ground set. It maximizes
// z⁻(E) for z = x + ∂φ in δ-scaling phases; by the min-max relation
//     max { x⁻(E) : x ∈ B(f) } = min { f(S) : S ⊆ E }
// the value x⁻(E) is a lower bound that certifies every set it matches.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "macfeas/error.hpp"
#include "macfeas/subset.hpp"

namespace macfeas {

/// Set-function oracle over the ground set {0, ..., N-1} with memoization.
/// Callers must normalize so that f(∅) = 0.
class SubmodularOracle {
 public:
  using Function = std::function<double(SubsetMask)>;

  SubmodularOracle(std::size_t ground_size, Function f,
                   std::size_t cache_capacity = std::size_t{1} << 20)
      : n_(ground_size), f_(std::move(f)), cache_capacity_(cache_capacity) {
    if (n_ == 0 || n_ > kMaxUsers) {
      throw DomainError("ground set size must be in [1, " + std::to_string(kMaxUsers) + "]");
    }
  }

  double operator()(SubsetMask s) {
    if (auto it = cache_.find(s.bits()); it != cache_.end()) return it->second;
    const double v = f_(s);
    ++eval_count_;
    if (cache_.size() < cache_capacity_) cache_.emplace(s.bits(), v);
    return v;
  }

  std::size_t ground_size() const { return n_; }
  /// Number of calls that reached the underlying function (distinct sets
  /// while the cache has room).
  std::uint64_t eval_count() const { return eval_count_; }

 private:
  std::size_t n_;
  Function f_;
  std::size_t cache_capacity_;
  std::unordered_map<std::uint64_t, double> cache_;
  std::uint64_t eval_count_ = 0;
};

/// A permutation (v1, ..., vN) of the ground set.
struct LinearOrdering {
  std::vector<std::size_t> sequence;

  static LinearOrdering identity(std::size_t n) {
    LinearOrdering l;
    l.sequence.resize(n);
    std::iota(l.sequence.begin(), l.sequence.end(), std::size_t{0});
    return l;
  }

  std::size_t size() const { return sequence.size(); }

  bool is_permutation(std::size_t n) const {
    if (sequence.size() != n) return false;
    std::vector<bool> seen(n, false);
    for (auto v : sequence) {
      if (v >= n || seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }

  std::size_t position(std::size_t v) const {
    return static_cast<std::size_t>(std::find(sequence.begin(), sequence.end(), v) -
                                    sequence.begin());
  }

  /// L(v): every element up to and including v.
  SubsetMask prefix_through(std::size_t v) const {
    SubsetMask s;
    for (auto w : sequence) {
      s = s.with(w);
      if (w == v) break;
    }
    return s;
  }
};

/// An extreme base y of B(f), the ordering that generates it, and its
/// coefficient in the current convex combination.
struct ExtremeBase {
  std::vector<double> base;
  LinearOrdering ordering;
  double coefficient = 1.0;
};

using Combination = std::vector<ExtremeBase>;

/// y(v) = f(L(v)) - f(L(v) \ {v}) for the ordering L. Uses N evaluations
/// beyond f(∅).
template <class Eval>
ExtremeBase extreme_base(Eval&& f, const LinearOrdering& ordering) {
  const std::size_t n = ordering.size();
  if (!ordering.is_permutation(n)) throw DomainError("ordering is not a permutation");
  ExtremeBase eb;
  eb.ordering = ordering;
  eb.base.assign(n, 0.0);
  SubsetMask prefix;
  double prev = f(prefix);
  for (auto v : ordering.sequence) {
    prefix = prefix.with(v);
    const double cur = f(prefix);
    eb.base[v] = cur - prev;
    prev = cur;
  }
  return eb;
}

/// Exchange capacity c(y, u, v) = f(L(u) \ {v}) - f(L(u)) + y(v) for u
/// immediately succeeding v. y + c (χu - χv) is the extreme base of the
/// ordering with u and v interchanged.
template <class Eval>
double exchange_capacity(Eval&& f, const ExtremeBase& y, std::size_t u, std::size_t v) {
  const auto& seq = y.ordering.sequence;
  const std::size_t pu = y.ordering.position(u);
  if (pu >= seq.size() || pu == 0 || seq[pu - 1] != v) {
    throw AdjacencyError("user " + std::to_string(u + 1) + " does not immediately succeed user " +
                         std::to_string(v + 1));
  }
  const SubsetMask lu = y.ordering.prefix_through(u);
  return f(lu.without(v)) - f(lu) + y.base[v];
}

struct ReduceOptions {
  /// A column counts as dependent when its eliminated residual is below this
  /// fraction of the largest column norm.
  double pivot_tolerance = 1e-12;
};

namespace detail {

// Incremental column elimination with partial pivoting. Each stored pivot
// column keeps its reduced form and its expression as a combination of the
// original columns, so a dependent column yields μ with Σ μ_j c_j ≈ 0.
class DependenceFinder {
 public:
  DependenceFinder(std::size_t dim, std::size_t max_columns, double tolerance)
      : dim_(dim), cap_(max_columns), tol_(tolerance),
        reduced_(max_columns * dim), coef_(max_columns * max_columns), rows_(max_columns),
        work_(dim), work_coef_(max_columns) {}

  void clear() {
    count_ = 0;
    pivots_ = 0;
    max_norm_ = 0.0;
  }

  std::size_t count() const { return count_; }

  // Adds column number count(). Returns true when it depends on the columns
  // added before it; dependence() then holds μ over columns 0..count()-1
  // with the new column's entry equal to 1, and the column is not stored.
  bool add(std::span<const double> col) {
    const std::size_t idx = count_++;
    std::copy(col.begin(), col.end(), work_.begin());
    std::fill(work_coef_.begin(), work_coef_.begin() + count_, 0.0);
    work_coef_[idx] = 1.0;
    double norm = 0.0;
    for (double c : col) norm = std::max(norm, std::abs(c));
    max_norm_ = std::max(max_norm_, norm);
    for (std::size_t p = 0; p < pivots_; ++p) {
      const double* red = &reduced_[p * dim_];
      const double factor = work_[rows_[p]] / red[rows_[p]];
      if (factor == 0.0) continue;
      for (std::size_t r = 0; r < dim_; ++r) work_[r] -= factor * red[r];
      work_[rows_[p]] = 0.0;
      const double* cf = &coef_[p * cap_];
      for (std::size_t j = 0; j < idx; ++j) work_coef_[j] -= factor * cf[j];
    }
    std::size_t row = 0;
    double best = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
      if (std::abs(work_[r]) > best) {
        best = std::abs(work_[r]);
        row = r;
      }
    }
    if (best <= tol_ * max_norm_) return true;
    std::copy(work_.begin(), work_.end(), reduced_.begin() + static_cast<std::ptrdiff_t>(pivots_ * dim_));
    std::copy(work_coef_.begin(), work_coef_.begin() + count_,
              coef_.begin() + static_cast<std::ptrdiff_t>(pivots_ * cap_));
    std::fill(coef_.begin() + static_cast<std::ptrdiff_t>(pivots_ * cap_ + count_),
              coef_.begin() + static_cast<std::ptrdiff_t>((pivots_ + 1) * cap_), 0.0);
    rows_[pivots_++] = row;
    return false;
  }

  std::span<const double> dependence() const { return {work_coef_.data(), count_}; }

  // Forgets the most recently added column after add() reported dependence.
  void drop_last() { --count_; }

 private:
  std::size_t dim_;
  std::size_t cap_;
  double tol_;
  double max_norm_ = 0.0;
  std::size_t count_ = 0;
  std::size_t pivots_ = 0;
  std::vector<double> reduced_;
  std::vector<double> coef_;
  std::vector<std::size_t> rows_;
  std::vector<double> work_;
  std::vector<double> work_coef_;
};

inline void validate_combination(const Combination& c) {
  if (c.empty()) throw InconsistentCombinationError("combination is empty");
  const std::size_t n = c.front().base.size();
  double sum = 0.0;
  for (const auto& e : c) {
    if (e.base.size() != n) throw InconsistentCombinationError("bases have different lengths");
    if (!(e.coefficient >= -1e-12)) {
      throw InconsistentCombinationError("negative coefficient " + std::to_string(e.coefficient));
    }
    sum += e.coefficient;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw InconsistentCombinationError("coefficients sum to " + std::to_string(sum));
  }
}

}  // namespace detail

/// Prunes a convex combination to affinely independent extreme bases with the
/// same combined vector (Carathéodory). At most N+1 bases remain.
inline Combination reduce(Combination in, ReduceOptions opts = {}) {
  detail::validate_combination(in);
  const std::size_t n = in.front().base.size();

  // Columns (y_j, s) with s on the scale of the entries: a null vector of
  // these satisfies both Σ μ y = 0 and Σ μ = 0.
  double scale = 0.0;
  for (const auto& e : in)
    for (double v : e.base) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  Combination kept;
  kept.reserve(n + 2);
  std::vector<double> col(n + 1);
  auto column = [&](const ExtremeBase& e) -> std::span<const double> {
    std::copy(e.base.begin(), e.base.end(), col.begin());
    col[n] = scale;
    return col;
  };
  // At most n + 1 columns are independent, plus the one being tested.
  detail::DependenceFinder finder(n + 1, n + 2, opts.pivot_tolerance);
  std::vector<double> mu;
  Combination pending = std::move(in);
  std::size_t next = 0;
  while (next < pending.size()) {
    kept.push_back(std::move(pending[next++]));
    if (!finder.add(column(kept.back()))) continue;
    const auto dep = finder.dependence();
    mu.assign(dep.begin(), dep.end());

    double theta = std::numeric_limits<double>::infinity();
    std::size_t arg = kept.size();
    for (std::size_t j = 0; j < kept.size(); ++j) {
      if (mu[j] > 0.0) {
        const double t = kept[j].coefficient / mu[j];
        if (t < theta) {
          theta = t;
          arg = j;
        }
      }
    }
    if (arg == kept.size()) throw InconsistentCombinationError("degenerate dependence");
    for (std::size_t j = 0; j < kept.size(); ++j) kept[j].coefficient -= theta * mu[j];
    kept[arg].coefficient = 0.0;
    const bool only_new = arg + 1 == kept.size() &&
                          std::all_of(kept.begin(), kept.end() - 1,
                                      [](const ExtremeBase& e) { return e.coefficient > 0.0; });
    std::erase_if(kept, [](const ExtremeBase& e) { return e.coefficient <= 0.0; });
    if (only_new) {
      // The stored pivots still describe `kept`.
      finder.drop_last();
      continue;
    }
    // An older column went: refactor the survivors ahead of the rest.
    Combination requeue;
    requeue.reserve(kept.size() + pending.size() - next);
    std::move(kept.begin(), kept.end(), std::back_inserter(requeue));
    std::move(pending.begin() + static_cast<std::ptrdiff_t>(next), pending.end(),
              std::back_inserter(requeue));
    pending = std::move(requeue);
    next = 0;
    kept.clear();
    finder.clear();
  }

  double sum = 0.0;
  for (const auto& e : kept) sum += e.coefficient;
  for (auto& e : kept) e.coefficient /= sum;
  return kept;
}

/// Points at which an instrumented run reports to its observer.
enum class SfmEvent {
  kInitialized,
  kBeforeDoubleExchange,
  kAfterDoubleExchange,
  kAugmented,
  kReduced,
  kPhaseEnd,
  kHalved,
};

class ScalingMinimizer;

struct SfmOptions {
  /// Certified accuracy: the result is within epsilon of the minimum. Also
  /// sets the nominal last phase, δ < epsilon / N².
  double epsilon = 1e-6;
  /// Stop as soon as an evaluated set has f(S) below this value.
  std::optional<double> stop_below;
  /// Stop as soon as the lower bound x⁻(E) exceeds this value.
  std::optional<double> stop_when_dual_above;
  /// Double-exchange plus augmentation budget; 0 picks a bound that grows like
  /// N⁵ log(M/ε).
  std::uint64_t max_steps = 0;
  /// Spot-check submodularity on random pairs before running.
  bool check_submodularity = false;
  std::size_t submodularity_samples = 256;
  std::uint64_t submodularity_seed = 1;
  ReduceOptions reduce;
  std::function<void(const ScalingMinimizer&, SfmEvent)> observer;
};

enum class SfmStop {
  kConverged,    // duality gap within epsilon
  kDegenerate,   // initial extreme base already decides the minimum
  kFoundBelow,   // stop_below triggered
  kDualAbove,    // stop_when_dual_above triggered
  kExhausted,    // δ underflowed before the gap closed; best set is reported
};

/// Result of a minimization: the best set found, its value, and the base
/// x = Σ λ_i y_i whose negative part x⁻(E) bounds the minimum from below.
struct SfmCertificate {
  double min_value = 0.0;
  SubsetMask minimizing_set;
  std::vector<double> base;
  Combination combination;
  double dual_value = 0.0;  // x⁻(E)
  std::uint64_t oracle_calls = 0;
  std::uint64_t phases = 0;
  std::uint64_t augmentations = 0;
  std::uint64_t double_exchanges = 0;
  SfmStop stop = SfmStop::kConverged;

  bool exact() const { return stop == SfmStop::kConverged || stop == SfmStop::kDegenerate; }
};

/// Flow on the complete directed graph plus the current scaling parameter.
struct FlowState {
  std::size_t n = 0;
  std::vector<double> flow;  // row-major, flow[u * n + v] = φ(u, v)
  double delta = 0.0;

  double operator()(std::size_t u, std::size_t v) const { return flow[u * n + v]; }
  double& at(std::size_t u, std::size_t v) { return flow[u * n + v]; }

  /// ∂φ(u): net flow leaving u.
  std::vector<double> boundary() const {
    std::vector<double> d(n, 0.0);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v) {
        const double f = flow[u * n + v];
        d[u] += f;
        d[v] -= f;
      }
    return d;
  }
};

/// One run of the scaling framework over an oracle. Single-threaded; the
/// step-level members are public so instrumented tests can drive and inspect
/// the state between steps.
class ScalingMinimizer {
 public:
  struct Triple {
    std::size_t index;  // into combination()
    std::size_t u;
    std::size_t v;
  };

  ScalingMinimizer(SubmodularOracle& oracle, SfmOptions opts = {})
      : oracle_(oracle), opts_(std::move(opts)), n_(oracle.ground_size()) {}

  SfmCertificate run() {
    initialize();
    if (finished_) return certificate();
    const double n2 = static_cast<double>(n_ * n_);
    const double last_delta = opts_.epsilon / n2;
    while (!finished_) {
      run_phase();
      if (finished_) break;
      end_phase();
      if (finished_) break;
      if (best_value_ - dual_value() <= opts_.epsilon) {
        stop_ = SfmStop::kConverged;
        break;
      }
      // The gap shrinks with δ; give up only far past the nominal last phase.
      if (flow_.delta < last_delta * 1e-9) {
        stop_ = SfmStop::kExhausted;
        break;
      }
      halve();
    }
    return certificate();
  }

  // --- step-level interface -------------------------------------------

  /// Lines 1-6: identity ordering, its extreme base, δ from x⁻(E) and x⁺(E).
  void initialize() {
    const double at_empty = value(SubsetMask::empty());
    if (std::abs(at_empty) > 1e-12) {
      throw NotNormalizedError("f(∅) = " + std::to_string(at_empty) + ", expected 0");
    }
    if (opts_.check_submodularity) spot_check_submodularity();

    bases_.clear();
    bases_.push_back(make_extreme_base(LinearOrdering::identity(n_)));
    x_ = bases_.front().base;
    flow_ = FlowState{n_, std::vector<double>(n_ * n_, 0.0), 0.0};

    double neg = 0.0;
    double pos = 0.0;
    double scale = 0.0;
    for (double v : x_) {
      (v < 0.0 ? neg : pos) += v;
      scale = std::max(scale, std::abs(v));
    }
    scale_ = std::max(scale, 1.0);
    if (opts_.max_steps == 0) {
      const double n = static_cast<double>(n_);
      const double m = std::max(scale * n, opts_.epsilon);
      step_budget_ = static_cast<std::uint64_t>(
          std::min(4e12, 50.0 * std::pow(n, 5) * (std::log2(m / opts_.epsilon) + 2.0) + 1e5));
    } else {
      step_budget_ = opts_.max_steps;
    }
    flow_.delta = std::min(std::abs(neg), pos) / static_cast<double>(n_ * n_);
    refresh_sets();
    notify(SfmEvent::kInitialized);
    if (check_stops()) return;
    if (flow_.delta == 0.0) {
      // x⁻(E) = 0 proves min f = f(∅); x⁺(E) = 0 proves min f = f(E) = x⁻(E).
      finished_ = true;
      stop_ = SfmStop::kDegenerate;
    }
  }

  /// One δ-phase (lines 8-18): double exchanges until a δ-augmenting path
  /// appears, augment, reduce; until neither a path nor an active triple
  /// remains.
  void run_phase() {
    refresh_sets();
    while (true) {
      while (!reaches_d()) {
        auto t = find_active_triple();
        if (!t) break;
        double_exchange(t->index, t->u, t->v);
        if (finished_) return;
      }
      if (reaches_d()) {
        augment();
        if (finished_) return;
        reduce_combination();
      } else {
        reduce_combination();
        break;
      }
    }
  }

  /// Records f(W) for the final reachable set W of the phase.
  void end_phase() {
    ++phases_;
    value(reachable_set());
    notify(SfmEvent::kPhaseEnd);
    check_stops();
  }

  /// Lines 19-20.
  void halve() {
    flow_.delta /= 2.0;
    for (double& f : flow_.flow) f /= 2.0;
    notify(SfmEvent::kHalved);
  }

  /// First active triple: bases in index order, positions left to right.
  std::optional<Triple> find_active_triple() const {
    for (std::size_t i = 0; i < bases_.size(); ++i) {
      const auto& seq = bases_[i].ordering.sequence;
      for (std::size_t p = 0; p + 1 < seq.size(); ++p) {
        if (in_b_[seq[p + 1]] && !in_b_[seq[p]]) return Triple{i, seq[p + 1], seq[p]};
      }
    }
    return std::nullopt;
  }

  /// Double-Exchange on the active triple (i, u, v). Moves α = min(φ(u,v),
  /// λ_i c) from v to u in x and cancels it from φ(u,v), leaving z unchanged.
  /// When only part of λ_i can move, y_i is split off into a new base.
  void double_exchange(std::size_t i, std::size_t u, std::size_t v) {
    if (i >= bases_.size()) throw InactiveTripleError("base index out of range");
    auto& yi = bases_[i];
    const auto& seq = yi.ordering.sequence;
    const std::size_t pu = yi.ordering.position(u);
    if (pu == 0 || pu >= seq.size() || seq[pu - 1] != v || !in_b_[u] || in_b_[v]) {
      throw InactiveTripleError("(" + std::to_string(i) + ", " + std::to_string(u + 1) + ", " +
                                std::to_string(v + 1) + ") is not an active triple");
    }
    notify(SfmEvent::kBeforeDoubleExchange);
    count_step();

    const SubsetMask lu = yi.ordering.prefix_through(u);
    const SubsetMask lv_minus = lu.without(u).without(v);
    const double f_lu = value(lu);
    const double f_lu_minus_v = value(lu.without(v));
    const double f_lv_minus = value(lv_minus);
    // Rounding can push a zero capacity slightly negative.
    const double cap = std::max(0.0, f_lu_minus_v - f_lu + yi.base[v]);

    const double phi_uv = flow_(u, v);
    const double moved = yi.coefficient * cap;
    const double alpha = std::min(phi_uv, moved);
    x_[u] += alpha;
    x_[v] -= alpha;
    flow_.at(u, v) = (alpha == phi_uv) ? 0.0 : phi_uv - alpha;

    if (alpha < moved) {
      ExtremeBase split = yi;
      split.coefficient = yi.coefficient - alpha / cap;
      yi.coefficient = alpha / cap;
      bases_.push_back(std::move(split));
      grown_ = true;
    }
    auto& y = bases_[i];
    // Entries regenerated from the new ordering (u before v).
    y.base[u] = f_lu_minus_v - f_lv_minus;
    y.base[v] = f_lu - f_lu_minus_v;
    std::swap(y.ordering.sequence[pu - 1], y.ordering.sequence[pu]);
    ++double_exchanges_;

    if (flow_(u, v) == 0.0) refresh_reachable();
    notify(SfmEvent::kAfterDoubleExchange);
    check_stops();
  }

  /// Augments δ along a shortest C→D path in G° (line 16).
  void augment() {
    const auto path = shortest_path();
    if (path.empty()) return;
    count_step();
    const double delta = flow_.delta;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
      const std::size_t a = path[k];
      const std::size_t b = path[k + 1];
      flow_.at(a, b) = delta - flow_(b, a);
      flow_.at(b, a) = 0.0;
    }
    ++augmentations_;
    refresh_sets();
    notify(SfmEvent::kAugmented);
    check_stops();
  }

  /// Reduce, applied once a split has grown the combination since the last
  /// call; without a split the previous call's size bound still holds.
  void reduce_combination() {
    if (!grown_) return;
    if (bases_.size() > 1) bases_ = reduce(std::move(bases_), opts_.reduce);
    grown_ = false;
    notify(SfmEvent::kReduced);
  }

  // --- inspection -----------------------------------------------------

  std::size_t ground_size() const { return n_; }
  const std::vector<double>& x() const { return x_; }
  const FlowState& flow() const { return flow_; }
  double delta() const { return flow_.delta; }
  const Combination& combination() const { return bases_; }
  bool finished() const { return finished_; }
  /// Magnitude of the initial extreme base entries (at least 1).
  double scale() const { return scale_; }

  std::vector<double> z() const {
    auto d = flow_.boundary();
    for (std::size_t v = 0; v < n_; ++v) d[v] += x_[v];
    return d;
  }

  double dual_value() const {
    double s = 0.0;
    for (double v : x_) s += std::min(0.0, v);
    return s;
  }

  /// B: vertices reachable from C in G°.
  SubsetMask reachable_set() const {
    SubsetMask s;
    for (std::size_t v = 0; v < n_; ++v)
      if (in_b_[v]) s = s.with(v);
    return s;
  }

  SubsetMask c_set() const { return mask_of(in_c_); }
  SubsetMask d_set() const { return mask_of(in_d_); }

  double best_value() const { return best_value_; }
  SubsetMask best_set() const { return best_set_; }

  SfmCertificate certificate() const {
    SfmCertificate c;
    c.min_value = best_value_;
    c.minimizing_set = best_set_;
    c.base = x_;
    c.combination = bases_;
    c.dual_value = dual_value();
    c.oracle_calls = oracle_.eval_count();
    c.phases = phases_;
    c.augmentations = augmentations_;
    c.double_exchanges = double_exchanges_;
    c.stop = stop_;
    return c;
  }

 private:
  double value(SubsetMask s) {
    const double v = oracle_(s);
    if (v < best_value_ || !have_best_) {
      best_value_ = v;
      best_set_ = s;
      have_best_ = true;
    }
    return v;
  }

  ExtremeBase make_extreme_base(const LinearOrdering& l) {
    return extreme_base([this](SubsetMask s) { return value(s); }, l);
  }

  void notify(SfmEvent e) const {
    if (opts_.observer) opts_.observer(*this, e);
  }

  void count_step() {
    if (++steps_ > step_budget_) {
      throw IterationBudgetExceeded("scaling minimizer exceeded " + std::to_string(step_budget_) +
                                    " steps");
    }
  }

  bool check_stops() {
    if (opts_.stop_below && best_value_ < *opts_.stop_below) {
      finished_ = true;
      stop_ = SfmStop::kFoundBelow;
    } else if (opts_.stop_when_dual_above && dual_value() > *opts_.stop_when_dual_above) {
      finished_ = true;
      stop_ = SfmStop::kDualAbove;
    }
    return finished_;
  }

  SubsetMask mask_of(const std::vector<char>& flags) const {
    SubsetMask s;
    for (std::size_t v = 0; v < n_; ++v)
      if (flags[v]) s = s.with(v);
    return s;
  }

  void refresh_sets() {
    const auto zz = z();
    const double d = flow_.delta;
    in_c_.assign(n_, 0);
    in_d_.assign(n_, 0);
    for (std::size_t v = 0; v < n_; ++v) {
      in_c_[v] = zz[v] <= -d;
      in_d_[v] = zz[v] >= d;
    }
    refresh_reachable();
  }

  void refresh_reachable() {
    in_b_.assign(n_, 0);
    std::vector<std::size_t> queue;
    for (std::size_t v = 0; v < n_; ++v)
      if (in_c_[v]) {
        in_b_[v] = 1;
        queue.push_back(v);
      }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t a = queue[head];
      for (std::size_t b = 0; b < n_; ++b) {
        if (b != a && !in_b_[b] && flow_(a, b) == 0.0) {
          in_b_[b] = 1;
          queue.push_back(b);
        }
      }
    }
  }

  bool reaches_d() const {
    for (std::size_t v = 0; v < n_; ++v)
      if (in_b_[v] && in_d_[v]) return true;
    return false;
  }

  // Multi-source BFS from C, neighbours in increasing index order; the first
  // D vertex dequeued ends a shortest path.
  std::vector<std::size_t> shortest_path() const {
    constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> parent(n_, kNone);
    std::vector<bool> seen(n_, false);
    std::vector<std::size_t> queue;
    for (std::size_t v = 0; v < n_; ++v)
      if (in_c_[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const std::size_t a = queue[head];
      if (in_d_[a]) {
        std::vector<std::size_t> path;
        for (std::size_t w = a; w != kNone; w = parent[w]) path.push_back(w);
        std::reverse(path.begin(), path.end());
        return path;
      }
      for (std::size_t b = 0; b < n_; ++b) {
        if (b != a && !seen[b] && flow_(a, b) == 0.0) {
          seen[b] = true;
          parent[b] = a;
          queue.push_back(b);
        }
      }
    }
    return {};
  }

  void spot_check_submodularity() {
    std::mt19937_64 rng(opts_.submodularity_seed);
    const std::uint64_t full = SubsetMask::full(n_).bits();
    for (std::size_t k = 0; k < opts_.submodularity_samples; ++k) {
      const SubsetMask s{rng() & full};
      const SubsetMask t{rng() & full};
      const double lhs = oracle_(s) + oracle_(t);
      const double rhs = oracle_(s | t) + oracle_(s & t);
      const double tol = 1e-9 * (std::abs(lhs) + std::abs(rhs) + 1.0);
      if (lhs < rhs - tol) {
        throw SubmodularityViolation("f(S)+f(T) < f(S∪T)+f(S∩T) for S=" + s.to_string() +
                                     ", T=" + t.to_string());
      }
    }
  }

  SubmodularOracle& oracle_;
  SfmOptions opts_;
  std::size_t n_;

  Combination bases_;
  std::vector<double> x_;
  FlowState flow_;
  std::vector<char> in_c_, in_d_, in_b_;

  double best_value_ = 0.0;
  SubsetMask best_set_;
  bool have_best_ = false;
  double scale_ = 1.0;

  std::uint64_t steps_ = 0;
  std::uint64_t step_budget_ = 0;
  std::uint64_t phases_ = 0;
  std::uint64_t augmentations_ = 0;
  std::uint64_t double_exchanges_ = 0;
  bool grown_ = false;
  bool finished_ = false;
  SfmStop stop_ = SfmStop::kConverged;
};

/// Minimizes a normalized submodular function; see ScalingMinimizer.
inline SfmCertificate minimize(SubmodularOracle& oracle, SfmOptions opts = {}) {
  return ScalingMinimizer(oracle, std::move(opts)).run();
}

}  // namespace macfeas
