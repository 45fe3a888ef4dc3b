#include "macfeas/capacity.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "macfeas/membership.hpp"
#include "reference_scenarios.hpp"
#include "test_support.hpp"

namespace macfeas {
namespace {

using testing::channel;

RateVector three_user_rates() { return required_rate_vector(testing::three_user_demands()); }

TEST(CapacityOfSubset, EmptySetIsZero) {
  EXPECT_EQ(capacity_of_subset(channel({0.3, 0.1}), SubsetMask::empty()), 0.0);
}

TEST(CapacityOfSubset, DirectEvaluation) {
  const auto cfg = channel({0.0372, 0.0131});
  const double want = 2e5 * std::log2(1.0 + (0.0372 + 0.0131) / (3e-7 * 2e5));
  EXPECT_NEAR(capacity_of_subset(cfg, SubsetMask::full(2)), want, 1e-9 * want);
  EXPECT_NEAR(capacity_of_subset(cfg, SubsetMask::full(2)), 1.757e5, 0.001e5);

  const auto three = channel(testing::three_user_powers());
  EXPECT_NEAR(capacity_of_subset(three, SubsetMask::singleton(1)), 2.310e4, 0.001e4);
  EXPECT_LT(capacity_of_subset(three, SubsetMask::singleton(1)), three_user_rates()[1]);
}

TEST(CapacityOfSubset, RejectsOutOfRangeMembers) {
  EXPECT_THROW(capacity_of_subset(channel({0.1, 0.2}), SubsetMask::singleton(2)), DimensionError);
}

TEST(Gap, EmptyZeroAndDimensions) {
  const auto cfg = channel({0.1, 0.2});
  EXPECT_EQ(gap(cfg, RateVector{5.0, 6.0}, SubsetMask::empty()), 0.0);
  EXPECT_THROW(gap(cfg, RateVector{5.0}, SubsetMask::full(1)), DimensionError);
  for (std::uint64_t m = 0; m < 4; ++m) {
    EXPECT_GE(gap(cfg, RateVector{0.0, 0.0}, SubsetMask{m}), 0.0);
  }
}

TEST(Gap, ThreeUserMinimumAtSecondUser) {
  const auto cfg = channel(testing::three_user_powers());
  const auto rates = three_user_rates();
  const double at2 = gap(cfg, rates, SubsetMask::singleton(1));
  EXPECT_NEAR(at2, -1.07e4, 0.01e4);
  for (std::uint64_t m = 1; m < 8; ++m) EXPECT_GE(gap(cfg, rates, SubsetMask{m}), at2);
}

TEST(BruteForce, ThreeUserOriginalInfeasible) {
  const auto v = check_feasibility_bruteforce(channel(testing::three_user_powers()),
                                              three_user_rates());
  EXPECT_FALSE(v.feasible);
  EXPECT_EQ(v.witness, SubsetMask::singleton(1));
  EXPECT_EQ(v.method, Method::kBruteForce);
  EXPECT_EQ(v.evaluations, 7u);
}

TEST(BruteForce, ThreeUserReallocatedFeasible) {
  const auto v = check_feasibility_bruteforce(
      channel(testing::three_user_reallocated_powers()), three_user_rates());
  EXPECT_TRUE(v.feasible);
  EXPECT_GE(v.min_gap, 0.0);
}

TEST(BruteForce, ZeroRatesFeasibleWithEmptyWitness) {
  const auto v = check_feasibility_bruteforce(channel({0.1, 0.0, 0.4}), RateVector{0.0, 0.0, 0.0});
  EXPECT_TRUE(v.feasible);
  EXPECT_EQ(v.min_gap, 0.0);
  EXPECT_TRUE(v.witness.is_empty());
}

TEST(BruteForce, EnforcesCap) {
  ChannelConfig cfg = channel(std::vector<double>(6, 0.1));
  EXPECT_THROW(check_feasibility_bruteforce(cfg, RateVector(std::vector<double>(6, 1.0)), {5}),
               UserCountExceedsCap);
}

TEST(BruteForce, TiesGoToSmallestMask) {
  // Two identical users with rates exactly at the single-user bound: f({1})
  // and f({2}) tie below f(∅) only through rounding, so use a clear violation.
  const auto cfg = channel({0.1, 0.1});
  const double single = capacity_of_subset(cfg, SubsetMask::singleton(0));
  const auto v = check_feasibility_bruteforce(cfg, RateVector{single + 100.0, single + 100.0});
  EXPECT_FALSE(v.feasible);
  EXPECT_EQ(v.witness, SubsetMask::full(2));  // f(E) is lower than either singleton
  const auto w = check_feasibility_bruteforce(cfg, RateVector{single + 1.0, single + 1.0});
  EXPECT_EQ(w.witness.size(), 2u);
}

TEST(EqualPower, SingleUserShannonBound) {
  const auto cfg = channel({0.05});
  const double bound = 2e5 * std::log2(1.0 + 0.05 / (3e-7 * 2e5));
  EXPECT_TRUE(check_feasibility_equal_power(cfg, RateVector{bound * 0.999}).feasible);
  EXPECT_FALSE(check_feasibility_equal_power(cfg, RateVector{bound * 1.001}).feasible);
}

TEST(EqualPower, FirstInequalityFails) {
  const auto cfg = channel({0.05, 0.05, 0.05});
  const double single = capacity_of_subset(cfg, SubsetMask::singleton(0));
  const auto v = check_feasibility_equal_power(cfg, RateVector{10.0, single * 1.5, 10.0});
  EXPECT_FALSE(v.feasible);
  EXPECT_EQ(v.witness, SubsetMask::singleton(1));
  EXPECT_EQ(v.evaluations, 3u);
}

TEST(EqualPower, RejectsUnequalPowers) {
  EXPECT_THROW(check_feasibility_equal_power(channel({0.1, 0.2}), RateVector{1.0, 1.0}),
               UnequalPowersError);
}

TEST(EqualPower, AgreesWithBruteForce) {
  std::mt19937_64 rng(99);
  int infeasible = 0;
  for (int k = 0; k < 400; ++k) {
    const std::size_t n = 1 + rng() % 12;
    const auto inst = testing::random_equal_power_instance(rng, n);
    const auto fast = check_feasibility_equal_power(inst.cfg, inst.rates);
    const auto slow = check_feasibility_bruteforce(inst.cfg, inst.rates);
    ASSERT_EQ(fast.feasible, slow.feasible) << "n=" << n << " k=" << k;
    EXPECT_NEAR(fast.min_gap, slow.min_gap, 1e-9 * inst.cfg.bandwidth);
    infeasible += !slow.feasible;
  }
  EXPECT_GT(infeasible, 40);
  EXPECT_LT(infeasible, 360);
}

class PolymatroidProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{31337};
};

TEST_F(PolymatroidProperties, CapacityIsNormalizedMonotoneSubmodular) {
  for (int k = 0; k < 3000; ++k) {
    const std::size_t n = 1 + rng() % 16;
    const auto inst = testing::random_mac_instance(rng, n);
    const std::uint64_t full = SubsetMask::full(n).bits();
    const SubsetMask s{rng() & full};
    const SubsetMask t{rng() & full};
    const auto g = [&](SubsetMask m) { return capacity_of_subset(inst.cfg, m); };
    const double tol = 1e-9 * inst.cfg.bandwidth;
    EXPECT_EQ(g(SubsetMask::empty()), 0.0);
    EXPECT_LE(g(s & t), g(s) + tol);
    EXPECT_LE(g(s), g(s | t) + tol);
    EXPECT_GE(g(s) + g(t), g(s | t) + g(s & t) - tol);
  }
}

TEST_F(PolymatroidProperties, GapIsSubmodular) {
  for (int k = 0; k < 3000; ++k) {
    const std::size_t n = 1 + rng() % 16;
    const auto inst = testing::random_mac_instance(rng, n);
    const std::uint64_t full = SubsetMask::full(n).bits();
    const SubsetMask s{rng() & full};
    const SubsetMask t{rng() & full};
    const auto f = [&](SubsetMask m) { return gap(inst.cfg, inst.rates, m); };
    EXPECT_GE(f(s) + f(t), f(s | t) + f(s & t) - 1e-9 * inst.cfg.bandwidth);
  }
}

TEST_F(PolymatroidProperties, RaisingPowerNeverBreaksFeasibility) {
  int checked = 0;
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = 1 + rng() % 10;
    auto inst = testing::random_mac_instance(rng, n);
    if (!check_feasibility_bruteforce(inst.cfg, inst.rates).feasible) continue;
    inst.cfg.powers[rng() % n] *= 1.0 + std::uniform_real_distribution<double>(0.0, 3.0)(rng);
    EXPECT_TRUE(check_feasibility_bruteforce(inst.cfg, inst.rates).feasible);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST_F(PolymatroidProperties, WitnessValueMatchesMinGap) {
  for (int k = 0; k < 500; ++k) {
    const std::size_t n = 1 + rng() % 12;
    const auto inst = testing::random_mac_instance(rng, n);
    const auto v = check_feasibility_bruteforce(inst.cfg, inst.rates);
    EXPECT_EQ(gap(inst.cfg, inst.rates, v.witness), v.min_gap);
    const auto exhaustive = testing::exhaustive_minimum(
        [&](SubsetMask s) { return testing::direct_gap(inst.cfg, inst.rates.rates, s); }, n);
    EXPECT_NEAR(v.min_gap, exhaustive.value, 1e-9 * inst.cfg.bandwidth);
    EXPECT_EQ(v.feasible, v.min_gap >= -feasibility_tolerance(inst.cfg));
    if (!v.feasible) {
      EXPECT_FALSE(v.witness.is_empty());
    }
  }
}

TEST(Dispatch, AutoPicksEqualPowerThenBruteThenSfm) {
  const auto rates = three_user_rates();
  EXPECT_EQ(check_feasibility(channel({0.2, 0.2, 0.2}), rates).method, Method::kEqualPower);
  EXPECT_EQ(check_feasibility(channel(testing::three_user_powers()), rates).method,
            Method::kBruteForce);
  EXPECT_EQ(check_feasibility(channel(testing::three_user_powers()), rates, MethodChoice::kAuto,
                              {2})
                .method,
            Method::kSfm);
}

TEST(Dispatch, SfmAgreesOnReferenceScenarios) {
  const auto rates = three_user_rates();
  const auto bad = check_feasibility_sfm(channel(testing::three_user_powers()), rates);
  EXPECT_FALSE(bad.feasible);
  EXPECT_LT(bad.min_gap, -feasibility_tolerance(channel(testing::three_user_powers())));
  const auto good = check_feasibility_sfm(channel(testing::three_user_reallocated_powers()), rates);
  EXPECT_TRUE(good.feasible);
  const auto exact = check_feasibility_sfm(channel(testing::three_user_powers()), rates,
                                           {std::nullopt, false});
  EXPECT_TRUE(exact.exact);
  EXPECT_EQ(exact.witness, SubsetMask::singleton(1));
}

}  // namespace
}  // namespace macfeas
