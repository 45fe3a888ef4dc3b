#include "macfeas/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"

namespace macfeas {
namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

TEST(SojournTime, EmptyQueueIsServiceTime) {
  EXPECT_NEAR(sojourn_time({1.0, 0.0}, 1e-12), 1.0, 1e-11);
}

TEST(SojournTime, HandEvaluation) {
  // 1/2 + (1/4) / (2 · 1/2)
  EXPECT_DOUBLE_EQ(sojourn_time({2.0, 0.0}, 1.0), 0.75);
}

TEST(SojournTime, InverseOfRequiredRate) {
  // Direct evaluation at R = 1.2540e5: 1/R + λ/(2R(R-λ)).
  const double r = 1.2540e5;
  const double lambda = 800.0;
  const double direct = 1.0 / r + (lambda / (r * r)) / (2.0 * (1.0 - lambda / r));
  EXPECT_LT(rel(sojourn_time({r, 0.0}, lambda), direct), 1e-14);
  EXPECT_LT(rel(sojourn_time({r, 0.0}, lambda), 8e-6), 1e-3);
}

TEST(SojournTime, RejectsUnstableAndInvalid) {
  EXPECT_THROW(sojourn_time({1.0, 0.0}, 1.0), UnstableQueueError);
  EXPECT_THROW(sojourn_time({1.0, 0.0}, 2.0), UnstableQueueError);
  EXPECT_THROW(sojourn_time({0.0, 0.0}, 0.5), DomainError);
  EXPECT_THROW(sojourn_time({1.0, -0.1}, 0.5), DomainError);
  EXPECT_THROW(sojourn_time({1.0, 0.0}, 0.0), DomainError);
}

TEST(SojournTime, MonotoneInRateAndCv) {
  EXPECT_GT(sojourn_time({2.0, 0.0}, 1.0), sojourn_time({2.5, 0.0}, 1.0));
  EXPECT_LT(sojourn_time({2.0, 0.0}, 1.0), sojourn_time({2.0, 0.5}, 1.0));
}

TEST(RequiredRateGeneral, HandEvaluation) {
  EXPECT_DOUBLE_EQ(required_rate_general({1.0, 1.0}, 1.0), 2.0);
}

TEST(RequiredRateGeneral, ThreeUserFirstEntry) {
  EXPECT_LT(rel(required_rate_general({919.54, 23e-6}, 0.0), 0.4394e5), 1e-3);
}

TEST(RequiredRateGeneral, RelaxedDelayApproachesArrivalRate) {
  const double r = required_rate_general({500.0, 1e6}, 0.0);
  EXPECT_GT(r, 500.0);
  EXPECT_LT(r - 500.0, 1e-5);
}

TEST(RequiredRate, PaperThreeUserEntries) {
  EXPECT_LT(rel(required_rate({642.0, 29.9e-6}), 0.3377e5), 1e-3);
  EXPECT_LT(rel(required_rate({105.32, 6.83e-6}), 1.4647e5), 1e-3);
}

TEST(RequiredRate, TwoUserExample) {
  // ((λτ+1) + sqrt(λ²τ²+1)) / (2τ) at λ = 800, τ = 8 μs.
  const double a = 800.0 * 8e-6;
  const double want = ((a + 1.0) + std::sqrt(a * a + 1.0)) / (2.0 * 8e-6);
  EXPECT_LT(rel(required_rate({800.0, 8e-6}), want), 1e-14);
  EXPECT_LT(rel(required_rate({800.0, 8e-6}), 1.254e5), 1e-3);
}

TEST(RequiredRate, RejectsInvalidDemand) {
  EXPECT_THROW(required_rate({0.0, 1.0}), DomainError);
  EXPECT_THROW(required_rate({1.0, 0.0}), DomainError);
  EXPECT_THROW(required_rate({-1.0, 1.0}), DomainError);
  EXPECT_THROW(required_rate_general({1.0, 1.0}, -1.0), DomainError);
}

TEST(RequiredRateVector, PaperThreeUsers) {
  const std::vector<UserDemand> d{{919.54, 23e-6}, {642.0, 29.9e-6}, {105.32, 6.83e-6}};
  const auto r = required_rate_vector(d);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_LT(rel(r[0], 0.4394e5), 1e-3);
  EXPECT_LT(rel(r[1], 0.3377e5), 1e-3);
  EXPECT_LT(rel(r[2], 1.4647e5), 1e-3);
}

TEST(RequiredRateVector, SingleAndIdentical) {
  const std::vector<UserDemand> one{{1.0, 1.0}};
  EXPECT_NEAR(required_rate_vector(one)[0], (2.0 + std::sqrt(2.0)) / 2.0, 1e-15);
  const std::vector<UserDemand> two{{3.0, 0.2}, {3.0, 0.2}};
  const auto r = required_rate_vector(two);
  EXPECT_EQ(r[0], r[1]);
}

TEST(RequiredRateVector, ErrorsCarryUserIndex) {
  const std::vector<UserDemand> d{{1.0, 1.0}, {1.0, -2.0}};
  try {
    required_rate_vector(d);
    FAIL() << "expected UserError";
  } catch (const UserError& e) {
    EXPECT_EQ(e.user(), 1u);
  }
  EXPECT_THROW(required_rate_vector(std::vector<UserDemand>{}), DomainError);
}

class QueueingProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{2024};
  double log_uniform(double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
  }
};

TEST_F(QueueingProperties, RoundTrip) {
  for (int k = 0; k < 5000; ++k) {
    const UserDemand d{log_uniform(1e-2, 1e6), log_uniform(1e-7, 1e2)};
    const double cv = log_uniform(1e-3, 10.0) * (k % 5 == 0 ? 0.0 : 1.0);
    const double r = required_rate_general(d, cv);
    const double tau = sojourn_time({r, cv}, d.arrival_rate);
    // Evaluating the sojourn time at R loses about log10(λτ) digits in R - λ.
    const double tol = 1e-9 * std::max(1.0, 1e-3 * d.arrival_rate * d.delay_bound);
    ASSERT_LT(rel(tau, d.delay_bound), tol) << d.arrival_rate << " " << d.delay_bound << " " << cv;
  }
}

TEST_F(QueueingProperties, DeterministicServiceMinimizesRate) {
  for (int k = 0; k < 2000; ++k) {
    const UserDemand d{log_uniform(1e-1, 1e4), log_uniform(1e-6, 1.0)};
    const double c1 = log_uniform(1e-2, 3.0);
    const double c2 = c1 * (1.0 + log_uniform(1e-3, 1.0));
    const double r0 = required_rate(d);
    EXPECT_EQ(r0, required_rate_general(d, 0.0));
    EXPECT_LT(r0, required_rate_general(d, c1));
    EXPECT_LT(required_rate_general(d, c1), required_rate_general(d, c2));
  }
}

TEST_F(QueueingProperties, StabilityAndMonotonicity) {
  for (int k = 0; k < 2000; ++k) {
    const double lambda = log_uniform(1e-2, 1e6);
    const double tau = log_uniform(1e-7, 1e2);
    const double r = required_rate({lambda, tau});
    EXPECT_GT(r, lambda);
    EXPECT_GT(r, required_rate({lambda, tau * 1.01}));
    EXPECT_LT(r, required_rate({lambda * 1.01, tau}));
  }
}

}  // namespace
}  // namespace macfeas
