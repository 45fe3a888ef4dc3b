#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace macfeas {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument is outside the mathematical domain of the operation
/// (non-positive rate, negative power, NaN, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Utilization λ/R reached or exceeded one.
class UnstableQueueError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Vectors that must be used jointly have different lengths.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A per-user computation failed; carries the offending user index.
class UserError : public DomainError {
 public:
  UserError(std::size_t user, const std::string& what)
      : DomainError("user " + std::to_string(user) + ": " + what), user_(user) {}

  std::size_t user() const noexcept { return user_; }

 private:
  std::size_t user_;
};

/// Exhaustive enumeration was requested for more users than allowed.
class UserCountExceedsCap : public Error {
 public:
  using Error::Error;
};

/// The equal-power fast path was called with unequal powers.
class UnequalPowersError : public Error {
 public:
  using Error::Error;
};

/// A set-function oracle does not satisfy f(∅) = 0.
class NotNormalizedError : public Error {
 public:
  using Error::Error;
};

/// A sampled pair (S, T) violated f(S) + f(T) >= f(S ∪ T) + f(S ∩ T).
class SubmodularityViolation : public Error {
 public:
  using Error::Error;
};

/// The minimizer exceeded its step budget.
class IterationBudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// exchange_capacity was asked about a pair that is not adjacent in the ordering.
class AdjacencyError : public Error {
 public:
  using Error::Error;
};

/// double_exchange was asked to act on a triple that is not active.
class InactiveTripleError : public Error {
 public:
  using Error::Error;
};

/// A convex combination handed to reduce() has bad coefficients or shapes.
class InconsistentCombinationError : public Error {
 public:
  using Error::Error;
};

/// Fixed-sum reallocation was requested below the minimum sum power.
class BelowThresholdError : public Error {
 public:
  BelowThresholdError(double sum_power, double threshold)
      : Error("sum power " + std::to_string(sum_power) +
              " W is below the minimum required sum power " +
              std::to_string(threshold) + " W"),
        sum_power_(sum_power),
        threshold_(threshold) {}

  double sum_power() const noexcept { return sum_power_; }
  double threshold() const noexcept { return threshold_; }

 private:
  double sum_power_;
  double threshold_;
};

}  // namespace macfeas
