#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace macfeas {

/// Largest ground set a SubsetMask can describe.
inline constexpr std::size_t kMaxUsers = 64;

/// A subset of {0, ..., N-1} stored as a bitmask (bit i set <=> user i is a
/// member). User indices are zero-based in code and one-based when printed.
class SubsetMask {
 public:
  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint64_t bits) : bits_(bits) {}

  static constexpr SubsetMask empty() { return SubsetMask{}; }
  static constexpr SubsetMask full(std::size_t n) {
    return SubsetMask{n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1};
  }
  static constexpr SubsetMask singleton(std::size_t i) {
    return SubsetMask{std::uint64_t{1} << i};
  }
  static SubsetMask of(const std::vector<std::size_t>& members) {
    SubsetMask s;
    for (auto i : members) s = s.with(i);
    return s;
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1u; }
  constexpr bool is_empty() const { return bits_ == 0; }
  constexpr std::size_t size() const {
    return static_cast<std::size_t>(std::popcount(bits_));
  }

  constexpr SubsetMask with(std::size_t i) const {
    return SubsetMask{bits_ | (std::uint64_t{1} << i)};
  }
  constexpr SubsetMask without(std::size_t i) const {
    return SubsetMask{bits_ & ~(std::uint64_t{1} << i)};
  }
  constexpr SubsetMask operator|(SubsetMask o) const { return SubsetMask{bits_ | o.bits_}; }
  constexpr SubsetMask operator&(SubsetMask o) const { return SubsetMask{bits_ & o.bits_}; }
  constexpr bool is_subset_of(SubsetMask o) const { return (bits_ & ~o.bits_) == 0; }
  /// True when every member index is below n.
  constexpr bool fits(std::size_t n) const { return SubsetMask::full(n).bits_ == (bits_ | SubsetMask::full(n).bits_); }

  constexpr auto operator<=>(const SubsetMask&) const = default;

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    }
    return out;
  }

  /// "{1,3}" with one-based user numbers.
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (auto i : members()) {
      if (!first) s += ',';
      s += std::to_string(i + 1);
      first = false;
    }
    return s + "}";
  }

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace macfeas
