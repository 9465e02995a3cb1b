#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace xcsp {

using Int = std::int64_t;

/// Element of the valuation structure [0..k]: a nonnegative integer or the
/// distinguished value infinity, which compares greater than every finite
/// cost. Addition saturates at infinity.
class Cost {
public:
  constexpr Cost() = default;
  explicit Cost(Int value);

  static constexpr Cost infinity() noexcept {
    Cost c;
    c.infinite_ = true;
    return c;
  }

  constexpr bool is_infinite() const noexcept { return infinite_; }
  constexpr bool is_finite() const noexcept { return !infinite_; }
  /// Finite value; throws for infinity.
  Int value() const;

  std::string to_string() const;
  /// Accepts a nonnegative integer or the word "infinity".
  static Cost parse(std::string_view text);

  friend constexpr bool operator==(const Cost& a, const Cost& b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend constexpr std::strong_ordering operator<=>(const Cost& a, const Cost& b) noexcept {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }

private:
  Int value_ = 0;
  bool infinite_ = false;
};

/// Plain saturating sum; overflow of two finite costs yields infinity.
Cost saturating_add(Cost a, Cost b) noexcept;

/// S(k): costs in [0..k] combined with a (+) b = min(k, a + b).
class Valuation {
public:
  explicit Valuation(Cost top);

  Cost top() const noexcept { return top_; }
  Cost combine(Cost a, Cost b) const noexcept;
  /// Brings any cost into [0..k]; infinity maps to k when k is finite.
  Cost clamp(Cost c) const noexcept;
  bool consistent(Cost c) const noexcept { return c < top_; }

private:
  Cost top_;
};

}  // namespace xcsp
