#pragma once

// Fibonacci arithmetic and Zeckendorf decomposition.
//
// Indexing follows F_0 = 0, F_1 = 1. Canonical representations store the
// part 1 as F_2, so every part index is >= 2 and indices of a representation
// are strictly ascending with gaps of at least two.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fibnim {

using Tokens = std::uint64_t;
using FibIndex = unsigned;

/// Largest index whose Fibonacci number fits in 64 bits (F_93 ~ 1.22e19).
inline constexpr FibIndex kMaxFibIndex = 93;

namespace detail {

inline constexpr auto kFibTable = [] {
  std::array<Tokens, kMaxFibIndex + 1> table{};
  table[0] = 0;
  table[1] = 1;
  for (FibIndex t = 2; t <= kMaxFibIndex; ++t) table[t] = table[t - 1] + table[t - 2];
  return table;
}();

/// Largest t >= 2 with F_t <= value, for value >= 1.
inline FibIndex largest_index_at_most(Tokens value) {
  auto it = std::upper_bound(kFibTable.begin() + 2, kFibTable.end(), value);
  return static_cast<FibIndex>(it - kFibTable.begin()) - 1;
}

}  // namespace detail

/// F_t for 0 <= t <= 93. Throws std::out_of_range beyond that.
constexpr Tokens fib(FibIndex t) {
  if (t > kMaxFibIndex) {
    throw std::out_of_range("fib: index " + std::to_string(t) + " exceeds supported maximum " +
                            std::to_string(kMaxFibIndex));
  }
  return detail::kFibTable[t];
}

/// A Zeckendorf part, or the infinity sentinel used when a representation
/// has fewer parts than requested. Infinity compares greater than every
/// integer and carries no arithmetic.
class ZPart {
 public:
  constexpr ZPart() = default;  // infinity
  constexpr explicit ZPart(Tokens value) : value_(value) {}

  static constexpr ZPart infinity() { return ZPart(); }

  constexpr bool finite() const { return value_.has_value(); }
  constexpr bool is_infinite() const { return !value_.has_value(); }

  /// Throws std::logic_error on the sentinel.
  constexpr Tokens value() const {
    if (!value_) throw std::logic_error("ZPart: value of infinity requested");
    return *value_;
  }

  friend constexpr bool operator==(const ZPart&, const ZPart&) = default;
  friend constexpr std::strong_ordering operator<=>(const ZPart& a, const ZPart& b) {
    if (a.finite() && b.finite()) return *a.value_ <=> *b.value_;
    if (a.finite()) return std::strong_ordering::less;
    if (b.finite()) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend constexpr bool operator==(const ZPart& a, Tokens b) { return a.finite() && *a.value_ == b; }
  friend constexpr std::strong_ordering operator<=>(const ZPart& a, Tokens b) {
    if (!a.finite()) return std::strong_ordering::greater;
    return *a.value_ <=> b;
  }

  friend std::ostream& operator<<(std::ostream& os, const ZPart& z) {
    if (z.finite()) return os << *z.value_;
    return os << "inf";
  }

 private:
  std::optional<Tokens> value_;
};

class ZeckendorfRep {
 public:
  ZeckendorfRep() = default;

  /// Validates the canonical-form invariants; throws std::invalid_argument.
  ZeckendorfRep(std::vector<FibIndex> parts, Tokens n) : parts_(std::move(parts)), n_(n) {
    Tokens sum = 0;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] < 2 || parts_[i] > kMaxFibIndex) {
        throw std::invalid_argument("ZeckendorfRep: part index out of canonical range");
      }
      if (i > 0 && parts_[i] < parts_[i - 1] + 2) {
        throw std::invalid_argument("ZeckendorfRep: indices must ascend with gaps >= 2");
      }
      sum += fib(parts_[i]);
    }
    if (sum != n_) throw std::invalid_argument("ZeckendorfRep: parts do not sum to n");
  }

  const std::vector<FibIndex>& parts() const { return parts_; }
  Tokens n() const { return n_; }
  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }

  /// Part values, smallest first.
  std::vector<Tokens> values() const {
    std::vector<Tokens> out;
    out.reserve(parts_.size());
    for (FibIndex t : parts_) out.push_back(fib(t));
    return out;
  }

  /// The i-th smallest part (1-based), infinity when absent.
  ZPart part(std::size_t i) const {
    if (i == 0) throw std::invalid_argument("ZeckendorfRep::part: index is 1-based");
    if (i > parts_.size()) return ZPart::infinity();
    return ZPart(fib(parts_[i - 1]));
  }

  friend bool operator==(const ZeckendorfRep&, const ZeckendorfRep&) = default;

 private:
  std::vector<FibIndex> parts_;
  Tokens n_ = 0;
};

/// Greedy decomposition: repeatedly take the largest F_t <= remainder.
inline ZeckendorfRep zeckendorf(Tokens n) {
  std::vector<FibIndex> desc;
  for (Tokens rest = n; rest > 0;) {
    FibIndex t = detail::largest_index_at_most(rest);
    desc.push_back(t);
    rest -= fib(t);
  }
  return ZeckendorfRep(std::vector<FibIndex>(desc.rbegin(), desc.rend()), n);
}

/// z_i(n): the i-th smallest Zeckendorf part of n (i >= 1), infinity if absent.
inline ZPart z_part(std::size_t i, Tokens n) {
  if (i == 0) throw std::invalid_argument("z_part: index is 1-based");
  return zeckendorf(n).part(i);
}

/// Smallest Zeckendorf part, the canonical winning removal. Infinity for n = 0.
inline ZPart z1(Tokens n) {
  if (n == 0) return ZPart::infinity();
  // The smallest part is the lowest set position of the Zeckendorf word; peel
  // greedily only until the remainder is itself a Fibonacci number.
  for (Tokens rest = n;;) {
    Tokens top = fib(detail::largest_index_at_most(rest));
    if (top == rest) return ZPart(rest);
    rest -= top;
  }
}

inline bool is_fibonacci(Tokens n) {
  for (FibIndex t = 0; t <= kMaxFibIndex; ++t) {
    if (fib(t) == n) return true;
    if (fib(t) > n) return false;
  }
  return false;
}

/// Index t >= 2 of a Fibonacci number value >= 1 (1 maps to 2).
inline FibIndex fib_index(Tokens value) {
  for (FibIndex t = 2; t <= kMaxFibIndex; ++t) {
    if (fib(t) == value) return t;
    if (fib(t) > value) break;
  }
  throw std::invalid_argument("fib_index: " + std::to_string(value) + " is not a Fibonacci number");
}

}  // namespace fibnim
