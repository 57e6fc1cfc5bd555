#pragma once

// Several heaps played together, each with its own removal cap. A move takes
// from exactly one heap and only that heap's cap changes, so a state is the
// disjunctive sum of its heaps and its value is the XOR of the heap values.

#include <charconv>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fibnim/engine.hpp"

namespace fibnim {

enum class Player { first, second };

inline Player other(Player p) { return p == Player::first ? Player::second : Player::first; }

inline std::string_view to_string(Player p) { return p == Player::first ? "first" : "second"; }

struct MoveRecord {
  std::size_t heap_index = 0;
  Tokens take = 0;
  Position resulting_position;
  Player player = Player::first;
  friend bool operator==(const MoveRecord&, const MoveRecord&) = default;
};

class IllegalMoveError : public std::invalid_argument {
 public:
  IllegalMoveError(std::size_t heap_index, Tokens take, std::optional<Tokens> cap, const std::string& what)
      : std::invalid_argument(what), heap_index_(heap_index), take_(take), cap_(cap) {}

  std::size_t heap_index() const { return heap_index_; }
  Tokens take() const { return take_; }
  /// The heap's legal cap; empty when the heap index itself was invalid.
  std::optional<Tokens> cap() const { return cap_; }

 private:
  std::size_t heap_index_;
  Tokens take_;
  std::optional<Tokens> cap_;
};

class MultiHeapState {
 public:
  MultiHeapState() = default;
  explicit MultiHeapState(std::vector<Position> heaps, Player to_move = Player::first)
      : heaps_(std::move(heaps)), to_move_(to_move) {}

  /// Fresh heaps of the given sizes, each with cap n - 1.
  static MultiHeapState fresh(const std::vector<Tokens>& sizes) {
    std::vector<Position> heaps;
    heaps.reserve(sizes.size());
    for (Tokens n : sizes) heaps.push_back(Position::start(n));
    return MultiHeapState(std::move(heaps));
  }

  const std::vector<Position>& heaps() const { return heaps_; }
  Player to_move() const { return to_move_; }
  const std::vector<MoveRecord>& history() const { return history_; }

  bool terminal() const {
    for (const auto& h : heaps_) {
      if (!h.dead()) return false;
    }
    return true;
  }

  friend bool operator==(const MultiHeapState&, const MultiHeapState&) = default;

 private:
  friend MultiHeapState apply_move(const MultiHeapState&, std::size_t, Tokens);

  std::vector<Position> heaps_;
  Player to_move_ = Player::first;
  std::vector<MoveRecord> history_;
};

/// XOR of the per-heap Grundy values; 0 for no heaps.
inline Grundy game_value(const std::vector<Position>& heaps, const GrundyTable& table) {
  Grundy v = 0;
  for (const auto& h : heaps) v ^= grundy(h, table);
  return v;
}

inline Grundy game_value(const MultiHeapState& s, const GrundyTable& table) { return game_value(s.heaps(), table); }

/// Ordered by heap index, then ascending take.
inline std::vector<MoveRecord> legal_moves(const MultiHeapState& s) {
  std::vector<MoveRecord> out;
  for (std::size_t i = 0; i < s.heaps().size(); ++i) {
    const Position h = s.heaps()[i];
    for (Tokens k = 1; k <= h.cap(); ++k) out.push_back({i, k, h.after(k), s.to_move()});
  }
  return out;
}

/// Legal moves whose successor has value 0, in legal_moves order.
inline std::vector<MoveRecord> winning_moves(const MultiHeapState& s, const GrundyTable& table) {
  std::vector<Grundy> values;
  values.reserve(s.heaps().size());
  Grundy total = 0;
  for (const auto& h : s.heaps()) {
    values.push_back(grundy(h, table));
    total ^= values.back();
  }
  std::vector<MoveRecord> out;
  if (total == 0) return out;
  for (std::size_t i = 0; i < s.heaps().size(); ++i) {
    // Heap i must move to the value that cancels the others.
    const Grundy target = total ^ values[i];
    const Position h = s.heaps()[i];
    for (Tokens k = 1; k <= h.cap(); ++k) {
      if (grundy(h.after(k), table) == target) out.push_back({i, k, h.after(k), s.to_move()});
    }
  }
  return out;
}

/// Returns the successor state. Throws IllegalMoveError carrying the heap's cap.
inline MultiHeapState apply_move(const MultiHeapState& s, std::size_t heap_index, Tokens take) {
  if (heap_index >= s.heaps().size()) {
    throw IllegalMoveError(heap_index, take, std::nullopt,
                           "no heap " + std::to_string(heap_index) + " (state has " +
                               std::to_string(s.heaps().size()) + " heaps)");
  }
  const Position h = s.heaps()[heap_index];
  if (take < 1 || take > h.cap()) {
    throw IllegalMoveError(heap_index, take, h.cap(),
                           "cannot take " + std::to_string(take) + " from heap " + std::to_string(heap_index) +
                               ": cap is " + std::to_string(h.cap()));
  }
  MultiHeapState next = s;
  next.heaps_[heap_index] = h.after(take);
  next.history_.push_back({heap_index, take, next.heaps_[heap_index], s.to_move()});
  next.to_move_ = other(s.to_move());
  return next;
}

inline MultiHeapState apply_move(const MultiHeapState& s, const MoveRecord& m) {
  return apply_move(s, m.heap_index, m.take);
}

class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct BruteForceLimits {
  std::size_t max_heaps = 3;
  Tokens max_total_tokens = 36;
};

/// Values a whole sum by mex over its successors, never decomposing it into
/// heaps. The memo lives as long as the solver.
class BruteForceSolver {
 public:
  explicit BruteForceSolver(BruteForceLimits limits = {}) : limits_(limits) {}

  Grundy value(const std::vector<Position>& heaps) {
    if (heaps.size() > limits_.max_heaps) {
      throw SizeGuardError("brute force: " + std::to_string(heaps.size()) + " heaps exceeds limit " +
                           std::to_string(limits_.max_heaps));
    }
    Tokens total = 0;
    for (const auto& h : heaps) total += h.tokens();
    if (total > limits_.max_total_tokens) {
      throw SizeGuardError("brute force: " + std::to_string(total) + " tokens exceeds limit " +
                           std::to_string(limits_.max_total_tokens));
    }
    std::vector<Position> work = heaps;
    return solve(work);
  }

  Grundy value(const MultiHeapState& s) { return value(s.heaps()); }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  // 8 bits per coordinate is enough under the token guard; heap count in the
  // top byte keeps states with trailing empty heaps distinct.
  std::uint64_t key(const std::vector<Position>& heaps) const {
    std::uint64_t k = heaps.size();
    for (const auto& h : heaps) k = (k << 16) | (h.tokens() << 8) | h.cap();
    return k;
  }

  Grundy solve(std::vector<Position>& heaps) {
    const std::uint64_t k = key(heaps);
    if (auto it = memo_.find(k); it != memo_.end()) return it->second;
    std::vector<Grundy> seen;
    for (std::size_t i = 0; i < heaps.size(); ++i) {
      const Position saved = heaps[i];
      for (Tokens take = 1; take <= saved.cap(); ++take) {
        heaps[i] = saved.after(take);
        seen.push_back(solve(heaps));
      }
      heaps[i] = saved;
    }
    const Grundy g = mex(seen);
    memo_.emplace(k, g);
    return g;
  }

  BruteForceLimits limits_;
  std::unordered_map<std::uint64_t, Grundy> memo_;
};

/// One-shot brute-force value with a private memo.
inline Grundy brute_force_value(const MultiHeapState& s, BruteForceLimits limits = {}) {
  return BruteForceSolver(limits).value(s);
}

class HeapListError : public std::invalid_argument {
 public:
  HeapListError(std::string token, const std::string& what) : std::invalid_argument(what), token_(std::move(token)) {}
  /// The offending piece of input.
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline Tokens parse_count(std::string_view text, std::string_view item) {
  Tokens v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw HeapListError(std::string(item), "bad heap '" + std::string(item) + "': expected tokens or tokens:cap");
  }
  return v;
}

}  // namespace detail

/// Parses `tokens[:cap]` items separated by commas, e.g. "12,7:6,5:5". A
/// missing cap means tokens - 1. Caps above the heap size are clamped.
inline std::vector<Position> parse_heap_list(std::string_view text) {
  std::vector<Position> out;
  if (detail::trim(text).empty()) throw HeapListError("", "empty heap list");
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view item = detail::trim(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
    const std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) {
      out.push_back(Position::start(detail::parse_count(item, item)));
    } else {
      const Tokens n = detail::parse_count(detail::trim(item.substr(0, colon)), item);
      const Tokens r = detail::parse_count(detail::trim(item.substr(colon + 1)), item);
      out.emplace_back(n, r);
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline std::string format_heap_list(const std::vector<Position>& heaps) {
  std::string out;
  for (std::size_t i = 0; i < heaps.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(heaps[i].tokens()) + ':' + std::to_string(heaps[i].cap());
  }
  return out;
}

}  // namespace fibnim
