#pragma once

// Grundy values of single-heap Fibonacci nim positions.
//
// A position (n, r) has n tokens and may remove 1..r of them; removing k
// leads to (n - k, 2k). Positions are normalized so that r <= n. Rows of the
// table are stored run-length encoded: along a row, G(n, r) is
// non-decreasing in r (the options of (n, r) are a subset of those of
// (n, r + 1)), so a row is a short list of (r_start, value) segments.

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibnim/zeckendorf.hpp"

namespace fibnim {

using Grundy = std::uint32_t;

class Position {
 public:
  constexpr Position() = default;
  /// Clamps the cap to the heap size.
  constexpr Position(Tokens tokens, Tokens cap) : n_(tokens), r_(std::min(cap, tokens)) {}

  /// A fresh heap: the first player may take up to n - 1.
  static constexpr Position start(Tokens tokens) { return Position(tokens, tokens == 0 ? 0 : tokens - 1); }

  constexpr Tokens tokens() const { return n_; }
  constexpr Tokens cap() const { return r_; }
  constexpr bool dead() const { return r_ == 0; }

  /// Position after removing `take` tokens; no legality check.
  constexpr Position after(Tokens take) const { return Position(n_ - take, 2 * take); }

  friend constexpr bool operator==(const Position&, const Position&) = default;
  friend constexpr auto operator<=>(const Position&, const Position&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Position& p) {
    return os << '(' << p.n_ << ',' << p.r_ << ')';
  }

 private:
  Tokens n_ = 0;
  Tokens r_ = 0;
};

class HorizonError : public std::out_of_range {
 public:
  HorizonError(Tokens n, Tokens max_n)
      : std::out_of_range("heap size " + std::to_string(n) + " is beyond the table horizon " +
                          std::to_string(max_n)),
        n_(n),
        max_n_(max_n) {}
  Tokens requested() const { return n_; }
  Tokens horizon() const { return max_n_; }

 private:
  Tokens n_;
  Tokens max_n_;
};

class CeilingError : public std::length_error {
 public:
  CeilingError(Tokens max_n, Tokens ceiling)
      : std::length_error("table size " + std::to_string(max_n) + " exceeds the configured ceiling " +
                          std::to_string(ceiling)) {}
};

/// Least nonnegative integer absent from `values`.
inline Grundy mex(std::span<const Grundy> values) {
  std::vector<bool> seen(values.size() + 1, false);
  for (Grundy v : values) {
    if (v < seen.size()) seen[v] = true;
  }
  Grundy m = 0;
  while (seen[m]) ++m;
  return m;
}

inline Grundy mex(std::initializer_list<Grundy> values) {
  return mex(std::span<const Grundy>(values.begin(), values.size()));
}

struct Segment {
  Tokens r_start;
  Grundy value;
  friend bool operator==(const Segment&, const Segment&) = default;
};

class GrundyRow {
 public:
  GrundyRow() = default;

  /// Segments must start at r = 0 with value 0, with strictly increasing
  /// starts and values, all starts <= n.
  GrundyRow(Tokens n, std::vector<Segment> segments) : n_(n), segments_(std::move(segments)) {
    if (segments_.empty() || segments_.front().r_start != 0 || segments_.front().value != 0) {
      throw std::invalid_argument("GrundyRow: first segment must be (0, 0)");
    }
    for (std::size_t i = 1; i < segments_.size(); ++i) {
      if (segments_[i].r_start <= segments_[i - 1].r_start || segments_[i].value <= segments_[i - 1].value) {
        throw std::invalid_argument("GrundyRow: segments must strictly increase");
      }
    }
    if (segments_.back().r_start > n_) throw std::invalid_argument("GrundyRow: segment beyond row end");
  }

  /// Compresses a dense row values[r], r = 0..n.
  static GrundyRow from_dense(std::span<const Grundy> values) {
    if (values.empty()) throw std::invalid_argument("GrundyRow: empty dense row");
    std::vector<Segment> segs;
    for (std::size_t r = 0; r < values.size(); ++r) {
      if (segs.empty() || segs.back().value != values[r]) segs.push_back({r, values[r]});
    }
    return GrundyRow(values.size() - 1, std::move(segs));
  }

  Tokens n() const { return n_; }
  const std::vector<Segment>& segments() const { return segments_; }

  /// G(n, r), with r clamped to n.
  Grundy lookup(Tokens r) const {
    if (r >= segments_.back().r_start) return segments_.back().value;
    auto it = std::upper_bound(segments_.begin(), segments_.end(), r,
                               [](Tokens x, const Segment& s) { return x < s.r_start; });
    return std::prev(it)->value;
  }

  /// G(n, n).
  Grundy full() const { return segments_.back().value; }

  std::vector<Grundy> dense() const {
    std::vector<Grundy> out(n_ + 1);
    for (Tokens r = 0; r <= n_; ++r) out[r] = lookup(r);
    return out;
  }

  friend bool operator==(const GrundyRow&, const GrundyRow&) = default;

 private:
  Tokens n_ = 0;
  std::vector<Segment> segments_{{0, 0}};
};

enum class RowStorage {
  compressed,  // successor lookups go through the run-length rows
  dense,       // successor lookups go through full scratch rows; differential testing only
};

struct TableOptions {
  Tokens ceiling = 100000;
  RowStorage storage = RowStorage::compressed;
};

inline constexpr Tokens kDefaultHorizon = 20000;

class GrundyTable {
 public:
  explicit GrundyTable(std::vector<GrundyRow> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw std::invalid_argument("GrundyTable: no rows");
    for (std::size_t n = 0; n < rows_.size(); ++n) {
      if (rows_[n].n() != n) throw std::invalid_argument("GrundyTable: row index mismatch");
    }
  }

  Tokens max_n() const { return rows_.size() - 1; }
  const std::vector<GrundyRow>& rows() const { return rows_; }

  const GrundyRow& row(Tokens n) const {
    if (n > max_n()) throw HorizonError(n, max_n());
    return rows_[n];
  }

  Grundy value(Position p) const { return row(p.tokens()).lookup(p.cap()); }

  friend bool operator==(const GrundyTable&, const GrundyTable&) = default;

 private:
  std::vector<GrundyRow> rows_;
};

namespace detail {

// Sweeps k = 1..n for one row. The option value for removal k is
// G(n - k, min(2k, n - k)); counts[] tracks the option multiset and the mex
// cursor only moves right, so after processing k it equals G(n, k).
template <typename Lookup>
GrundyRow build_row(Tokens n, Lookup&& successor_value, std::vector<std::uint32_t>& counts) {
  std::vector<Segment> segs{{0, 0}};
  std::fill(counts.begin(), counts.end(), 0);
  Grundy cursor = 0;
  for (Tokens k = 1; k <= n; ++k) {
    Grundy v = successor_value(n - k, std::min<Tokens>(2 * k, n - k));
    if (v >= counts.size()) counts.resize(static_cast<std::size_t>(v) + 2, 0);
    ++counts[v];
    while (cursor < counts.size() && counts[cursor] > 0) ++cursor;
    if (cursor >= counts.size()) counts.resize(static_cast<std::size_t>(cursor) + 2, 0);
    if (cursor != segs.back().value) segs.push_back({k, cursor});
  }
  return GrundyRow(n, std::move(segs));
}

}  // namespace detail

/// Builds rows 0..max_n bottom-up. O(max_n^2) successor lookups.
inline GrundyTable build_table(Tokens max_n, const TableOptions& options = {}) {
  if (max_n > options.ceiling) throw CeilingError(max_n, options.ceiling);
  std::vector<GrundyRow> rows;
  rows.reserve(max_n + 1);
  std::vector<std::uint32_t> counts(64, 0);

  if (options.storage == RowStorage::compressed) {
    auto lookup = [&rows](Tokens m, Tokens c) { return rows[m].lookup(c); };
    for (Tokens n = 0; n <= max_n; ++n) rows.push_back(detail::build_row(n, lookup, counts));
  } else {
    std::vector<std::vector<Grundy>> dense;
    dense.reserve(max_n + 1);
    auto lookup = [&dense](Tokens m, Tokens c) { return dense[m][c]; };
    for (Tokens n = 0; n <= max_n; ++n) {
      rows.push_back(detail::build_row(n, lookup, counts));
      dense.push_back(rows.back().dense());
    }
  }
  return GrundyTable(std::move(rows));
}

/// G(n, r) after clamping r to n. Throws HorizonError beyond the table.
inline Grundy grundy(Position p, const GrundyTable& table) { return table.value(p); }

/// G(n, n - 1), the value of a fresh heap of n >= 1 tokens.
inline Grundy grundy_start(Tokens n, const GrundyTable& table) {
  if (n == 0) throw std::invalid_argument("grundy_start: a starting heap needs at least one token");
  return table.value(Position::start(n));
}

struct Option {
  Tokens take;
  Position next;
  friend bool operator==(const Option&, const Option&) = default;
};

/// All moves from p, ascending by removal size.
inline std::vector<Option> options(Position p) {
  std::vector<Option> out;
  out.reserve(p.cap());
  for (Tokens k = 1; k <= p.cap(); ++k) out.push_back({k, p.after(k)});
  return out;
}

/// Removals that leave a Grundy-0 position, ascending.
inline std::vector<Tokens> winning_removals(Position p, const GrundyTable& table) {
  if (p.tokens() > table.max_n()) throw HorizonError(p.tokens(), table.max_n());
  std::vector<Tokens> out;
  for (Tokens k = 1; k <= p.cap(); ++k) {
    if (table.value(p.after(k)) == 0) out.push_back(k);
  }
  return out;
}

/// CSV export: header `n,r,g`, then one line per (n, r <= n) in lexicographic order.
inline void write_csv(std::ostream& os, const GrundyTable& table) {
  os << "n,r,g\n";
  for (const auto& row : table.rows()) {
    for (Tokens r = 0; r <= row.n(); ++r) os << row.n() << ',' << r << ',' << row.lookup(r) << '\n';
  }
}

}  // namespace fibnim
