#pragma once

// Command implementations behind the `fibnim` executable. Each command writes
// to a stream and returns the process exit code.

#include <charconv>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fibnim/analysis.hpp"
#include "fibnim/engine.hpp"
#include "fibnim/multiheap.hpp"
#include "fibnim/service.hpp"

namespace fibnim::cli {

enum class OutputFormat { pretty, csv, json };

inline constexpr Tokens kServeDefaultHorizon = 5000;
inline constexpr const char* kHorizonEnv = "FIBNIM_MAX_N";

struct CliConfig {
  Tokens max_n = kDefaultHorizon;
  OutputFormat format = OutputFormat::pretty;
  int port = 8080;
  Tokens ceiling = TableOptions{}.ceiling;
};

/// Flag beats environment beats the built-in default.
inline Tokens resolve_horizon(std::optional<Tokens> flag, Tokens fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kHorizonEnv); env && *env) {
    Tokens v = 0;
    std::string_view text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw std::invalid_argument(std::string(kHorizonEnv) + " is not a nonnegative integer: " + env);
    }
    return v;
  }
  return fallback;
}

inline void render_pretty_table(std::ostream& os, const GrundyTable& table) {
  const auto width = std::to_string(table.row(table.max_n()).full()).size();
  const auto nwidth = std::to_string(table.max_n()).size();
  for (const auto& row : table.rows()) {
    os << std::setw(static_cast<int>(nwidth)) << row.n() << " |";
    for (Tokens r = 0; r <= row.n(); ++r) os << ' ' << std::setw(static_cast<int>(width)) << row.lookup(r);
    os << '\n';
  }
}

inline int cmd_table(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const GrundyTable table = build_table(cfg.max_n, {.ceiling = cfg.ceiling});
    switch (cfg.format) {
      case OutputFormat::csv: write_csv(out, table); break;
      case OutputFormat::pretty: render_pretty_table(out, table); break;
      case OutputFormat::json: {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : table.rows()) rows.push_back(row.dense());
        out << nlohmann::json{{"max_n", table.max_n()}, {"rows", rows}}.dump() << '\n';
        break;
      }
    }
    return 0;
  } catch (const CeilingError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

/// Exit 0 for an N-position, 2 for a P-position, 1 for bad input.
inline int cmd_analyze(const CliConfig& cfg, std::string_view heap_list, std::ostream& out, std::ostream& err) {
  std::vector<Position> heaps;
  try {
    heaps = parse_heap_list(heap_list);
  } catch (const HeapListError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  Tokens largest = 0;
  for (const auto& h : heaps) largest = std::max(largest, h.tokens());
  if (largest > cfg.ceiling) {
    err << "error: heap of " << largest << " tokens exceeds the ceiling " << cfg.ceiling << '\n';
    return 1;
  }
  const GrundyTable table = build_table(largest, {.ceiling = cfg.ceiling});
  const auto doc = analysis_json(heaps, table);
  const bool p_position = doc["nim_sum"].get<Grundy>() == 0;

  switch (cfg.format) {
    case OutputFormat::json: out << doc.dump(2) << '\n'; break;
    case OutputFormat::csv:
      out << "heap,tokens,cap,grundy,zeckendorf\n";
      for (std::size_t i = 0; i < heaps.size(); ++i) {
        const auto& h = doc["heaps"][i];
        out << i << ',' << h["tokens"] << ',' << h["cap"] << ',' << h["grundy"] << ',';
        const auto parts = h["zeckendorf"];
        for (std::size_t j = 0; j < parts.size(); ++j) out << (j ? "+" : "") << parts[j];
        out << '\n';
      }
      break;
    case OutputFormat::pretty:
      for (std::size_t i = 0; i < heaps.size(); ++i) {
        const auto& h = doc["heaps"][i];
        out << "heap " << i << ": " << h["tokens"] << " tokens, cap " << h["cap"] << ", grundy " << h["grundy"]
            << ", zeckendorf ";
        const auto& parts = h["zeckendorf"];
        if (parts.empty()) out << '0';
        for (std::size_t j = 0; j < parts.size(); ++j) out << (j ? "+" : "") << parts[j];
        out << '\n';
      }
      out << "nim-sum " << doc["nim_sum"] << ": " << (p_position ? "P-position" : "N-position") << '\n';
      if (p_position) {
        out << "no winning move\n";
      } else {
        for (const auto& m : doc["winning_moves"]) {
          out << "winning move: take " << m["take"] << " from heap " << m["heap"] << '\n';
        }
      }
      out << "hint: " << doc["hint"].get<std::string>() << '\n';
      break;
  }
  return p_position ? 2 : 0;
}

struct VerifySelection {
  bool small_values = false;
  bool growth = false;
  bool lemma = false;
  bool strategy = false;

  bool any() const { return small_values || growth || lemma || strategy; }
};

inline void render_pretty_report(std::ostream& os, const ScanReport& rep) {
  os << "range " << rep.n_lo << ".." << rep.n_hi << '\n';
  for (const auto& c : rep.checks) {
    os << "  " << std::left << std::setw(32) << c.id << std::right << " checked " << std::setw(10) << c.checked
       << "  violations " << c.violations << '\n';
  }
  if (!rep.h_seq.empty()) {
    os << "h_seq:";
    for (const auto& e : rep.h_seq) os << " (" << e.g << ',' << e.h << ')';
    os << '\n';
  }
  if (!rep.j_prefix_seq.empty()) {
    os << "j_prefix_seq (upper estimate / floor g):";
    for (const auto& e : rep.j_prefix_seq) os << " (" << e.g << ',' << e.r_upper << ')';
    os << '\n';
  }
  if (rep.endpoint) {
    const auto& e = *rep.endpoint;
    os << "upper bound: G(" << e.n << ")=" << e.g << " <= ceil(2 sqrt " << e.n << ")+1 = " << e.upper_bound << '\n';
    os << "m-sequence bound: G(" << e.n << ")=" << e.g << " >= " << e.mseq_bound << '\n';
    os << "log_{3/2}(" << e.n << ") = " << std::fixed << std::setprecision(3) << e.log_bound
       << std::defaultfloat << " (not asserted; " << rep.log_bound_gaps.size() << " n below it)\n";
  }
  if (!rep.conjecture_counterexamples.empty()) {
    os << "conjecture counterexamples (informational):";
    for (const auto& c : rep.conjecture_counterexamples) os << " n=" << c.n;
    os << '\n';
  }
  for (const auto& v : rep.violations) {
    os << "VIOLATION " << v.claim << " at " << v.witness << ": expected " << v.expected << ", observed " << v.observed
       << '\n';
  }
  os << (rep.ok() ? "OK" : "FAILED") << " in " << rep.elapsed.count() << " ms\n";
}

/// Runs the selected sweeps (all when none selected). Exit 0 iff no violations.
inline int cmd_verify(const CliConfig& cfg, VerifySelection sel, std::ostream& out, std::ostream& err) {
  if (!sel.any()) sel = {true, true, true, true};
  std::optional<GrundyTable> table;
  try {
    if (sel.small_values || sel.growth || sel.strategy) table = build_table(cfg.max_n, {.ceiling = cfg.ceiling});
  } catch (const CeilingError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  ScanReport rep;
  bool first = true;
  auto add = [&](ScanReport part) {
    rep = first ? std::move(part) : merge(rep, part);
    first = false;
  };
  if (sel.small_values) add(verify_small_values(*table, cfg.max_n));
  if (sel.growth) add(verify_growth(*table, cfg.max_n));
  if (sel.lemma) add(verify_smallfibs_lemma(cfg.max_n));
  if (sel.strategy) add(verify_strategy(*table, cfg.max_n));

  switch (cfg.format) {
    case OutputFormat::json: out << to_json(rep).dump(2) << '\n'; break;
    case OutputFormat::csv:
      out << "id,checked,violations\n";
      for (const auto& c : rep.checks) out << c.id << ',' << c.checked << ',' << c.violations << '\n';
      break;
    case OutputFormat::pretty: render_pretty_report(out, rep); break;
  }
  return rep.ok() ? 0 : 1;
}

}  // namespace fibnim::cli
