#pragma once

// Game sessions and analysis documents behind the HTTP API. Everything here
// speaks nlohmann::json; the transport lives in fibnim/http.hpp.

#include <cstdint>
#include <deque>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fibnim/engine.hpp"
#include "fibnim/multiheap.hpp"
#include "fibnim/zeckendorf.hpp"

namespace fibnim {

using nlohmann::json;

enum class EngineRole { none, plays_first, plays_second };
enum class GameStatus { in_progress, first_won, second_won };

inline std::string_view to_string(EngineRole r) {
  switch (r) {
    case EngineRole::none: return "none";
    case EngineRole::plays_first: return "plays_first";
    case EngineRole::plays_second: return "plays_second";
  }
  return "none";
}

inline std::string_view to_string(GameStatus s) {
  switch (s) {
    case GameStatus::in_progress: return "in_progress";
    case GameStatus::first_won: return "first_won";
    case GameStatus::second_won: return "second_won";
  }
  return "in_progress";
}

/// An error with an HTTP status and a machine-readable code.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& message, json details = json::object())
      : std::runtime_error(message), status_(status), code_(std::move(code)), details_(std::move(details)) {}

  int status() const { return status_; }
  const std::string& code() const { return code_; }
  const json& details() const { return details_; }

  json body() const {
    json b = {{"error", code_}, {"message", what()}};
    for (auto& [k, v] : details_.items()) b[k] = v;
    return b;
  }

 private:
  int status_;
  std::string code_;
  json details_;
};

inline EngineRole parse_engine_role(std::string_view s) {
  if (s == "none") return EngineRole::none;
  if (s == "plays_first") return EngineRole::plays_first;
  if (s == "plays_second") return EngineRole::plays_second;
  throw ServiceError(400, "bad_engine_role", "engine_role must be none, plays_first or plays_second",
                     {{"engine_role", std::string(s)}});
}

/// Normal play: when no move is left, the player to move has lost.
inline GameStatus derive_status(const MultiHeapState& s) {
  if (!s.terminal()) return GameStatus::in_progress;
  return s.to_move() == Player::first ? GameStatus::second_won : GameStatus::first_won;
}

/// The engine's move: the first winning move if one exists, else take 1 from
/// the lowest-index heap that can move. Requires a non-terminal state.
inline MoveRecord engine_choice(const MultiHeapState& s, const GrundyTable& table) {
  auto wins = winning_moves(s, table);
  if (!wins.empty()) return wins.front();
  for (std::size_t i = 0; i < s.heaps().size(); ++i) {
    const Position h = s.heaps()[i];
    if (!h.dead()) return {i, 1, h.after(1), s.to_move()};
  }
  throw std::logic_error("engine_choice: no legal move in a terminal state");
}

struct GameSession {
  std::string id;
  std::vector<Position> initial;
  MultiHeapState state;
  EngineRole engine_role = EngineRole::none;

  GameStatus status() const { return derive_status(state); }

  std::optional<Player> engine_player() const {
    switch (engine_role) {
      case EngineRole::plays_first: return Player::first;
      case EngineRole::plays_second: return Player::second;
      case EngineRole::none: break;
    }
    return std::nullopt;
  }

  bool engine_to_move() const { return status() == GameStatus::in_progress && engine_player() == state.to_move(); }
};

/// Folds apply_move over a recorded history starting from `initial`.
inline MultiHeapState replay(const std::vector<Position>& initial, const std::vector<MoveRecord>& history) {
  MultiHeapState s(initial);
  for (const auto& m : history) s = apply_move(s, m);
  return s;
}

inline json heap_json(Position p, const GrundyTable& table) {
  return {{"tokens", p.tokens()}, {"cap", p.cap()}, {"grundy", grundy(p, table)}};
}

inline json session_json(const GameSession& g, const GrundyTable& table) {
  json heaps = json::array();
  for (const auto& h : g.state.heaps()) heaps.push_back(heap_json(h, table));
  json history = json::array();
  for (const auto& m : g.state.history()) {
    history.push_back({{"player", to_string(m.player)}, {"heap", m.heap_index}, {"take", m.take}});
  }
  return {{"id", g.id},
          {"heaps", heaps},
          {"nim_sum", game_value(g.state, table)},
          {"to_move", to_string(g.state.to_move())},
          {"status", to_string(g.status())},
          {"engine_role", to_string(g.engine_role)},
          {"initial_heaps", format_heap_list(g.initial)},
          {"history", history}};
}

/// Per-heap values and Zeckendorf parts, the nim-sum, every winning move and a
/// short hint. A lone heap that is an N-position gets the canonical hint of
/// removing its smallest Zeckendorf part.
inline json analysis_json(const std::vector<Position>& heaps, const GrundyTable& table) {
  const MultiHeapState s(heaps);
  json per_heap = json::array();
  for (const auto& h : heaps) {
    json entry = heap_json(h, table);
    entry["zeckendorf"] = zeckendorf(h.tokens()).values();
    const ZPart smallest = z1(h.tokens());
    entry["canonical_take"] = smallest <= h.cap() ? json(smallest.value()) : json(nullptr);
    per_heap.push_back(entry);
  }
  json moves = json::array();
  const auto wins = winning_moves(s, table);
  for (const auto& m : wins) moves.push_back({{"heap", m.heap_index}, {"take", m.take}});
  const Grundy value = game_value(s, table);

  std::string hint;
  if (value == 0) {
    hint = "P-position: no winning move";
  } else if (heaps.size() == 1) {
    hint = "remove z_1(n) = " + std::to_string(z1(heaps[0].tokens()).value()) + " tokens";
  } else {
    hint = "take " + std::to_string(wins.front().take) + " from heap " + std::to_string(wins.front().heap_index) +
           " to reach nim-sum 0";
  }
  return {{"heaps", per_heap},
          {"nim_sum", value},
          {"position", value == 0 ? "P" : "N"},
          {"winning_moves", moves},
          {"hint", hint}};
}

struct ServiceConfig {
  std::size_t capacity = 1024;
  std::size_t max_heaps = 8;
  std::optional<std::uint64_t> seed;  // id generator seed; random when empty
};

/// Sessions keyed by id. Each session has its own mutex; the map has another.
class SessionStore {
 public:
  struct Slot {
    std::mutex mutex;
    GameSession session;
  };

  explicit SessionStore(std::size_t capacity) : capacity_(capacity) {}

  /// Adds a session, evicting the oldest finished one when full.
  void insert(GameSession session) {
    std::lock_guard lock(mutex_);
    if (slots_.contains(session.id)) throw ServiceError(409, "duplicate_id", "session id already in use");
    if (slots_.size() >= capacity_) evict_locked();
    auto slot = std::make_shared<Slot>();
    const std::string id = session.id;
    slot->session = std::move(session);
    slots_.emplace(id, std::move(slot));
    order_.push_back(id);
  }

  std::shared_ptr<Slot> find(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = slots_.find(id);
    if (it == slots_.end()) throw ServiceError(404, "unknown_game", "no game with id " + id, {{"id", id}});
    return it->second;
  }

  bool contains(const std::string& id) const {
    std::lock_guard lock(mutex_);
    return slots_.contains(id);
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return slots_.size();
  }

  std::size_t capacity() const { return capacity_; }

  /// Copies of all sessions in insertion order.
  std::vector<GameSession> snapshot() const {
    std::vector<std::shared_ptr<Slot>> slots;
    {
      std::lock_guard lock(mutex_);
      for (const auto& id : order_) slots.push_back(slots_.at(id));
    }
    std::vector<GameSession> out;
    for (const auto& s : slots) {
      std::lock_guard lock(s->mutex);
      out.push_back(s->session);
    }
    return out;
  }

 private:
  void evict_locked() {
    for (auto it = order_.begin(); it != order_.end(); ++it) {
      std::shared_ptr<Slot> slot = slots_.at(*it);
      bool finished;
      {
        std::lock_guard lock(slot->mutex);
        finished = slot->session.status() != GameStatus::in_progress;
      }
      if (finished) {
        slots_.erase(*it);
        order_.erase(it);
        return;
      }
    }
    throw ServiceError(503, "store_full", "all " + std::to_string(capacity_) + " sessions are still in progress");
  }

  std::size_t capacity_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
  std::deque<std::string> order_;
};

class Service {
 public:
  Service(std::shared_ptr<const GrundyTable> table, ServiceConfig config = {})
      : table_(std::move(table)), config_(config), store_(config.capacity), rng_(config.seed.value_or(std::random_device{}())) {}

  const GrundyTable& table() const { return *table_; }
  Tokens horizon() const { return table_->max_n(); }
  const SessionStore& store() const { return store_; }

  json health() const { return {{"status", "ok"}, {"table_horizon", horizon()}}; }

  /// POST /api/games body: {"heaps": "12,7:6", "engine_role": "plays_second"}.
  json create_game(const json& body) {
    if (!body.is_object() || !body.contains("heaps") || !body["heaps"].is_string()) {
      throw ServiceError(400, "bad_request", "body must be an object with a string field 'heaps'");
    }
    EngineRole role = EngineRole::none;
    if (body.contains("engine_role")) {
      if (!body["engine_role"].is_string()) throw ServiceError(400, "bad_engine_role", "engine_role must be a string");
      role = parse_engine_role(body["engine_role"].get<std::string>());
    }
    return create_game(body["heaps"].get<std::string>(), role);
  }

  json create_game(std::string_view heap_list, EngineRole role) {
    GameSession g;
    g.initial = parse_heaps(heap_list);
    if (g.initial.size() > config_.max_heaps) {
      throw ServiceError(400, "too_many_heaps", "at most " + std::to_string(config_.max_heaps) + " heaps allowed",
                         {{"max_heaps", config_.max_heaps}});
    }
    bool playable = false;
    for (const auto& h : g.initial) playable = playable || !h.dead();
    if (!playable) throw ServiceError(400, "no_playable_heap", "at least one heap must allow a move");
    g.state = MultiHeapState(g.initial);
    g.engine_role = role;
    g.id = fresh_id();
    if (g.engine_to_move()) g.state = apply_move(g.state, engine_choice(g.state, *table_));
    json doc = session_json(g, *table_);
    store_.insert(std::move(g));
    return doc;
  }

  json get_game(const std::string& id) const {
    auto slot = store_.find(id);
    std::lock_guard lock(slot->mutex);
    return session_json(slot->session, *table_);
  }

  /// POST /api/games/{id}/moves body: {"heap": 0, "take": 3}.
  json submit_move(const std::string& id, const json& body) {
    auto natural = [&](const char* key) {
      return body.contains(key) && body[key].is_number_integer() && body[key].get<std::int64_t>() >= 0;
    };
    if (!body.is_object() || !natural("heap") || !natural("take")) {
      throw ServiceError(400, "bad_request", "body must carry nonnegative integers 'heap' and 'take'");
    }
    return submit_move(id, body["heap"].get<std::size_t>(), body["take"].get<Tokens>());
  }

  json submit_move(const std::string& id, std::size_t heap, Tokens take) {
    auto slot = store_.find(id);
    std::lock_guard lock(slot->mutex);
    GameSession& g = slot->session;
    if (g.status() != GameStatus::in_progress) {
      throw ServiceError(409, "out_of_turn", "game is over", {{"status", to_string(g.status())}});
    }
    if (g.engine_to_move()) throw ServiceError(409, "out_of_turn", "it is the engine's turn");
    try {
      g.state = apply_move(g.state, heap, take);
    } catch (const IllegalMoveError& e) {
      json details = {{"heap", heap}, {"take", take}};
      details["cap"] = e.cap() ? json(*e.cap()) : json(nullptr);
      throw ServiceError(422, "illegal_move", e.what(), details);
    }
    if (g.engine_to_move()) g.state = apply_move(g.state, engine_choice(g.state, *table_));
    return session_json(g, *table_);
  }

  json analyze(std::string_view heap_list) const { return analysis_json(parse_heaps(heap_list), *table_); }

  /// Sessions as initial heaps plus move history; reloading replays them.
  json snapshot() const {
    json sessions = json::array();
    for (const auto& g : store_.snapshot()) {
      json moves = json::array();
      for (const auto& m : g.state.history()) moves.push_back({{"heap", m.heap_index}, {"take", m.take}});
      sessions.push_back({{"id", g.id},
                          {"initial_heaps", format_heap_list(g.initial)},
                          {"engine_role", to_string(g.engine_role)},
                          {"history", moves}});
    }
    return {{"sessions", sessions}};
  }

  void restore(const json& snap) {
    for (const auto& s : snap.at("sessions")) {
      GameSession g;
      g.id = s.at("id").get<std::string>();
      g.initial = parse_heaps(s.at("initial_heaps").get<std::string>());
      g.engine_role = parse_engine_role(s.at("engine_role").get<std::string>());
      g.state = MultiHeapState(g.initial);
      for (const auto& m : s.at("history")) {
        g.state = apply_move(g.state, m.at("heap").get<std::size_t>(), m.at("take").get<Tokens>());
      }
      store_.insert(std::move(g));
    }
  }

  void save_snapshot(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write snapshot " + path);
    out << snapshot().dump(2) << '\n';
  }

  void load_snapshot(const std::string& path) {
    std::ifstream in(path);
    if (!in) return;  // first start: nothing to load
    restore(json::parse(in));
  }

 private:
  std::vector<Position> parse_heaps(std::string_view heap_list) const {
    std::vector<Position> heaps;
    try {
      heaps = parse_heap_list(heap_list);
    } catch (const HeapListError& e) {
      throw ServiceError(400, "bad_heaps", e.what(), {{"token", e.token()}});
    }
    for (const auto& h : heaps) {
      if (h.tokens() > horizon()) {
        throw ServiceError(400, "beyond_horizon",
                           "heap of " + std::to_string(h.tokens()) + " exceeds horizon " + std::to_string(horizon()),
                           {{"table_horizon", horizon()}});
      }
    }
    return heaps;
  }

  std::string fresh_id() {
    static constexpr char kHex[] = "0123456789abcdef";
    for (;;) {
      std::uint64_t bits;
      {
        std::lock_guard lock(rng_mutex_);
        bits = rng_();
      }
      std::string id(16, '0');
      for (auto& c : id) {
        c = kHex[bits & 15];
        bits >>= 4;
      }
      if (!store_.contains(id)) return id;
    }
  }

  std::shared_ptr<const GrundyTable> table_;
  ServiceConfig config_;
  SessionStore store_;
  std::mutex rng_mutex_;
  std::mt19937_64 rng_;
};

}  // namespace fibnim
