#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string_view>
#include <vector>

#include "duel/curve.hpp"
#include "duel/renewal.hpp"
#include "duel/schedule.hpp"
#include "duel/types.hpp"

namespace duel {

struct PlayerSpec {
  PlayerId id;
  SuccessCurve curve;
  int bullets = 1;
  RenewalProcess renewal = RenewalProcess::exponential(1.0);
};

struct GameSpec {
  std::vector<PlayerSpec> players;
  Time tolerance = kDefaultTolerance;

  const PlayerSpec& player(PlayerId id) const {
    for (const auto& p : players) {
      if (p.id == id) return p;
    }
    throw InvalidArgument("unknown player id " + std::to_string(id.value));
  }

  CurveMap curves() const {
    CurveMap out;
    for (const auto& p : players) out.emplace(p.id, p.curve);
    return out;
  }
};

enum class Outcome { kHit, kMiss };

inline std::string_view to_string(Outcome o) { return o == Outcome::kHit ? "hit" : "miss"; }

struct ShotEvent {
  PlayerId shooter;
  PlayerId target;
  Time time = 0.0;
  Time local_time = 0.0;
  Probability p_hit = 0.0;
  Outcome outcome = Outcome::kMiss;

  friend bool operator==(const ShotEvent&, const ShotEvent&) = default;
};

enum class TerminalReason { kNone, kBulletsExhausted, kLoneSurvivor };

inline std::string_view to_string(TerminalReason r) {
  switch (r) {
    case TerminalReason::kNone: return "none";
    case TerminalReason::kBulletsExhausted: return "bullets-exhausted";
    case TerminalReason::kLoneSurvivor: return "lone-survivor";
  }
  return "?";
}

struct Termination {
  bool terminal = false;
  TerminalReason reason = TerminalReason::kNone;
};

// Snapshot of a game. Spent shooters stay in `curves` with the zero curve;
// dead players are removed from `alive`, `armed` and `curves`. Pairs of two
// spent shooters carry an infinite crossing time in `pair_set`.
struct GameState {
  std::set<PlayerId> alive;
  std::set<PlayerId> armed;
  std::map<PlayerId, int> bullets;
  CurveMap curves;
  PairSchedule pair_set;
  Time clock_origin = 0.0;
  Time global_time = 0.0;
  Time tolerance = kDefaultTolerance;
  std::vector<ShotEvent> shot_log;
};

inline void validate_spec(const GameSpec& spec) {
  if (spec.players.size() < 2) throw InvalidArgument("a game needs at least two players");
  if (!(spec.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  std::set<PlayerId> ids;
  for (const auto& p : spec.players) {
    if (p.id.value < 1) throw InvalidArgument("player ids must be positive");
    if (!ids.insert(p.id).second) throw InvalidArgument("duplicate player id");
    if (p.bullets < 1) throw InvalidArgument("every player starts with at least one bullet");
  }
}

inline GameState new_state(const GameSpec& spec) {
  validate_spec(spec);
  GameState s;
  s.tolerance = spec.tolerance;
  for (const auto& p : spec.players) {
    s.alive.insert(p.id);
    s.armed.insert(p.id);
    s.bullets[p.id] = p.bullets;
    s.curves.emplace(p.id, p.bullets > 0 ? p.curve : zeroed(p.curve));
  }
  s.pair_set = build_schedule(s.curves, s.tolerance, ZeroPairPolicy::kUnreachable);
  return s;
}

inline Time local_time(const GameState& state, Time global_t) {
  if (!(global_t >= state.clock_origin)) {
    throw InvalidArgument("time precedes the last status change");
  }
  return global_t - state.clock_origin;
}

inline Termination is_terminal(const GameState& state) {
  if (state.armed.empty()) return {true, TerminalReason::kBulletsExhausted};
  if (state.alive.size() <= 1) return {true, TerminalReason::kLoneSurvivor};
  return {};
}

// Fires one bullet at global time `at`. The shooter's curve becomes the zero
// curve once his last bullet is spent, hit or miss; a hit removes the target
// and all of its pairs. All curve clocks restart at `at`.
inline GameState apply_shot(const GameState& state, PlayerId shooter, PlayerId target,
                            Outcome outcome, Time at) {
  if (!state.alive.contains(shooter)) throw InvalidArgument("shooter is not alive");
  if (!state.armed.contains(shooter)) throw InvalidArgument("shooter has no bullet left");
  if (!state.alive.contains(target)) throw InvalidArgument("target is not alive");
  if (shooter == target) throw InvalidArgument("a player cannot target himself");
  if (!(at >= state.global_time)) throw InvalidArgument("shot time precedes game time");

  GameState next = state;
  const Time local = local_time(state, at);
  next.shot_log.push_back(
      {shooter, target, at, local, state.curves.at(shooter).eval(local), outcome});

  if (--next.bullets[shooter] == 0) {
    next.armed.erase(shooter);
    next.curves.insert_or_assign(shooter, zeroed(state.curves.at(shooter)));
  }
  if (outcome == Outcome::kHit) {
    next.alive.erase(target);
    next.armed.erase(target);
    next.curves.erase(target);
  }

  if (next.curves.size() >= 2) {
    next.pair_set = build_schedule(next.curves, next.tolerance, ZeroPairPolicy::kUnreachable);
  } else {
    next.pair_set = PairSchedule{{}, static_cast<int>(next.curves.size())};
  }
  next.global_time = at;
  next.clock_origin = at;
  return next;
}

}  // namespace duel
