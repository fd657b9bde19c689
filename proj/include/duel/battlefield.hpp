#pragma once

#include <algorithm>
#include <limits>
#include <string_view>
#include <vector>

#include "duel/schedule.hpp"
#include "duel/types.hpp"

namespace duel {

enum class Objective { kMaxQ, kMinQ };

inline std::string_view to_string(Objective o) { return o == Objective::kMaxQ ? "max" : "min"; }

struct BattlefieldScore {
  int m = 0;
  PlayerId shooter;
  PlayerId opponent;
  Time time = 0.0;
  Probability p_shoot = 0.0;
  double q = 0.0;
};

struct TargetPlan {
  int m_star = 0;
  PlayerId target;
  Time t_star = 0.0;

  friend bool operator==(const TargetPlan&, const TargetPlan&) = default;
};

namespace detail {

inline const SuccessCurve& curve_of(const CurveMap& curves, PlayerId p) {
  auto it = curves.find(p);
  if (it == curves.end()) throw InvalidArgument("no success curve for player");
  return it->second;
}

}  // namespace detail

// Actual success probability of player i on battlefield m:
//   1 - P_j(t^m) * prod_{h < m, j in battlefield h} P_j(t^h)
// with j the opponent of i on battlefield m.
inline Probability success_prob(const PairSchedule& schedule, const CurveMap& curves,
                                PlayerId i, int m) {
  const Battlefield& field = schedule.at(m);
  if (!field.pair.contains(i)) throw InvalidArgument("player does not fight on this battlefield");
  const PlayerId j = field.pair.other(i);
  const SuccessCurve& cj = detail::curve_of(curves, j);
  double product = cj.eval(field.time);
  for (int h = 1; h < m; ++h) {
    const Battlefield& earlier = schedule.at(h);
    if (earlier.pair.contains(j)) product *= cj.eval(earlier.time);
  }
  return 1.0 - product;
}

// q = P_ij / P_ji. A zero denominator yields +inf (unbounded advantage); when
// both directed probabilities vanish the battlefield is neutral (q = 1).
inline double indicator(const PairSchedule& schedule, const CurveMap& curves, PlayerId i, int m) {
  const PlayerId j = schedule.at(m).pair.other(i);
  const Probability forward = success_prob(schedule, curves, i, m);
  const Probability backward = success_prob(schedule, curves, j, m);
  if (backward == 0.0) {
    return forward == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  }
  return forward / backward;
}

// Scores of every battlefield involving player i, in schedule order.
inline std::vector<BattlefieldScore> score_battlefields(const PairSchedule& schedule,
                                                        const CurveMap& curves, PlayerId i) {
  std::vector<BattlefieldScore> scores;
  for (const auto& b : player_schedule(schedule, i)) {
    scores.push_back({b.index, i, b.pair.other(i), b.time,
                      success_prob(schedule, curves, i, b.index),
                      indicator(schedule, curves, i, b.index)});
  }
  return scores;
}

// Battlefields ranked under the objective (best first), ties by smaller m,
// truncated to `bullets` entries.
inline std::vector<TargetPlan> multi_bullet_battlefields(const PairSchedule& schedule,
                                                         const CurveMap& curves, PlayerId i,
                                                         int bullets,
                                                         Objective objective = Objective::kMaxQ) {
  if (bullets < 1) throw InvalidArgument("bullet count must be at least 1");
  auto scores = score_battlefields(schedule, curves, i);
  std::stable_sort(scores.begin(), scores.end(),
                   [objective](const BattlefieldScore& a, const BattlefieldScore& b) {
                     return objective == Objective::kMaxQ ? a.q > b.q : a.q < b.q;
                   });
  const auto keep = std::min(scores.size(), static_cast<std::size_t>(bullets));
  std::vector<TargetPlan> plans;
  plans.reserve(keep);
  for (std::size_t k = 0; k < keep; ++k) {
    plans.push_back({scores[k].m, scores[k].opponent, scores[k].time});
  }
  return plans;
}

inline TargetPlan best_battlefield(const PairSchedule& schedule, const CurveMap& curves,
                                   PlayerId i, Objective objective = Objective::kMaxQ) {
  return multi_bullet_battlefields(schedule, curves, i, 1, objective).front();
}

}  // namespace duel
