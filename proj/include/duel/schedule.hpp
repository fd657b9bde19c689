#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <vector>

#include "duel/bisect.hpp"
#include "duel/curve.hpp"
#include "duel/types.hpp"

namespace duel {

using CurveMap = std::map<PlayerId, SuccessCurve>;

inline constexpr Time kDefaultTolerance = 1e-9;

// One pairwise engagement slot. `index` is 1-based in schedule order.
struct Battlefield {
  int index = 0;
  PlayerPair pair;
  Time time = 0.0;

  friend bool operator==(const Battlefield&, const Battlefield&) = default;
};

struct PairSchedule {
  std::vector<Battlefield> battlefields;
  int n = 0;

  std::size_t size() const { return battlefields.size(); }
  bool empty() const { return battlefields.empty(); }

  // Battlefield with the given 1-based index.
  const Battlefield& at(int m) const {
    if (m < 1 || static_cast<std::size_t>(m) > battlefields.size()) {
      throw InvalidArgument("battlefield index out of range");
    }
    return battlefields[static_cast<std::size_t>(m - 1)];
  }

  bool has_player(PlayerId p) const {
    return std::any_of(battlefields.begin(), battlefields.end(),
                       [p](const Battlefield& b) { return b.pair.contains(p); });
  }

  friend bool operator==(const PairSchedule&, const PairSchedule&) = default;
};

// First t >= 0 with P_i(t) + P_j(t) >= 1.
//
// The search runs over [0, h] where h is the smallest horizon among the
// non-zero curves: at h that curve equals 1, so the condition holds.
inline Time pairwise_time(const SuccessCurve& ci, const SuccessCurve& cj,
                          Time tol = kDefaultTolerance) {
  if (!(tol > 0.0)) throw InvalidArgument("crossing tolerance must be positive");
  if (ci.is_zero() && cj.is_zero()) {
    throw NumericError("no crossing: both success curves are zero");
  }
  Time hi = std::numeric_limits<Time>::infinity();
  if (!ci.is_zero()) hi = std::min(hi, ci.t_max());
  if (!cj.is_zero()) hi = std::min(hi, cj.t_max());
  return first_true([&](Time t) { return ci.eval(t) + cj.eval(t) >= 1.0; }, 0.0, hi, tol);
}

enum class ZeroPairPolicy {
  kReject,       // a pair of two zero curves is an error
  kUnreachable,  // such a pair is kept with an infinite crossing time
};

namespace detail {

inline void sort_and_index(std::vector<Battlefield>& fields) {
  std::sort(fields.begin(), fields.end(), [](const Battlefield& a, const Battlefield& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.pair < b.pair;
  });
  for (std::size_t k = 0; k < fields.size(); ++k) fields[k].index = static_cast<int>(k + 1);
}

}  // namespace detail

// Sorted list of all C(n,2) battlefields. Ties in time are broken by the
// lexicographic order of the pair.
inline PairSchedule build_schedule(const CurveMap& curves, Time tol = kDefaultTolerance,
                                   ZeroPairPolicy zero_pairs = ZeroPairPolicy::kReject) {
  if (curves.size() < 2) throw InvalidArgument("a schedule needs at least two players");
  PairSchedule schedule;
  schedule.n = static_cast<int>(curves.size());
  schedule.battlefields.reserve(curves.size() * (curves.size() - 1) / 2);
  for (auto a = curves.begin(); a != curves.end(); ++a) {
    for (auto b = std::next(a); b != curves.end(); ++b) {
      Time t;
      if (a->second.is_zero() && b->second.is_zero() &&
          zero_pairs == ZeroPairPolicy::kUnreachable) {
        t = std::numeric_limits<Time>::infinity();
      } else {
        t = pairwise_time(a->second, b->second, tol);
      }
      schedule.battlefields.push_back({0, PlayerPair::of(a->first, b->first), t});
    }
  }
  detail::sort_and_index(schedule.battlefields);
  return schedule;
}

// The n-1 battlefields involving player i, in schedule order.
inline std::vector<Battlefield> player_schedule(const PairSchedule& schedule, PlayerId i) {
  std::vector<Battlefield> out;
  for (const auto& b : schedule.battlefields) {
    if (b.pair.contains(i)) out.push_back(b);
  }
  if (out.empty()) throw InvalidArgument("player is not part of the schedule");
  return out;
}

}  // namespace duel
