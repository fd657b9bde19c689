#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string_view>
#include <vector>

#include "duel/battlefield.hpp"
#include "duel/engine.hpp"
#include "duel/fluctuation.hpp"
#include "duel/seeding.hpp"

namespace duel {

enum class PolicyName { kThreshold, kVersatile, kNaiveMax };

inline std::string_view to_string(PolicyName p) {
  switch (p) {
    case PolicyName::kThreshold: return "threshold";
    case PolicyName::kVersatile: return "versatile";
    case PolicyName::kNaiveMax: return "naive_max";
  }
  return "?";
}

inline std::optional<PolicyName> parse_policy_name(std::string_view s) {
  if (s == "threshold") return PolicyName::kThreshold;
  if (s == "versatile") return PolicyName::kVersatile;
  if (s == "naive_max") return PolicyName::kNaiveMax;
  return std::nullopt;
}

struct Policy {
  PolicyName name = PolicyName::kThreshold;
  Objective objective = Objective::kMaxQ;
  // Monte-Carlo budget of each shoot/wait comparison under the versatile policy.
  std::size_t versatile_samples = 2000;
};

struct PlayoutResult {
  std::set<PlayerId> survivors;
  std::vector<ShotEvent> shot_log;
  Time duration = 0.0;
  TerminalReason reason = TerminalReason::kNone;
};

struct PlayerEstimate {
  PlayerId id;
  double survival_rate = 0.0;
  double survival_stderr = 0.0;
  double hit_rate = 0.0;
  double hit_stderr = 0.0;
};

struct Estimate {
  std::vector<PlayerEstimate> players;  // ascending id
  std::size_t runs = 0;
  std::uint64_t seed = 0;
};

namespace detail {

struct Decision {
  PlayerId target;
  Time planned = 0.0;                 // local time the plan opens
  ShotEpoch epoch = ShotEpoch::kExit; // versatile only
};

class PlayoutDriver {
 public:
  PlayoutDriver(const GameSpec& spec, const Policy& policy, Rng& rng)
      : spec_(spec), policy_(policy), rng_(rng), state_(new_state(spec)) {
    plan_seed_ = rng_();
    for (PlayerId p : state_.alive) next_epoch_[p] = renewal(p).sample(rng_);
  }

  PlayoutResult run() {
    for (auto end = is_terminal(state_); !end.terminal; end = is_terminal(state_)) {
      step();
    }
    PlayoutResult out;
    out.survivors = state_.alive;
    out.shot_log = state_.shot_log;
    out.duration = state_.global_time;
    out.reason = is_terminal(state_).reason;
    return out;
  }

 private:
  const RenewalProcess& renewal(PlayerId p) const { return spec_.player(p).renewal; }

  // Earliest epoch among armed players, ascending id on ties.
  PlayerId next_actor() const {
    PlayerId best = *state_.armed.begin();
    for (PlayerId p : state_.armed) {
      if (next_epoch_.at(p) < next_epoch_.at(best)) best = p;
    }
    return best;
  }

  const Decision& decision(PlayerId p) {
    auto it = plans_.find(p);
    if (it != plans_.end() && it->second.first == version_) return it->second.second;
    const TargetPlan plan = best_battlefield(state_.pair_set, state_.curves, p, policy_.objective);
    Decision d{plan.target, plan.t_star, ShotEpoch::kExit};
    if (policy_.name == PolicyName::kNaiveMax) {
      d.planned = state_.curves.at(p).t_max();
    } else if (policy_.name == PolicyName::kVersatile && plan.t_star > 0.0) {
      const auto seed = derive_seed(plan_seed_, (version_ << 20) + static_cast<std::uint64_t>(p.value));
      d.epoch = recommend_shot(renewal(p), renewal(plan.target), state_.curves.at(p), plan.t_star,
                               policy_.versatile_samples, seed)
                    .epoch;
    }
    return plans_.insert_or_assign(p, std::pair{version_, d}).first->second.second;
  }

  void step() {
    const PlayerId actor = next_actor();
    const Time now = next_epoch_.at(actor);
    const Time following = now + renewal(actor).sample(rng_);
    const Time local = local_time(state_, now);
    const Decision& d = decision(actor);

    bool shoot = local >= d.planned;
    if (!shoot && d.epoch == ShotEpoch::kPreExit) {
      // Last own epoch strictly before the planned time.
      shoot = local_time(state_, following) >= d.planned;
    }
    if (shoot) {
      const Probability p_hit = state_.curves.at(actor).eval(local);
      const bool hit = std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p_hit;
      state_ = apply_shot(state_, actor, d.target, hit ? Outcome::kHit : Outcome::kMiss, now);
      ++version_;
    }
    next_epoch_[actor] = following;
  }

  const GameSpec& spec_;
  Policy policy_;
  Rng& rng_;
  GameState state_;
  std::uint64_t plan_seed_ = 0;
  std::uint64_t version_ = 0;
  std::map<PlayerId, Time> next_epoch_;
  std::map<PlayerId, std::pair<std::uint64_t, Decision>> plans_;
};

}  // namespace detail

// One full game. Decision epochs run on the global clock and are not reset
// by status changes; only the curve clocks are.
inline PlayoutResult playout(const GameSpec& spec, const Policy& policy, Rng& rng) {
  return detail::PlayoutDriver(spec, policy, rng).run();
}

// Seed of the run with the given index under a master seed.
inline std::uint64_t run_seed(std::uint64_t master, std::size_t run_index) {
  return derive_seed(master, run_index);
}

inline PlayoutResult playout_run(const GameSpec& spec, const Policy& policy,
                                 std::uint64_t master, std::size_t run_index) {
  Rng rng(run_seed(master, run_index));
  return playout(spec, policy, rng);
}

inline Estimate estimate(const GameSpec& spec, const Policy& policy, std::size_t runs,
                         std::uint64_t seed, unsigned threads = 1) {
  validate_spec(spec);
  if (runs == 0) throw InvalidArgument("run count must be at least 1");
  struct Counts {
    std::map<PlayerId, std::size_t> survived, hit;
  };
  auto blocks = run_blocks(runs, 256, threads,
                           [&](std::size_t, std::size_t first, std::size_t count) {
                             Counts c;
                             for (std::size_t r = first; r < first + count; ++r) {
                               const auto result = playout_run(spec, policy, seed, r);
                               for (PlayerId p : result.survivors) ++c.survived[p];
                               std::set<PlayerId> hitters;
                               for (const auto& e : result.shot_log) {
                                 if (e.outcome == Outcome::kHit) hitters.insert(e.shooter);
                               }
                               for (PlayerId p : hitters) ++c.hit[p];
                             }
                             return c;
                           });
  Counts total;
  for (const auto& b : blocks) {
    for (const auto& [p, k] : b.survived) total.survived[p] += k;
    for (const auto& [p, k] : b.hit) total.hit[p] += k;
  }
  const double n = static_cast<double>(runs);
  auto stderr_of = [n](double rate) { return std::sqrt(rate * (1.0 - rate) / n); };
  Estimate est;
  est.runs = runs;
  est.seed = seed;
  std::set<PlayerId> ids;
  for (const auto& p : spec.players) ids.insert(p.id);
  for (PlayerId id : ids) {
    PlayerEstimate pe;
    pe.id = id;
    pe.survival_rate = static_cast<double>(total.survived[id]) / n;
    pe.hit_rate = static_cast<double>(total.hit[id]) / n;
    pe.survival_stderr = stderr_of(pe.survival_rate);
    pe.hit_stderr = stderr_of(pe.hit_rate);
    est.players.push_back(pe);
  }
  return est;
}

}  // namespace duel
