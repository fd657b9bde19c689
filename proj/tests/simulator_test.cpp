#include <cmath>

#include <gtest/gtest.h>

#include "duel/simulator.hpp"

namespace duel {
namespace {

constexpr PlayerId p1{1}, p2{2};

GameSpec two_players(SuccessCurve c1, RenewalProcess r1, SuccessCurve c2, RenewalProcess r2,
                     int bullets = 1) {
  GameSpec spec;
  spec.players.push_back({p1, std::move(c1), bullets, r1});
  spec.players.push_back({p2, std::move(c2), bullets, r2});
  return spec;
}

// Player 1 is certain at t = 1; the pair crosses at 100/101 and both players
// have their first epoch at t = 1, where the id tie-break lets player 1 fire.
GameSpec deterministic_spec() {
  return two_players(SuccessCurve::table({{0, 0}, {1, 1}}), RenewalProcess::deterministic(1),
                     SuccessCurve::linear(100), RenewalProcess::deterministic(1));
}

GameSpec symmetric_spec() {
  return two_players(SuccessCurve::linear(20), RenewalProcess::exponential(1),
                     SuccessCurve::linear(20), RenewalProcess::exponential(1));
}

TEST(Playout, DeterministicTrace) {
  Rng rng(1);
  const auto r = playout(deterministic_spec(), Policy{}, rng);
  ASSERT_EQ(r.shot_log.size(), 1u);
  const auto& e = r.shot_log.front();
  EXPECT_EQ(e.shooter, p1);
  EXPECT_EQ(e.target, p2);
  EXPECT_EQ(e.time, 1.0);
  EXPECT_EQ(e.p_hit, 1.0);
  EXPECT_EQ(e.outcome, Outcome::kHit);
  EXPECT_EQ(r.survivors, std::set<PlayerId>{p1});
  EXPECT_EQ(r.duration, 1.0);
  EXPECT_EQ(r.reason, TerminalReason::kBulletsExhausted);
}

TEST(Playout, ReplayIsBitIdentical) {
  for (auto name : {PolicyName::kThreshold, PolicyName::kVersatile, PolicyName::kNaiveMax}) {
    const Policy policy{name, Objective::kMaxQ, 500};
    const auto a = playout_run(symmetric_spec(), policy, 99, 3);
    const auto b = playout_run(symmetric_spec(), policy, 99, 3);
    EXPECT_EQ(a.shot_log, b.shot_log);
    EXPECT_EQ(a.survivors, b.survivors);
  }
}

TEST(Playout, NaiveMaxWaitsForOwnHorizon) {
  const auto spec = two_players(SuccessCurve::linear(5), RenewalProcess::deterministic(1),
                                SuccessCurve::linear(100), RenewalProcess::deterministic(1));
  Rng rng(4);
  const auto r = playout(spec, Policy{PolicyName::kNaiveMax}, rng);
  ASSERT_FALSE(r.shot_log.empty());
  EXPECT_EQ(r.shot_log.front().shooter, p1);
  EXPECT_EQ(r.shot_log.front().time, 5.0);
  EXPECT_EQ(r.survivors, std::set<PlayerId>{p1});
}

TEST(Playout, VersatileFiresAtPreExitOnPlateau) {
  // Player 1 is flat at 0.5 over [2, 30]; against linear(41) the pair
  // crosses at 20.5. Epochs at 20 and 21 are equally good for player 1.
  const auto spec =
      two_players(SuccessCurve::table({{0, 0}, {2, 0.5}, {30, 0.5}, {32, 1}}),
                  RenewalProcess::deterministic(1), SuccessCurve::linear(41),
                  RenewalProcess::deterministic(1));
  Rng a(8), b(8);
  const auto versatile = playout(spec, Policy{PolicyName::kVersatile, Objective::kMaxQ, 200}, a);
  const auto threshold = playout(spec, Policy{PolicyName::kThreshold}, b);
  ASSERT_FALSE(versatile.shot_log.empty());
  ASSERT_FALSE(threshold.shot_log.empty());
  EXPECT_EQ(versatile.shot_log.front().shooter, p1);
  EXPECT_EQ(versatile.shot_log.front().time, 20.0);
  EXPECT_EQ(versatile.shot_log.front().p_hit, 0.5);
  EXPECT_EQ(threshold.shot_log.front().shooter, p1);
  EXPECT_EQ(threshold.shot_log.front().time, 21.0);
}

TEST(Playout, ConservationAndMonotoneAlive) {
  GameSpec spec;
  spec.players.push_back({PlayerId{1}, SuccessCurve::linear(20), 2, RenewalProcess::exponential(1)});
  spec.players.push_back({PlayerId{2}, SuccessCurve::power(30, 2), 1, RenewalProcess::uniform(0.5, 1.5)});
  spec.players.push_back({PlayerId{3}, SuccessCurve::exp_saturating(25, 0.2), 3, RenewalProcess::gamma(2, 0.5)});
  spec.players.push_back({PlayerId{4}, SuccessCurve::linear(15), 1, RenewalProcess::deterministic(0.7)});
  const int total_bullets = 7;
  for (auto name : {PolicyName::kThreshold, PolicyName::kVersatile, PolicyName::kNaiveMax}) {
    for (std::size_t run = 0; run < 200; ++run) {
      const auto r = playout_run(spec, Policy{name, Objective::kMaxQ, 200}, 5, run);
      ASSERT_LE(static_cast<int>(r.shot_log.size()), total_bullets);
      std::set<PlayerId> dead;
      std::map<PlayerId, int> fired;
      double last = 0.0;
      for (const auto& e : r.shot_log) {
        ASSERT_FALSE(dead.contains(e.shooter));
        ASSERT_FALSE(dead.contains(e.target));
        ASSERT_GE(e.time, last);
        ASSERT_GE(e.p_hit, 0.0);
        ASSERT_LE(e.p_hit, 1.0);
        last = e.time;
        ++fired[e.shooter];
        if (e.outcome == Outcome::kHit) dead.insert(e.target);
      }
      for (const auto& p : spec.players) {
        ASSERT_LE(fired[p.id], p.bullets);
        ASSERT_EQ(r.survivors.contains(p.id), !dead.contains(p.id));
      }
      ASSERT_NE(r.reason, TerminalReason::kNone);
    }
  }
}

TEST(Playout, FirstShotTimeMatchesExitTime) {
  // Player 2 never acts before t = 1e6, so player 1 fires at the first
  // epoch past the crossing time 10.
  const auto spec = two_players(SuccessCurve::linear(20), RenewalProcess::exponential(1),
                                SuccessCurve::linear(20), RenewalProcess::deterministic(1e6));
  const auto closed = exit_stats_exponential(1.0, pairwise_time(SuccessCurve::linear(20),
                                                                SuccessCurve::linear(20)));
  RunningMoments first_shot;
  for (std::size_t run = 0; run < 20000; ++run) {
    const auto r = playout_run(spec, Policy{}, 12, run);
    ASSERT_EQ(r.shot_log.front().shooter, p1);
    first_shot.add(r.shot_log.front().time);
  }
  EXPECT_LE(std::abs(first_shot.mean() - closed.mean_exit), 3 * first_shot.standard_error());
}

TEST(Estimate, DeterministicSpecAlwaysFavoursPlayerOne) {
  const auto est = estimate(deterministic_spec(), Policy{}, 50, 1);
  ASSERT_EQ(est.players.size(), 2u);
  EXPECT_EQ(est.players[0].survival_rate, 1.0);
  EXPECT_EQ(est.players[0].hit_rate, 1.0);
  EXPECT_EQ(est.players[1].survival_rate, 0.0);
  EXPECT_EQ(est.players[0].survival_stderr, 0.0);
}

TEST(Estimate, SymmetricPlayersAreFair) {
  const auto est = estimate(symmetric_spec(), Policy{}, 20000, 77);
  const auto& a = est.players[0];
  const auto& b = est.players[1];
  EXPECT_LE(std::abs(a.survival_rate - b.survival_rate),
            3 * std::hypot(a.survival_stderr, b.survival_stderr));
}

TEST(Estimate, SingleRunRatesAreBinary) {
  const auto est = estimate(symmetric_spec(), Policy{}, 1, 5);
  for (const auto& p : est.players) {
    EXPECT_TRUE(p.survival_rate == 0.0 || p.survival_rate == 1.0);
    EXPECT_EQ(p.survival_stderr, 0.0);
    EXPECT_EQ(p.hit_stderr, 0.0);
  }
  EXPECT_THROW(estimate(symmetric_spec(), Policy{}, 0, 5), InvalidArgument);
}

TEST(Estimate, IndependentOfThreadCount) {
  const auto a = estimate(symmetric_spec(), Policy{}, 3000, 31, 1);
  const auto b = estimate(symmetric_spec(), Policy{}, 3000, 31, 3);
  ASSERT_EQ(a.players.size(), b.players.size());
  for (std::size_t k = 0; k < a.players.size(); ++k) {
    EXPECT_EQ(a.players[k].survival_rate, b.players[k].survival_rate);
    EXPECT_EQ(a.players[k].hit_rate, b.players[k].hit_rate);
  }
}

}  // namespace
}  // namespace duel
