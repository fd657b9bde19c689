#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "duel/curve.hpp"
#include "duel/renewal.hpp"
#include "duel/seeding.hpp"
#include "duel/types.hpp"

namespace duel {

// One threshold crossing of a renewal process: nu is the first epoch count
// with T_nu >= threshold, t_pre = T_{nu-1} (T_0 = 0) and t_exit = T_nu.
struct ExitSample {
  long nu = 0;
  Time t_pre = 0.0;
  Time t_exit = 0.0;
};

struct ExitStats {
  Time mean_exit = 0.0;
  Time mean_pre_exit = 0.0;
  double mean_nu = 0.0;
  Time stderr_exit = 0.0;
  Time stderr_pre_exit = 0.0;
  double stderr_nu = 0.0;
  std::size_t samples = 0;  // 0 for closed forms
  // ceil(E[T_nu] / E[tau]); an approximation to E[nu], reported alongside it.
  std::optional<double> nu_ceiling_approx;
};

// Welford accumulator with Chan's merge; merges are applied in block order.
class RunningMoments {
 public:
  void add(double x) {
    ++count_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningMoments& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    const double n = static_cast<double>(count_ + other.count_);
    const double delta = other.mean_ - mean_;
    mean_ += delta * static_cast<double>(other.count_) / n;
    m2_ += other.m2_ + delta * delta * static_cast<double>(count_) *
                           static_cast<double>(other.count_) / n;
    count_ += other.count_;
  }

  std::size_t count() const { return count_; }
  double mean() const { return mean_; }
  double variance() const {
    return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0;
  }
  double standard_error() const {
    return count_ > 1 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
  }

 private:
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline void check_threshold(Time threshold) {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw InvalidArgument("exit threshold must be positive and finite");
  }
}

inline ExitSample sample_exit(const RenewalProcess& process, Time threshold, Rng& rng) {
  check_threshold(threshold);
  ExitSample s;
  while (s.t_exit < threshold) {
    s.t_pre = s.t_exit;
    s.t_exit += process.sample(rng);
    ++s.nu;
  }
  return s;
}

// Exact marginals for exponential inter-arrivals (memoryless overshoot,
// truncated age for the pre-exit time, Poisson count for nu).
inline ExitStats exit_stats_exponential(double rate, Time threshold) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InvalidArgument("rate must be positive");
  check_threshold(threshold);
  ExitStats s;
  s.mean_exit = threshold + 1.0 / rate;
  s.mean_pre_exit = threshold + std::expm1(-rate * threshold) / rate;
  s.mean_nu = 1.0 + rate * threshold;
  s.nu_ceiling_approx = std::ceil(s.mean_exit * rate);
  return s;
}

inline ExitStats mc_exit_stats(const RenewalProcess& process, Time threshold,
                               std::size_t n_samples, std::uint64_t seed, unsigned threads = 1) {
  check_threshold(threshold);
  if (n_samples == 0) throw InvalidArgument("sample count must be at least 1");
  struct Block {
    RunningMoments exit, pre, nu;
  };
  auto blocks = run_blocks(n_samples, kSamplesPerBlock, threads,
                           [&](std::size_t b, std::size_t, std::size_t count) {
                             Rng rng(derive_seed(seed, b));
                             Block acc;
                             for (std::size_t k = 0; k < count; ++k) {
                               const ExitSample s = sample_exit(process, threshold, rng);
                               acc.exit.add(s.t_exit);
                               acc.pre.add(s.t_pre);
                               acc.nu.add(static_cast<double>(s.nu));
                             }
                             return acc;
                           });
  Block total;
  for (const auto& b : blocks) {
    total.exit.merge(b.exit);
    total.pre.merge(b.pre);
    total.nu.merge(b.nu);
  }
  ExitStats s;
  s.mean_exit = total.exit.mean();
  s.mean_pre_exit = total.pre.mean();
  s.mean_nu = total.nu.mean();
  s.stderr_exit = total.exit.standard_error();
  s.stderr_pre_exit = total.pre.standard_error();
  s.stderr_nu = total.nu.standard_error();
  s.samples = n_samples;
  s.nu_ceiling_approx = std::ceil(s.mean_exit / process.mean());
  return s;
}

// Paired exit draws for two players sharing a threshold. Holding the draws
// fixed gives common random numbers for every evaluation of the functional.
class FunctionalSampler {
 public:
  struct Draw {
    Time t_pre = 0.0;   // focal player's pre-exit time
    Time t_exit = 0.0;  // focal player's exit time
    bool first = false; // focal exit no later than the opponent's
  };

  FunctionalSampler(const RenewalProcess& focal, const RenewalProcess& opponent, Time threshold,
                    std::size_t n_samples, std::uint64_t seed, unsigned threads = 1) {
    check_threshold(threshold);
    if (n_samples == 0) throw InvalidArgument("sample count must be at least 1");
    auto blocks = run_blocks(n_samples, kSamplesPerBlock, threads,
                             [&](std::size_t b, std::size_t, std::size_t count) {
                               Rng rng(derive_seed(seed, b));
                               std::vector<Draw> out;
                               out.reserve(count);
                               for (std::size_t k = 0; k < count; ++k) {
                                 const ExitSample i = sample_exit(focal, threshold, rng);
                                 const ExitSample j = sample_exit(opponent, threshold, rng);
                                 out.push_back({i.t_pre, i.t_exit, i.t_exit <= j.t_exit});
                               }
                               return out;
                             });
    draws_.reserve(n_samples);
    for (auto& b : blocks) draws_.insert(draws_.end(), b.begin(), b.end());
  }

  std::span<const Draw> draws() const { return draws_; }

  // Sample mean of exp(-theta0 t_pre - theta1 t_exit) on the confinement
  // event. Any finite theta is accepted so that finite differences can
  // straddle 0; the population value is only guaranteed for theta >= 0.
  double value(double theta0, double theta1) const {
    if (!std::isfinite(theta0) || !std::isfinite(theta1)) {
      throw InvalidArgument("transform variables must be finite");
    }
    double sum = 0.0;
    for (const auto& d : draws_) {
      if (d.first) sum += std::exp(-theta0 * d.t_pre - theta1 * d.t_exit);
    }
    return sum / static_cast<double>(draws_.size());
  }

 private:
  std::vector<Draw> draws_;
};

inline double mc_functional(const RenewalProcess& focal, const RenewalProcess& opponent,
                            Time threshold, double theta0, double theta1, std::size_t n_samples,
                            std::uint64_t seed, unsigned threads = 1) {
  if (!(theta0 >= 0.0) || !(theta1 >= 0.0)) {
    throw InvalidArgument("transform variables must be nonnegative");
  }
  return FunctionalSampler(focal, opponent, threshold, n_samples, seed, threads)
      .value(theta0, theta1);
}

enum class ShotEpoch { kExit, kPreExit };

inline std::string_view to_string(ShotEpoch e) { return e == ShotEpoch::kExit ? "nu" : "nu-1"; }

struct ShotPlan {
  ShotEpoch epoch = ShotEpoch::kExit;
  Time est_time = 0.0;
  Probability p_pre = 0.0;   // E[P_i(T_{nu-1})]
  Probability p_exit = 0.0;  // E[P_i(T_nu)]
  ExitStats focal;
  ExitStats opponent;
  // Focal player expects to reach the threshold before the opponent.
  bool adverse = false;
};

// Shoot at the exit epoch unless the pre-exit epoch carries at least the same
// expected success probability.
inline ShotPlan recommend_shot(const RenewalProcess& focal, const RenewalProcess& opponent,
                               const SuccessCurve& curve, Time threshold, std::size_t n_samples,
                               std::uint64_t seed) {
  check_threshold(threshold);
  if (n_samples == 0) throw InvalidArgument("sample count must be at least 1");
  struct Block {
    RunningMoments pre, exit;
  };
  auto blocks = run_blocks(n_samples, kSamplesPerBlock, 1,
                           [&](std::size_t b, std::size_t, std::size_t count) {
                             Rng rng(derive_seed(seed, b));
                             Block acc;
                             for (std::size_t k = 0; k < count; ++k) {
                               const ExitSample s = sample_exit(focal, threshold, rng);
                               acc.pre.add(curve.eval(s.t_pre));
                               acc.exit.add(curve.eval(s.t_exit));
                             }
                             return acc;
                           });
  Block total;
  for (const auto& b : blocks) {
    total.pre.merge(b.pre);
    total.exit.merge(b.exit);
  }
  ShotPlan plan;
  plan.p_pre = total.pre.mean();
  plan.p_exit = total.exit.mean();
  plan.focal = mc_exit_stats(focal, threshold, n_samples, seed);
  plan.opponent = mc_exit_stats(opponent, threshold, n_samples, derive_seed(seed, ~0ULL));
  plan.adverse = plan.focal.mean_exit < plan.opponent.mean_exit;
  if (plan.p_pre < plan.p_exit) {
    plan.epoch = ShotEpoch::kExit;
    plan.est_time = plan.focal.mean_exit;
  } else {
    plan.epoch = ShotEpoch::kPreExit;
    plan.est_time = plan.focal.mean_pre_exit;
  }
  return plan;
}

}  // namespace duel
