#pragma once

#include <cmath>
#include <random>
#include <string_view>

#include "duel/types.hpp"

namespace duel {

enum class RenewalLaw { kExponential, kDeterministic, kUniform, kGamma };

inline std::string_view to_string(RenewalLaw law) {
  switch (law) {
    case RenewalLaw::kExponential: return "exponential";
    case RenewalLaw::kDeterministic: return "deterministic";
    case RenewalLaw::kUniform: return "uniform";
    case RenewalLaw::kGamma: return "gamma";
  }
  return "?";
}

using Rng = std::mt19937_64;

// Decision-epoch process of one player: i.i.d. strictly positive
// inter-arrival times tau_1, tau_2, ... with epochs T_k = tau_1 + ... + tau_k.
class RenewalProcess {
 public:
  static RenewalProcess exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
      throw InvalidArgument("exponential rate must be positive");
    }
    return {RenewalLaw::kExponential, rate, 0.0};
  }
  static RenewalProcess deterministic(Time period) {
    if (!(period > 0.0) || !std::isfinite(period)) {
      throw InvalidArgument("deterministic period must be positive");
    }
    return {RenewalLaw::kDeterministic, period, 0.0};
  }
  static RenewalProcess uniform(Time lo, Time hi) {
    if (!(lo > 0.0) || !std::isfinite(hi) || !(hi > lo)) {
      throw InvalidArgument("uniform law needs 0 < lo < hi");
    }
    return {RenewalLaw::kUniform, lo, hi};
  }
  static RenewalProcess gamma(double shape, Time scale) {
    if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale)) {
      throw InvalidArgument("gamma law needs positive shape and scale");
    }
    return {RenewalLaw::kGamma, shape, scale};
  }

  RenewalLaw law() const { return law_; }
  // rate | period | lo | shape
  double a() const { return a_; }
  // hi | scale; 0 otherwise
  double b() const { return b_; }

  Time mean() const {
    switch (law_) {
      case RenewalLaw::kExponential: return 1.0 / a_;
      case RenewalLaw::kDeterministic: return a_;
      case RenewalLaw::kUniform: return 0.5 * (a_ + b_);
      case RenewalLaw::kGamma: return a_ * b_;
    }
    return 0.0;
  }

  Time sample(Rng& rng) const {
    switch (law_) {
      case RenewalLaw::kExponential:
        return std::exponential_distribution<double>(a_)(rng);
      case RenewalLaw::kDeterministic:
        return a_;
      case RenewalLaw::kUniform:
        return std::uniform_real_distribution<double>(a_, b_)(rng);
      case RenewalLaw::kGamma: {
        // A gamma draw can underflow to 0 for tiny shapes.
        Time t = 0.0;
        while (!(t > 0.0)) t = std::gamma_distribution<double>(a_, b_)(rng);
        return t;
      }
    }
    return a_;
  }

  friend bool operator==(const RenewalProcess&, const RenewalProcess&) = default;

 private:
  RenewalProcess(RenewalLaw law, double a, double b) : law_(law), a_(a), b_(b) {}

  RenewalLaw law_;
  double a_;
  double b_;
};

// Laplace-Stieltjes transform E[exp(-theta * tau)] of one inter-arrival time.
inline double lst(const RenewalProcess& process, double theta) {
  if (!(theta >= 0.0)) throw InvalidArgument("transform variable must be nonnegative");
  const double a = process.a();
  const double b = process.b();
  switch (process.law()) {
    case RenewalLaw::kExponential:
      return a / (a + theta);
    case RenewalLaw::kDeterministic:
      return std::exp(-theta * a);
    case RenewalLaw::kUniform:
      if (theta == 0.0) return 1.0;
      // (e^{-theta lo} - e^{-theta hi}) / (theta (hi - lo)), written to avoid
      // cancellation for small theta.
      return -std::exp(-theta * a) * std::expm1(-theta * (b - a)) / (theta * (b - a));
    case RenewalLaw::kGamma:
      return std::pow(1.0 + b * theta, -a);
  }
  return 0.0;
}

}  // namespace duel
