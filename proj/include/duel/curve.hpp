#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "duel/bisect.hpp"
#include "duel/types.hpp"

namespace duel {

enum class CurveKind { kLinear, kPower, kExpSaturating, kTable, kZero };

inline std::string_view to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::kLinear: return "linear";
    case CurveKind::kPower: return "power";
    case CurveKind::kExpSaturating: return "expsat";
    case CurveKind::kTable: return "table";
    case CurveKind::kZero: return "zero";
  }
  return "?";
}

struct Knot {
  Time t = 0.0;
  Probability p = 0.0;

  friend bool operator==(const Knot&, const Knot&) = default;
};

inline constexpr double kNormalizationTolerance = 1e-12;

// Cumulative success probability P(t) of one player on [0, t_max].
//
// Every non-zero curve is nondecreasing and reaches exactly 1 at t_max; beyond
// the horizon it stays saturated at 1. The zero curve stands for a shooter
// who has spent his last bullet.
//
// Curves are immutable values; construct them through the named factories.
class SuccessCurve {
 public:
  static SuccessCurve linear(Time t_max) {
    check_horizon(t_max);
    return SuccessCurve(CurveKind::kLinear, t_max, 0.0, {});
  }

  static SuccessCurve power(Time t_max, double k) {
    check_horizon(t_max);
    if (!(k > 0.0) || !std::isfinite(k)) {
      throw InvalidArgument("power curve exponent k must be positive");
    }
    return SuccessCurve(CurveKind::kPower, t_max, k, {});
  }

  static SuccessCurve exp_saturating(Time t_max, double rate) {
    check_horizon(t_max);
    if (!(rate > 0.0) || !std::isfinite(rate)) {
      throw InvalidArgument("saturation rate must be positive");
    }
    return SuccessCurve(CurveKind::kExpSaturating, t_max, rate, {});
  }

  // Knots must start at t = 0, be strictly increasing in time, nondecreasing
  // in probability, and end at (t_max, 1).
  static SuccessCurve table(std::vector<Knot> knots) {
    if (knots.size() < 2) throw InvalidArgument("table curve needs at least two knots");
    if (knots.front().t != 0.0) throw InvalidArgument("table curve must start at t = 0");
    for (std::size_t i = 0; i < knots.size(); ++i) {
      const auto& k = knots[i];
      if (!std::isfinite(k.t) || !std::isfinite(k.p)) {
        throw InvalidArgument("table knots must be finite");
      }
      if (k.p < 0.0 || k.p > 1.0 + kNormalizationTolerance) {
        throw InvalidArgument("table probabilities must lie in [0, 1]");
      }
      if (i > 0) {
        if (!(k.t > knots[i - 1].t)) {
          throw InvalidArgument("table knot times must be strictly increasing");
        }
        if (k.p < knots[i - 1].p) {
          throw InvalidArgument("table probabilities must be nondecreasing");
        }
      }
    }
    if (std::abs(knots.back().p - 1.0) > kNormalizationTolerance) {
      throw InvalidArgument("table curve must be normalized: last knot probability must be 1");
    }
    knots.back().p = 1.0;
    for (auto& k : knots) k.p = std::min(k.p, 1.0);
    const Time t_max = knots.back().t;
    return SuccessCurve(CurveKind::kTable, t_max, 0.0, std::move(knots));
  }

  static SuccessCurve zero(Time t_max) {
    check_horizon(t_max);
    return SuccessCurve(CurveKind::kZero, t_max, 0.0, {});
  }

  CurveKind kind() const { return kind_; }
  Time t_max() const { return t_max_; }
  bool is_zero() const { return kind_ == CurveKind::kZero; }
  // Power exponent or saturation rate; 0 for the other kinds.
  double shape() const { return shape_; }
  std::span<const Knot> knots() const { return knots_; }

  Probability operator()(Time t) const { return eval(t); }

  Probability eval(Time t) const {
    if (!(t >= 0.0)) throw InvalidArgument("curve evaluated at negative time");
    if (kind_ == CurveKind::kZero) return 0.0;
    if (t >= t_max_) return 1.0;
    switch (kind_) {
      case CurveKind::kLinear:
        return t / t_max_;
      case CurveKind::kPower:
        return std::pow(t / t_max_, shape_);
      case CurveKind::kExpSaturating:
        return std::expm1(-shape_ * t) / std::expm1(-shape_ * t_max_);
      case CurveKind::kTable:
        return interpolate(t);
      case CurveKind::kZero:
        break;
    }
    return 0.0;
  }

  friend bool operator==(const SuccessCurve&, const SuccessCurve&) = default;

 private:
  SuccessCurve(CurveKind kind, Time t_max, double shape, std::vector<Knot> knots)
      : kind_(kind), t_max_(t_max), shape_(shape), knots_(std::move(knots)) {}

  static void check_horizon(Time t_max) {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
      throw InvalidArgument("curve horizon t_max must be positive and finite");
    }
  }

  Probability interpolate(Time t) const {
    auto hi = std::upper_bound(knots_.begin(), knots_.end(), t,
                               [](Time x, const Knot& k) { return x < k.t; });
    // t < t_max and knots_.front().t == 0, so hi is interior.
    auto lo = std::prev(hi);
    const double w = (t - lo->t) / (hi->t - lo->t);
    return lo->p + w * (hi->p - lo->p);
  }

  CurveKind kind_;
  Time t_max_;
  double shape_;
  std::vector<Knot> knots_;
};

inline SuccessCurve zeroed(const SuccessCurve& curve) {
  return SuccessCurve::zero(curve.t_max());
}

// Smallest t with P(t) >= p, to within tol.
inline Time find_level(const SuccessCurve& curve, Probability p, Time tol) {
  if (!(p >= 0.0) || p > 1.0) throw InvalidArgument("level must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (curve.is_zero()) throw NumericError("zero curve never reaches a positive level");
  return first_true([&](Time t) { return curve.eval(t) >= p; }, 0.0, curve.t_max(), tol);
}

}  // namespace duel
