#pragma once

#include <cmath>

#include "duel/types.hpp"

namespace duel {

// Smallest x in [lo, hi] at which a monotone predicate (false ... false true
// ... true) becomes true, located to within `tol`. The returned point always
// satisfies the predicate. Requires pred(hi) to hold.
template <typename Predicate>
double first_true(Predicate&& pred, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("bisection tolerance must be positive");
  if (!(lo <= hi)) throw InvalidArgument("bisection bracket is empty");
  if (pred(lo)) return lo;
  if (!pred(hi)) throw NumericError("predicate never holds on the bracket");
  while (hi - lo > tol) {
    const double mid = lo + 0.5 * (hi - lo);
    // Interval collapsed to adjacent doubles.
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace duel
