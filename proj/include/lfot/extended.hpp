#pragma once

#include <cmath>
#include <limits>

namespace lfot {

// Extended-real conventions used by the distance/cost layer:
//   (-inf) + inf := -inf,   (-inf)^q := -inf.
// IEEE infinities carry the values; only these two rules need help.

inline constexpr double inf() { return std::numeric_limits<double>::infinity(); }
inline constexpr double neg_inf() { return -std::numeric_limits<double>::infinity(); }

inline bool is_neg_inf(double x) { return std::isinf(x) && x < 0.0; }
inline bool is_pos_inf(double x) { return std::isinf(x) && x > 0.0; }

inline double ext_add(double a, double b) {
  if (is_neg_inf(a) || is_neg_inf(b)) return neg_inf();
  return a + b;
}

// x^q for x in [0,inf] or x = -inf, q > 0.
inline double ext_pow(double x, double q) {
  if (is_neg_inf(x)) return neg_inf();
  if (is_pos_inf(x)) return inf();
  return std::pow(x, q);
}

}  // namespace lfot
