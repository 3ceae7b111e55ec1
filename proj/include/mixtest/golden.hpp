#pragma once

#include <stdexcept>

namespace mixtest {

// Golden-section search for the maximum of a unimodal function on [lo, hi].
// Returns the midpoint of the final bracket, which has width <= tol.
template <class F>
double golden_section_max(F&& f, double lo, double hi, double tol, int max_iter = 200) {
  if (!(hi > lo) || !(tol > 0.0)) {
    throw std::invalid_argument("golden_section_max requires hi > lo and tol > 0");
  }
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iter && b - a > tol; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace mixtest
