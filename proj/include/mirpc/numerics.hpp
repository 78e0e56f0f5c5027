#pragma once

#include <cmath>
#include <functional>

namespace mirpc {

struct Maximum {
  double x;
  double value;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
/// Stops once the bracket is narrower than `tolerance` (absolute, in x).
/// The end points are evaluated too, so monotone objectives converge to the
/// boundary instead of an interior point.
inline Maximum golden_section_maximize(const std::function<double(double)>& f, double lo,
                                       double hi, double tolerance = 1e-9) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tolerance) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  Maximum best{0.5 * (a + b), f(0.5 * (a + b))};
  for (double edge : {lo, hi}) {
    const double fe = f(edge);
    if (fe > best.value) best = {edge, fe};
  }
  return best;
}

}  // namespace mirpc
