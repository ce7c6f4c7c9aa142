#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace dicke_ising {

/// Golden-section minimization on a bracketing interval [lo, hi].
/// Returns (argmin, min value) once hi - lo <= xtol.
template <class F>
std::pair<double, double> golden_section_min(F&& f, double lo, double hi, double xtol) {
  static const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > xtol) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = f(x2);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

/// Bisection for f(x) = 0 on [lo, hi]; requires f(lo) and f(hi) of opposite
/// sign (f(lo) < 0 < f(hi) or reversed).
template <class F>
double bisect_root(F&& f, double lo, double hi, double xtol, int max_iter = 200) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0))
    throw std::invalid_argument("bisect_root: endpoints do not bracket a sign change");
  for (int i = 0; i < max_iter && hi - lo > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace dicke_ising
