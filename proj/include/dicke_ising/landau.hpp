#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dicke_ising/ising.hpp"
#include "dicke_ising/optimize.hpp"
#include "dicke_ising/quadrature.hpp"

namespace dicke_ising {

/// Thrown by tricritical_point when no solution exists for the requested
/// mode frequency.
class NoSolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Taylor coefficients of the free-energy integral in the rescaled order
/// parameter x_t around x_t = 0 at fixed (beta_t, h_t):
/// f(sqrt(h_t^2 + x_t^2)) = I0 + I2 x_t^2 + I4 x_t^4 + O(x_t^6).
struct LandauCoeffs {
  double I0;
  double I2;
  double I4;
};

namespace detail {

// Derivatives of L(sigma) = -(1/beta_t) log(2 cosh(beta_t sqrt(sigma)))
// with respect to sigma = s^2, evaluated along s.
// dL/dsigma = -tanh(bt s)/(2 s); d2L/dsigma2 = -bt sech^2(bt s)/(4 s^2) + tanh(bt s)/(4 s^3).
// The expansion variable is u = x_t^2 with sigma(u) = 1 + (h^2+u) - 2 cos k sqrt(h^2+u),
// so dsigma/du = 1 - cos k / h and d2sigma/du2 = cos k / (2 h^3) at u = 0.
inline double landau_i2_integrand(double k, double beta_t, double h_t) {
  const double c = std::cos(k);
  double s = half_dispersion(k, h_t);
  if (s < 1e-8) s = 1e-8;
  return -std::tanh(beta_t * s) / (2.0 * s) * (1.0 - c / h_t);
}

inline double landau_i4_integrand(double k, double beta_t, double h_t) {
  const double c = std::cos(k);
  double s = half_dispersion(k, h_t);
  if (s < 1e-8) s = 1e-8;
  const double s2 = s * s;
  const double th = std::tanh(beta_t * s);
  const double d1 = -th / (2.0 * s);
  const double d2 = -beta_t * sech2(beta_t * s) / (4.0 * s2) + th / (4.0 * s * s2);
  const double du = 1.0 - c / h_t;
  const double duu = c / (2.0 * h_t * h_t * h_t);
  return 0.5 * (d2 * du * du + d1 * duu);
}

}  // namespace detail

/// Analytic-in-u coefficients, integrated with the shared quadrature.
/// h_t = 0 is a non-analytic expansion point and is rejected.
inline LandauCoeffs landau_coefficients(double beta_t, double h_t,
                                        const QuadratureConfig& q = {}) {
  if (!(beta_t > 0.0) || !std::isfinite(beta_t))
    throw std::invalid_argument("landau_coefficients: beta_t must be finite and > 0");
  if (!(h_t > 0.0) || !std::isfinite(h_t))
    throw std::domain_error("landau_coefficients: h_t must be strictly positive");
  const double I0 = free_energy_density({beta_t, h_t}, q);
  const double I2 =
      periodic_mean([=](double k) { return detail::landau_i2_integrand(k, beta_t, h_t); }, q);
  const double I4 =
      periodic_mean([=](double k) { return detail::landau_i4_integrand(k, beta_t, h_t); }, q);
  return {I0, I2, I4};
}

/// I2(beta_t, h_t) + omega_t; a root in h_t locates the second-order boundary.
inline double second_order_condition(double beta_t, double h_t, double omega_t,
                                     const QuadratureConfig& q = {}) {
  if (!(omega_t >= 0.0) || !std::isfinite(omega_t))
    throw std::invalid_argument("second_order_condition: omega_t must be finite and >= 0");
  return landau_coefficients(beta_t, h_t, q).I2 + omega_t;
}

struct MaxNegI2Result {
  double value;
  double beta_t;
  double h_t;
};

namespace detail {

inline double neg_i2(double beta_t, double h_t, const QuadratureConfig& q) {
  return -periodic_mean([=](double k) { return landau_i2_integrand(k, beta_t, h_t); }, q);
}

}  // namespace detail

/// Supremum of -I2 over (beta_t, h_t): 200x200 log grid over
/// beta_t in [0.05, 50] x h_t in [0.05, 10], then shrinking local refinement
/// around the best cell. The supremum is about 0.3356, approached at low
/// temperature near h_t = 1.1; above it no superradiant transition exists.
inline MaxNegI2Result max_neg_I2(const QuadratureConfig& q = {}) {
  const int nb = 200, nh = 200;
  double best_v = -1e300, best_b = 1.0, best_h = 1.0;
  for (int i = 0; i < nb; ++i) {
    const double bt = 0.05 * std::pow(50.0 / 0.05, static_cast<double>(i) / (nb - 1));
    for (int j = 0; j < nh; ++j) {
      const double ht = 0.05 * std::pow(10.0 / 0.05, static_cast<double>(j) / (nh - 1));
      const double v = detail::neg_i2(bt, ht, q);
      if (v > best_v) {
        best_v = v;
        best_b = bt;
        best_h = ht;
      }
    }
  }
  // local polish: shrinking 5x5 stencil, first-in-row-major tie-breaking
  double span_b = 0.5 * best_b, span_h = 0.5 * best_h;
  for (int it = 0; it < 48; ++it) {
    double cand_v = best_v, cand_b = best_b, cand_h = best_h;
    for (int a = -2; a <= 2; ++a) {
      for (int b = -2; b <= 2; ++b) {
        if (a == 0 && b == 0) continue;
        const double bt = best_b + span_b * (a / 2.0);
        const double ht = best_h + span_h * (b / 2.0);
        if (bt <= 0.0 || ht <= 0.0) continue;
        const double v = detail::neg_i2(bt, ht, q);
        if (v > cand_v) {
          cand_v = v;
          cand_b = bt;
          cand_h = ht;
        }
      }
    }
    best_v = cand_v;
    best_b = cand_b;
    best_h = cand_h;
    span_b *= 0.7;
    span_h *= 0.7;
  }
  return {best_v, best_b, best_h};
}

/// Interior maximum of -I2(beta_t, .) over h_t, when it exists. The locus of
/// these maxima is exactly the I4 = 0 curve (stationarity of -I2 in h_t).
struct RidgePoint {
  double h_t;
  double value;
};

inline std::optional<RidgePoint> ridge_max_neg_I2(double beta_t, const QuadratureConfig& q = {}) {
  const int n = 320;
  const double lo = 1e-3, hi = 8.0;
  std::vector<double> hs(n), vs(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    hs[i] = lo * std::exp(step * i);
    vs[i] = detail::neg_i2(beta_t, hs[i], q);
  }
  int best = -1;
  for (int i = 1; i + 1 < n; ++i) {
    if (vs[i] > vs[i - 1] && vs[i] >= vs[i + 1]) {
      if (best < 0 || vs[i] > vs[best]) best = i;
    }
  }
  if (best < 0) return std::nullopt;
  auto neg = [&](double h) { return -detail::neg_i2(beta_t, h, q); };
  const auto [h_star, neg_v] = golden_section_min(neg, hs[best - 1], hs[best + 1], 1e-9);
  return RidgePoint{h_star, -neg_v};
}

/// Minimal beta_t for which I4(beta_t, h_t) turns negative anywhere, i.e.
/// the smallest inverse temperature admitting a first-order transition.
/// The I4 < 0 region first opens at h_t -> 0, so the predicate uses the
/// Richardson-extrapolated small-field limit of I4.
inline double min_beta_first_order(const QuadratureConfig& q = {}) {
  auto i4_limit = [&q](double bt) {
    const double a = landau_coefficients(bt, 0.01, q).I4;
    const double b = landau_coefficients(bt, 0.02, q).I4;
    return (4.0 * a - b) / 3.0;
  };
  double lo = 0.9, hi = 1.6;
  if (!(i4_limit(lo) > 0.0) || !(i4_limit(hi) < 0.0))
    throw ConvergenceError("min_beta_first_order: bracket [0.9, 1.6] failed");
  return bisect_root(i4_limit, lo, hi, 1e-8);
}

struct TricriticalPoint {
  double beta_t;
  double h_t;
};

/// Solves I4 = 0 and I2 + omega_t = 0 for the point where the transition
/// changes order: the crossing of the -I2 ridge (which is the I4 = 0 curve)
/// with the level omega_t. The ridge height grows monotonically from
/// chi0(beta_c)/2 at beta_c toward its zero-temperature supremum, so a
/// bisection in beta_t suffices. Throws NoSolutionError outside that range.
inline TricriticalPoint tricritical_point(double omega_t, const QuadratureConfig& q = {}) {
  if (!(omega_t > 0.0) || !std::isfinite(omega_t))
    throw std::invalid_argument("tricritical_point: omega_t must be finite and > 0");
  const double beta_c = min_beta_first_order(q);
  double lo = beta_c * (1.0 + 1e-4);
  const auto r_lo = ridge_max_neg_I2(lo, q);
  if (r_lo && r_lo->value >= omega_t)
    throw NoSolutionError("tricritical_point: omega_t below the range covered by the I4 = 0 curve");
  double hi = 0.0;
  for (double bt = lo; bt <= 420.0; bt *= 1.35) {
    const auto r = ridge_max_neg_I2(bt, q);
    if (r && r->value >= omega_t) {
      hi = bt;
      break;
    }
    lo = bt;
  }
  if (hi == 0.0)
    throw NoSolutionError("tricritical_point: no transition exists for this omega_t");
  for (int it = 0; it < 60 && hi - lo > 1e-6 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const auto r = ridge_max_neg_I2(mid, q);
    if (r && r->value >= omega_t)
      hi = mid;
    else
      lo = mid;
  }
  const double beta_t = 0.5 * (lo + hi);
  const auto r = ridge_max_neg_I2(beta_t, q);
  if (!r) throw ConvergenceError("tricritical_point: ridge lost during bisection");
  return {beta_t, r->h_t};
}

}  // namespace dicke_ising
