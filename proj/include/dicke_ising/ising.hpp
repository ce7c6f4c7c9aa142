#pragma once

#include <cmath>
#include <stdexcept>

#include "dicke_ising/quadrature.hpp"

namespace dicke_ising {

/// log(2 cosh x) without overflow for large |x|.
inline double log2cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax));
}

/// sech^2(x) without overflow.
inline double sech2(double x) {
  const double e = std::exp(-std::abs(x));
  const double s = 2.0 * e / (1.0 + e * e);
  return s * s;
}

/// Dimensionless parameters of the transverse-field Ising chain,
/// beta_t = beta*J and h_t = h/J.
struct ReducedIsingParams {
  double beta_t;
  double h_t;

  ReducedIsingParams(double beta_t_, double h_t_) : beta_t(beta_t_), h_t(h_t_) {
    if (!(beta_t > 0.0) || !std::isfinite(beta_t))
      throw std::invalid_argument("ReducedIsingParams: beta_t must be finite and > 0");
    if (!(h_t >= 0.0) || !std::isfinite(h_t))
      throw std::invalid_argument("ReducedIsingParams: h_t must be finite and >= 0");
  }

  static ReducedIsingParams from_physical(double beta, double h, double J) {
    if (!(J > 0.0)) throw std::invalid_argument("ReducedIsingParams: J must be > 0");
    return {beta * J, h / J};
  }
};

/// Free-fermion dispersion in units of J: eps(k)/J = 2 sqrt(1 + h^2 - 2 h cos k).
/// Ranges over [2|1 - h_t|, 2(1 + h_t)]; the gap closes exactly at h_t = 1.
inline double dispersion(double k, double h_t) {
  if (!std::isfinite(k)) throw std::domain_error("dispersion: k must be finite");
  if (!(h_t >= 0.0)) throw std::domain_error("dispersion: h_t must be >= 0");
  const double s2 = 1.0 + h_t * h_t - 2.0 * h_t * std::cos(k);
  return 2.0 * std::sqrt(s2 > 0.0 ? s2 : 0.0);
}

namespace detail {

// Half-dispersion s(k) = eps(k)/(2J); the integrands below depend on beta_t*s.
inline double half_dispersion(double k, double h_t) {
  const double s2 = 1.0 + h_t * h_t - 2.0 * h_t * std::cos(k);
  return std::sqrt(s2 > 0.0 ? s2 : 0.0);
}

}  // namespace detail

/// Thermodynamic-limit free energy per spin in units of J:
/// f = -(1/beta_t) (1/2pi) Int log(2 cosh(beta_t s(k))) dk.
inline double free_energy_density(const ReducedIsingParams& p, const QuadratureConfig& q = {}) {
  const double bt = p.beta_t, ht = p.h_t;
  const double mean = periodic_mean(
      [bt, ht](double k) { return log2cosh(bt * detail::half_dispersion(k, ht)); }, q);
  return -mean / bt;
}

/// Free energy per spin of the N-site chain from the fermionized spectrum,
/// k = 2 pi n / N. Converges to free_energy_density as N -> infinity.
inline double free_energy_density_finite(const ReducedIsingParams& p, long N) {
  if (N < 2) throw std::invalid_argument("free_energy_density_finite: N must be >= 2");
  const double bt = p.beta_t, ht = p.h_t;
  double sum = 0.0, comp = 0.0;
  for (long n = 0; n < N; ++n) {
    const double k = 2.0 * M_PI * static_cast<double>(n) / static_cast<double>(N);
    const double y = log2cosh(bt * detail::half_dispersion(k, ht)) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return -sum / (static_cast<double>(N) * bt);
}

/// Transverse magnetization m = -d f / d h_t, differentiated under the
/// integral sign: m = <tanh(beta_t s) (h_t - cos k)/s>.
inline double magnetization(const ReducedIsingParams& p, const QuadratureConfig& q = {}) {
  const double bt = p.beta_t, ht = p.h_t;
  return periodic_mean(
      [bt, ht](double k) {
        const double c = std::cos(k);
        double s = detail::half_dispersion(k, ht);
        if (s < 1e-300) s = 1e-300;  // gap node at h_t = 1, k = 0; numerator vanishes there
        return std::tanh(bt * s) * (ht - c) / s;
      },
      q);
}

}  // namespace dicke_ising
