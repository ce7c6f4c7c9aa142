#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace dicke_ising {

/// Thrown when an iterative numerical scheme fails to meet its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Settings for the periodic trapezoidal rule with doubling refinement.
///
/// The integrands in this library are smooth periodic functions of the
/// lattice momentum k on [-pi, pi], where the trapezoidal rule converges
/// spectrally. Refinement doubles the node count until two successive
/// estimates agree to refine_tol (relative, with an absolute floor of 1).
struct QuadratureConfig {
  int base_points = 64;
  double refine_tol = 1e-10;
  int max_doublings = 16;

  void validate() const {
    if (base_points < 16 || base_points % 2 != 0)
      throw std::invalid_argument("QuadratureConfig: base_points must be even and >= 16");
    if (!(refine_tol > 0.0))
      throw std::invalid_argument("QuadratureConfig: refine_tol must be positive");
    if (max_doublings < 0)
      throw std::invalid_argument("QuadratureConfig: max_doublings must be non-negative");
  }
};

namespace detail {

// Compensated mean of f over n uniform nodes k_j = -pi + 2*pi*(j + offset)/n.
template <class F>
double periodic_node_mean(F&& f, long n, double offset) {
  const double step = 2.0 * M_PI / static_cast<double>(n);
  double sum = 0.0, comp = 0.0;
  for (long j = 0; j < n; ++j) {
    const double k = -M_PI + step * (static_cast<double>(j) + offset);
    const double y = f(k) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(n);
}

}  // namespace detail

/// Mean value (1/2pi) * Integral f(k) dk over [-pi, pi] for 2pi-periodic f.
///
/// Nodes include k = -pi and k = 0, so integrands must be finite there
/// (they are: at the critical field the h-eff = 1, k = 0 integrand value is
/// log 2, no special casing required).
template <class F>
double periodic_mean(F&& f, const QuadratureConfig& q = {}) {
  q.validate();
  long n = q.base_points;
  double mean = detail::periodic_node_mean(f, n, 0.0);
  for (int d = 0; d < q.max_doublings; ++d) {
    const double odd = detail::periodic_node_mean(f, n, 0.5);
    const double refined = 0.5 * (mean + odd);
    n *= 2;
    if (std::abs(refined - mean) <= q.refine_tol * (1.0 + std::abs(refined)))
      return refined;
    mean = refined;
  }
  throw ConvergenceError("periodic_mean: no convergence after " +
                         std::to_string(q.max_doublings) + " doublings (" +
                         std::to_string(n) + " nodes)");
}

}  // namespace dicke_ising
