#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dicke_ising/landau.hpp"
#include "dicke_ising/mean_field.hpp"
#include "dicke_ising/optimize.hpp"
#include "dicke_ising/parallel.hpp"

namespace dicke_ising {

enum class TransitionOrder { First, Second };
enum class ClassifyKind { NoTransitionLine, Second, First };

/// What happens along a downward h_t scan at fixed (beta_t, omega_t).
///
/// With an interior minimum of G(u) = f_ising(beta_t, u) + omega_t u^2 at
/// h_star, the chain turns superradiant below h_star (second order). When
/// that minimum is local but not global (G(h_star) > G(0)), lowering h_t
/// further hits a first-order return to the normal state where the boundary
/// free energy becomes degenerate with the interior one; that degeneracy
/// field is the reported critical h_t and the label is First.
struct Classification {
  ClassifyKind kind;
  double h_crit;          // NaN when kind == NoTransitionLine
  double h_star;          // interior minimum location (NaN when absent)
  double interior_value;  // G(h_star) (NaN when absent)
};

inline Classification classify(double beta_t, double omega_t, const QuadratureConfig& q = {}) {
  if (!(omega_t > 0.0) || !std::isfinite(omega_t))
    throw std::invalid_argument("classify: omega_t must be finite and > 0");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto im = interior_minimum(beta_t, omega_t, q);
  if (!im) return {ClassifyKind::NoTransitionLine, nan, nan, nan};
  const double g0 = free_energy_density({beta_t, 0.0}, q);
  if (g0 < im->value) {
    auto delta = [&](double h) {
      return free_energy_density({beta_t, h}, q) + omega_t * h * h - im->value;
    };
    // delta(0) < 0 and delta > 0 on the rise toward the interior barrier;
    // bracket the first sign change on a linear scan of (0, h_star).
    const int n = 512;
    double lo = 0.0, hi = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double h = im->h_star * static_cast<double>(i) / n;
      if (delta(h) > 0.0) {
        hi = h;
        lo = im->h_star * static_cast<double>(i - 1) / n;
        break;
      }
    }
    if (hi == 0.0) return {ClassifyKind::Second, im->h_star, im->h_star, im->value};
    const double h_crit = bisect_root(delta, lo, hi, 1e-12 * im->h_star);
    return {ClassifyKind::First, h_crit, im->h_star, im->value};
  }
  return {ClassifyKind::Second, im->h_star, im->h_star, im->value};
}

struct BoundaryPoint {
  double omega_t;
  double beta_t;
  double h_t_crit;
  TransitionOrder order;
  double jump_x_t_sq;  // order-parameter discontinuity (0 on the second-order branch)
  double residual;     // |I2 + omega_t| (second) or free-energy degeneracy gap (first)
};

/// Second-order boundary h_t = h_star(beta_t): the locus where the interior
/// minimum meets the constraint boundary. Exists for every beta_t with an
/// interior minimum; per-point absence is skipped, tracing continues.
inline std::vector<BoundaryPoint> second_order_branch(double omega_t,
                                                      const std::vector<double>& beta_grid,
                                                      const QuadratureConfig& q = {}) {
  std::vector<BoundaryPoint> out;
  for (double bt : beta_grid) {
    const auto im = interior_minimum(bt, omega_t, q);
    if (!im) continue;
    const double residual = std::abs(second_order_condition(bt, im->h_star, omega_t, q));
    out.push_back({omega_t, bt, im->h_star, TransitionOrder::Second, 0.0, residual});
  }
  return out;
}

/// First-order boundary: degeneracy of the interior and boundary free
/// energies, present only where the interior minimum is local-but-not-global.
inline std::vector<BoundaryPoint> first_order_branch(double omega_t,
                                                     const std::vector<double>& beta_grid,
                                                     const QuadratureConfig& q = {}) {
  std::vector<BoundaryPoint> out;
  for (double bt : beta_grid) {
    const auto c = classify(bt, omega_t, q);
    if (c.kind != ClassifyKind::First) continue;
    const double f_bnd = free_energy_density({bt, c.h_crit}, q);
    const double f_int = c.interior_value - omega_t * c.h_crit * c.h_crit;
    const double jump = c.h_star * c.h_star - c.h_crit * c.h_crit;
    out.push_back({omega_t, bt, c.h_crit, TransitionOrder::First, jump, std::abs(f_int - f_bnd)});
  }
  return out;
}

/// Zero set of I4(beta_t, .) per beta_t; empty below the minimal beta_t.
inline std::vector<std::pair<double, double>> i4_zero_locus(const std::vector<double>& beta_grid,
                                                            const QuadratureConfig& q = {}) {
  std::vector<std::pair<double, double>> out;
  for (double bt : beta_grid) {
    const int n = 240;
    const double lo = 0.01, hi = 8.0;
    const double step = std::log(hi / lo) / (n - 1);
    double prev_h = lo;
    double prev_v = landau_coefficients(bt, lo, q).I4;
    for (int i = 1; i < n; ++i) {
      const double h = lo * std::exp(step * i);
      const double v = landau_coefficients(bt, h, q).I4;
      if ((prev_v < 0.0) != (v < 0.0)) {
        auto f = [&](double x) { return landau_coefficients(bt, x, q).I4; };
        out.emplace_back(bt, bisect_root(f, prev_h, h, 1e-10));
      }
      prev_h = h;
      prev_v = v;
    }
  }
  return out;
}

struct PhaseDiagram {
  std::vector<BoundaryPoint> boundaries;                // sorted by (omega_t, beta_t)
  std::vector<std::pair<double, double>> i4_zero;       // (beta_t, h_t)
};

/// 1/beta_t uniform on [0.05, 1.0] in 96 steps, ascending in beta_t.
inline std::vector<double> default_beta_grid() {
  std::vector<double> out;
  const int n = 96;
  for (int i = 0; i < n; ++i) {
    const double inv = 0.05 + (1.0 - 0.05) * static_cast<double>(i) / (n - 1);
    out.push_back(1.0 / inv);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline PhaseDiagram trace_diagram(const std::vector<double>& omega_list,
                                  const std::vector<double>& beta_grid,
                                  const QuadratureConfig& q = {},
                                  unsigned workers = default_workers()) {
  PhaseDiagram diagram;
  if (omega_list.empty()) return diagram;
  std::vector<std::vector<BoundaryPoint>> per_omega(omega_list.size());
  parallel_for(omega_list.size(), workers, [&](std::size_t i) {
    auto second = second_order_branch(omega_list[i], beta_grid, q);
    auto first = first_order_branch(omega_list[i], beta_grid, q);
    second.insert(second.end(), first.begin(), first.end());
    per_omega[i] = std::move(second);
  });
  for (auto& pts : per_omega)
    diagram.boundaries.insert(diagram.boundaries.end(), pts.begin(), pts.end());
  std::stable_sort(diagram.boundaries.begin(), diagram.boundaries.end(),
                   [](const BoundaryPoint& a, const BoundaryPoint& b) {
                     if (a.omega_t != b.omega_t) return a.omega_t < b.omega_t;
                     return a.beta_t < b.beta_t;
                   });
  diagram.i4_zero = i4_zero_locus(beta_grid, q);
  return diagram;
}

}  // namespace dicke_ising
