#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dicke_ising/ising.hpp"
#include "dicke_ising/optimize.hpp"
#include "dicke_ising/quadrature.hpp"

namespace dicke_ising {

/// Physical parameters of the full Dicke-Ising Hamiltonian
/// H = -h Sum sigma_z - J Sum sigma_y sigma_y + omega a^dag a
///     + (g/sqrt(N)) Sum sigma_x (a + a^dag).
///
/// J = 0 and g = 0 are admitted; they are served by dedicated limit paths
/// (pure Dicke / pure Ising) instead of the reduced parametrization.
struct ModelParams {
  double h;
  double J;
  double g;
  double omega;
  double beta;

  void validate() const {
    auto fin = [](double x) { return std::isfinite(x); };
    if (!fin(h) || !fin(J) || !fin(g) || !fin(omega) || !fin(beta))
      throw std::invalid_argument("ModelParams: all fields must be finite");
    if (!(h >= 0.0)) throw std::invalid_argument("ModelParams: h must be >= 0");
    if (!(J >= 0.0)) throw std::invalid_argument("ModelParams: J must be >= 0");
    if (!(g >= 0.0)) throw std::invalid_argument("ModelParams: g must be >= 0");
    if (!(omega > 0.0)) throw std::invalid_argument("ModelParams: omega must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("ModelParams: beta must be > 0");
  }
};

/// Dimensionless control parameters: h_t = h/J, beta_t = beta*J,
/// omega_t = omega*J/(4 g^2). omega_t = +infinity encodes g = 0.
struct ReducedParams {
  double h_t;
  double beta_t;
  double omega_t;

  void validate() const {
    if (!(h_t >= 0.0) || !std::isfinite(h_t))
      throw std::invalid_argument("ReducedParams: h_t must be finite and >= 0");
    if (!(beta_t > 0.0) || !std::isfinite(beta_t))
      throw std::invalid_argument("ReducedParams: beta_t must be finite and > 0");
    if (!(omega_t > 0.0))  // +inf allowed
      throw std::invalid_argument("ReducedParams: omega_t must be > 0");
  }
};

inline ReducedParams to_reduced(const ModelParams& m) {
  m.validate();
  if (!(m.J > 0.0))
    throw std::invalid_argument("to_reduced: J must be > 0 (use the J = 0 limit path)");
  const double omega_t = m.g > 0.0 ? m.omega * m.J / (4.0 * m.g * m.g)
                                   : std::numeric_limits<double>::infinity();
  return {m.h / m.J, m.beta * m.J, omega_t};
}

enum class Phase { Normal, Superradiant };

/// Minimizer of the reduced free energy over h_eff_t >= h_t.
struct MeanFieldSolution {
  double x_t_sq;    // rescaled order parameter (2 g x / J)^2
  double h_eff_t;   // effective field sqrt(h_t^2 + x_t_sq)
  double s_x;       // spin mean field, = -2 omega_t * sqrt(x_t_sq) by stationarity
  double free_energy;  // F/(N J) at the minimizer, additive constant dropped
  Phase phase;
};

struct InteriorMinimum {
  double h_star;  // location of the interior local minimum of G(u)
  double value;   // G(h_star)
};

/// Reduced free energy F(h_eff_t)/(N J) = f_ising(beta_t, h_eff_t)
/// + omega_t (h_eff_t^2 - h_t^2). At h_eff_t = h_t the oscillator term
/// vanishes and the value equals the pure Ising free energy.
inline double reduced_free_energy(double h_eff_t, const ReducedParams& p,
                                  const QuadratureConfig& q = {}, bool enforce_bound = true) {
  p.validate();
  if (!(h_eff_t >= 0.0) || !std::isfinite(h_eff_t))
    throw std::invalid_argument("reduced_free_energy: h_eff_t must be finite and >= 0");
  if (enforce_bound && h_eff_t < p.h_t - 1e-12)
    throw std::invalid_argument("reduced_free_energy: h_eff_t must be >= h_t");
  const double fI = free_energy_density({p.beta_t, h_eff_t}, q);
  if (std::isinf(p.omega_t)) {
    if (std::abs(h_eff_t - p.h_t) > 1e-12)
      throw std::invalid_argument("reduced_free_energy: omega_t = inf requires h_eff_t = h_t");
    return fI;
  }
  return fI + p.omega_t * (h_eff_t * h_eff_t - p.h_t * p.h_t);
}

/// Locates the unique interior local minimum of
/// G(u) = f_ising(beta_t, u) + omega_t u^2 over u > 0, if any.
///
/// Since the magnetization is bounded by 1, any stationary point satisfies
/// u < 1/(2 omega_t); the coarse scan covers that range on a log-spaced grid
/// (256 points) and golden-section refines the deepest interior bracket.
/// The minimum may be local-but-not-global (the first-order regime), so the
/// bracket test looks for local minima rather than the scan-wide argmin.
inline std::optional<InteriorMinimum> interior_minimum(double beta_t, double omega_t,
                                                       const QuadratureConfig& q = {}) {
  if (!(beta_t > 0.0) || !std::isfinite(beta_t))
    throw std::invalid_argument("interior_minimum: beta_t must be finite and > 0");
  if (!(omega_t > 0.0) || !std::isfinite(omega_t))
    throw std::invalid_argument("interior_minimum: omega_t must be finite and > 0");
  auto G = [beta_t, omega_t, &q](double u) {
    return free_energy_density({beta_t, u}, q) + omega_t * u * u;
  };
  const double u_max = std::max(4.0, 1.0 / (2.0 * omega_t) + 1.0);
  const int n_scan = 256;
  const double u_lo = 1e-6 * u_max;
  std::vector<double> us(n_scan + 1), gs(n_scan + 1);
  us[0] = 0.0;
  gs[0] = G(0.0);
  const double ratio = std::log(u_max / u_lo) / static_cast<double>(n_scan - 1);
  for (int i = 0; i < n_scan; ++i) {
    us[i + 1] = u_lo * std::exp(ratio * static_cast<double>(i));
    gs[i + 1] = G(us[i + 1]);
  }
  int best = -1;
  for (int i = 1; i < n_scan; ++i) {
    if (gs[i] < gs[i - 1] && gs[i] <= gs[i + 1]) {
      if (best < 0 || gs[i] < gs[best]) best = i;
    }
  }
  if (best < 0) return std::nullopt;
  const auto [u_star, g_star] = golden_section_min(G, us[best - 1], us[best + 1], 1e-10);
  return InteriorMinimum{u_star, g_star};
}

/// Global minimization of the reduced free energy over h_eff_t >= h_t.
/// The boundary value F(h_t) competes with the interior minimum (when it
/// exists and lies above h_t); an exact tie is reported as Superradiant.
inline MeanFieldSolution minimize(const ReducedParams& p, const QuadratureConfig& q = {}) {
  p.validate();
  const double f_boundary = free_energy_density({p.beta_t, p.h_t}, q);
  if (std::isinf(p.omega_t))
    return {0.0, p.h_t, 0.0, f_boundary, Phase::Normal};
  const auto im = interior_minimum(p.beta_t, p.omega_t, q);
  if (im && im->h_star > p.h_t) {
    const double f_interior = im->value - p.omega_t * p.h_t * p.h_t;
    if (f_interior <= f_boundary) {
      const double x_t_sq = im->h_star * im->h_star - p.h_t * p.h_t;
      const double s_x = -2.0 * p.omega_t * std::sqrt(x_t_sq);
      return {x_t_sq, im->h_star, s_x, f_interior, Phase::Superradiant};
    }
  }
  return {0.0, p.h_t, 0.0, f_boundary, Phase::Normal};
}

/// Mean-field state of the decoupled limits, in physical units.
struct LimitSolution {
  double h_eff;
  double x_sq;
  double s_x;
  double m_z;
  Phase phase;
};

/// J = 0 (pure Dicke) closed form: independent spins in the effective field
/// u = sqrt(h^2 + 4 g^2 x^2) with free energy per spin
/// omega x^2 - (1/beta) log(2 cosh(beta u)). Superradiant iff
/// 2 g^2 tanh(beta h) > omega h (2 g^2 beta > omega when h = 0); then the
/// effective field solves 2 g^2 tanh(beta u) = omega u.
inline LimitSolution dicke_limit_solve(double h, double g, double omega, double beta) {
  const bool superradiant =
      h > 0.0 ? (2.0 * g * g * std::tanh(beta * h) > omega * h) : (2.0 * g * g * beta > omega);
  if (!superradiant) {
    return {h, 0.0, 0.0, std::tanh(beta * h), Phase::Normal};
  }
  auto phi = [g, omega, beta](double u) { return 2.0 * g * g * std::tanh(beta * u) - omega * u; };
  const double hi = 2.0 * g * g / omega + 1.0;
  const double lo = h > 0.0 ? h : 1e-300;
  const double u = bisect_root(phi, lo, hi, 1e-14 * hi);
  const double x_sq = (u * u - h * h) / (4.0 * g * g);
  const double x = std::sqrt(x_sq > 0.0 ? x_sq : 0.0);
  const double th = std::tanh(beta * u);
  return {u, x_sq, -2.0 * g * x * th / u, (h / u) * th, Phase::Superradiant};
}

enum class ModelRoute { PureIsing, PureDicke, Reduced };

/// J = 0 and extreme h/J route to the closed-form Dicke limit; g = 0 routes
/// to the exact Ising chain. Everything else goes through the reduced
/// minimization.
inline ModelRoute route_for(const ModelParams& m) {
  if (m.J == 0.0) return ModelRoute::PureDicke;
  if (m.g == 0.0) return ModelRoute::PureIsing;
  if (m.h / m.J > 1e5) return ModelRoute::PureDicke;
  return ModelRoute::Reduced;
}

namespace detail {

inline LimitSolution solve_physical(const ModelParams& m, double h_value, ModelRoute route,
                                    const QuadratureConfig& q) {
  switch (route) {
    case ModelRoute::PureDicke:
      return dicke_limit_solve(h_value, m.g, m.omega, m.beta);
    case ModelRoute::PureIsing: {
      const ReducedIsingParams rp(m.beta * m.J, h_value / m.J);
      return {h_value, 0.0, 0.0, magnetization(rp, q), Phase::Normal};
    }
    case ModelRoute::Reduced:
    default: {
      const ReducedParams rp{h_value / m.J, m.beta * m.J, m.omega * m.J / (4.0 * m.g * m.g)};
      const MeanFieldSolution sol = minimize(rp, q);
      const double scale = m.J / (2.0 * m.g);
      const double h_eff = m.J * sol.h_eff_t;
      double m_z = 0.0;
      if (sol.h_eff_t > 0.0) {
        const double m_rot = magnetization({rp.beta_t, sol.h_eff_t}, q);
        m_z = m_rot * (rp.h_t / sol.h_eff_t);
      }
      return {h_eff, scale * scale * sol.x_t_sq, sol.s_x, m_z, sol.phase};
    }
  }
}

}  // namespace detail

/// Physical observables at a model point: order parameter x^2, spin mean
/// field s_x, magnetization m_z along the original z axis (rotated-frame
/// magnetization projected back, m(beta_t, h_eff_t) * h_t/h_eff_t), and the
/// susceptibility chi = d m_z / d h by central difference with
/// re-minimization at h +- delta.
struct Observables {
  double x_sq;
  double s_x;
  double m_z;
  double chi;
  double h_eff;
  Phase phase;
  bool chi_boundary_adjacent;  // the chi stencil straddles a phase change
};

inline Observables observables(const ModelParams& m, const QuadratureConfig& q = {}) {
  m.validate();
  const ModelRoute route = route_for(m);
  auto solve = [&](double h_value) { return detail::solve_physical(m, h_value, route, q); };
  const LimitSolution base = solve(m.h);
  double delta = 1e-4 * std::max({m.J, m.h, m.g});
  if (delta == 0.0) delta = 1e-6;
  LimitSolution up = solve(m.h + delta);
  double chi;
  bool adjacent;
  if (m.h >= delta) {
    const LimitSolution down = solve(m.h - delta);
    chi = (up.m_z - down.m_z) / (2.0 * delta);
    adjacent = up.phase != base.phase || down.phase != base.phase;
  } else {
    chi = (up.m_z - base.m_z) / delta;
    adjacent = up.phase != base.phase;
  }
  return {base.x_sq, base.s_x, base.m_z, chi, base.h_eff, base.phase, adjacent};
}

}  // namespace dicke_ising
