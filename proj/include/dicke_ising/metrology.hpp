#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "dicke_ising/mean_field.hpp"
#include "dicke_ising/phase_diagram.hpp"
#include "dicke_ising/quadrature.hpp"

namespace dicke_ising {

class OutOfRegionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class DegenerateDesignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// First two moments of the cavity photon number: a thermal state below the
/// Dicke transition and a displaced thermal state above, with
/// mean = N x^2 + nbar and variance = N x^2 (1 + 2 nbar) + nbar + nbar^2,
/// nbar = 1/(exp(beta omega) - 1).
struct PhotonStats {
  double mean;
  double variance;
};

inline double thermal_occupation(double beta, double omega) {
  return 1.0 / std::expm1(beta * omega);
}

inline PhotonStats photon_stats(const ModelParams& m, long N, const QuadratureConfig& q = {}) {
  if (N < 1) throw std::invalid_argument("photon_stats: N must be >= 1");
  m.validate();
  const ModelRoute route = route_for(m);
  const LimitSolution sol = detail::solve_physical(m, m.h, route, q);
  const double nbar = thermal_occupation(m.beta, m.omega);
  const double nx2 = static_cast<double>(N) * sol.x_sq;
  return {nx2 + nbar, nx2 * (1.0 + 2.0 * nbar) + nbar + nbar * nbar};
}

/// Finite-size model of the order parameter near a first-order boundary:
/// N x_t^2 = N tanh(sign * N^gamma (h_t - h_c)), clamped to zero on the
/// normal side. Returns N x_t^2. The transition width scales as N^-gamma.
inline double tanh_order_parameter(double h_t, double h_c, double N, double gamma,
                                   double sign = 1.0) {
  if (!(N >= 1.0)) throw std::invalid_argument("tanh_order_parameter: N must be >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("tanh_order_parameter: gamma must be > 0");
  const double t = std::tanh(sign * std::pow(N, gamma) * (h_t - h_c));
  return t > 0.0 ? N * t : 0.0;
}

/// Best-unbiased-linear-estimator design on a scan grid: weights
/// g_i proportional to mu'_i / sigma2_i, normalized to Sum g_i mu'_i = 1,
/// with predicted variance (Sum mu'_i^2 / sigma2_i)^-1.
struct EstimatorDesign {
  std::vector<double> grid;
  std::vector<double> weights;
  std::vector<double> mu;
  std::vector<double> mu_prime;
  std::vector<double> sigma2;
  double reference_beta;
  double predicted_variance;
};

inline EstimatorDesign blue_estimator(std::vector<double> grid, std::vector<double> mu,
                                      std::vector<double> mu_prime, std::vector<double> sigma2,
                                      double reference_beta) {
  const std::size_t n = grid.size();
  if (n == 0 || mu.size() != n || mu_prime.size() != n || sigma2.size() != n)
    throw std::invalid_argument("blue_estimator: inputs must be non-empty and equally sized");
  double fisher = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(sigma2[i] > 0.0))
      throw std::invalid_argument("blue_estimator: sigma2 must be positive");
    fisher += mu_prime[i] * mu_prime[i] / sigma2[i];
  }
  if (fisher <= 0.0)
    throw DegenerateDesignError("blue_estimator: all mu' vanish on the grid");
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) weights[i] = mu_prime[i] / sigma2[i] / fisher;
  EstimatorDesign design{std::move(grid), std::move(weights), std::move(mu),
                         std::move(mu_prime), std::move(sigma2), reference_beta, 1.0 / fisher};
  return design;
}

struct MetrologyGridSpec {
  int points = 200;          // forced even so no node sits exactly on the kink
  double width_factor = 10;  // half-width = width_factor * N^-gamma
  double nbar = 1.0;         // thermal occupation; not derivable from reduced inputs
};

/// Estimator for a temperature deviation from a scan of the bias field
/// across the first-order boundary. Composes the critical field and its
/// beta_t-derivative from the phase diagram, the tanh finite-size model,
/// the photon moments, and the BLUE design. `variance` is the continuum
/// (unit scan density) value 1/Int mu'^2/sigma2 dh evaluated on the grid;
/// the design's predicted_variance keeps the plain discrete form.
struct TemperatureEstimator {
  EstimatorDesign design;
  double variance;
  double h_c;
  double h_c_prime;
  double grid_spacing;
};

namespace detail {

inline double first_order_critical_field(double omega_t, double beta_t,
                                         const QuadratureConfig& q) {
  const Classification c = classify(beta_t, omega_t, q);
  if (c.kind != ClassifyKind::First)
    throw OutOfRegionError("metrology: (omega_t, beta_t) is not in the first-order region");
  return c.h_crit;
}

}  // namespace detail

inline TemperatureEstimator temperature_estimator(double omega_t, double beta0_t, double N,
                                                  double gamma,
                                                  const MetrologyGridSpec& spec = {},
                                                  const QuadratureConfig& q = {}) {
  if (!(N >= 1.0)) throw std::invalid_argument("temperature_estimator: N must be >= 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("temperature_estimator: gamma must be > 0");
  if (spec.points < 2) throw std::invalid_argument("temperature_estimator: points must be >= 2");

  const double h_c = detail::first_order_critical_field(omega_t, beta0_t, q);
  const double db_slope = 1e-3 * beta0_t;
  const double hc_up = detail::first_order_critical_field(omega_t, beta0_t + db_slope, q);
  const double hc_dn = detail::first_order_critical_field(omega_t, beta0_t - db_slope, q);
  const double h_c_prime = (hc_up - hc_dn) / (2.0 * db_slope);

  const int m = spec.points % 2 == 0 ? spec.points : spec.points + 1;
  const double width = spec.width_factor * std::pow(N, -gamma);
  const double dh = 2.0 * width / m;
  // beta step small enough that the critical-field shift stays inside one
  // grid cell; a larger step saturates the tanh and loses the profile
  const double db = std::min(db_slope, 0.005 * std::pow(N, -gamma) /
                                            std::max(std::abs(h_c_prime), 1e-12));
  const double hc_plus = h_c + h_c_prime * db;
  const double hc_minus = h_c - h_c_prime * db;

  const double c1 = 1.0 + 2.0 * spec.nbar;
  const double c0 = spec.nbar + spec.nbar * spec.nbar;
  std::vector<double> grid(m), mu(m), mu_prime(m), sigma2(m);
  for (int i = 0; i < m; ++i) {
    const double h = h_c - width + (i + 0.5) * dh;
    grid[i] = h;
    const double nx2 = tanh_order_parameter(h, h_c, N, gamma);
    mu[i] = nx2 + spec.nbar;
    sigma2[i] = nx2 * c1 + c0;
    mu_prime[i] = (tanh_order_parameter(h, hc_plus, N, gamma) -
                   tanh_order_parameter(h, hc_minus, N, gamma)) /
                  (2.0 * db);
  }
  EstimatorDesign design =
      blue_estimator(std::move(grid), std::move(mu), std::move(mu_prime), std::move(sigma2),
                     beta0_t);
  const double variance = design.predicted_variance / dh;
  return {std::move(design), variance, h_c, h_c_prime, dh};
}

inline double temperature_estimator_variance(double omega_t, double beta0_t, double N,
                                             double gamma, const MetrologyGridSpec& spec = {},
                                             const QuadratureConfig& q = {}) {
  return temperature_estimator(omega_t, beta0_t, N, gamma, spec, q).variance;
}

struct ScalingFit {
  std::vector<double> N_values;
  std::vector<double> variances;
  double fitted_exponent;
  double gamma;
};

/// Var vs N across N_list with a least-squares log-log fit; the exponent
/// tracks -(1 + gamma).
inline ScalingFit sensitivity_scan(double omega_t, double beta0_t,
                                   const std::vector<double>& N_list, double gamma,
                                   const MetrologyGridSpec& spec = {},
                                   const QuadratureConfig& q = {}) {
  if (N_list.size() < 3)
    throw std::invalid_argument("sensitivity_scan: need at least 3 N values");
  for (std::size_t i = 1; i < N_list.size(); ++i)
    if (!(N_list[i] > N_list[i - 1]))
      throw std::invalid_argument("sensitivity_scan: N_list must be strictly increasing");
  ScalingFit fit;
  fit.gamma = gamma;
  fit.N_values = N_list;
  for (double N : N_list)
    fit.variances.push_back(temperature_estimator_variance(omega_t, beta0_t, N, gamma, spec, q));
  // least squares of log Var against log N
  const std::size_t n = N_list.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(N_list[i]), y = std::log(fit.variances[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

struct MonteCarloResult {
  double mean_estimate;
  double sample_variance;
};

/// Draws synthetic scans with Gaussian counts matched to (mu + dbeta mu',
/// sigma2) and applies the linear estimator; calibrates Eq.-style predicted
/// variance. Deterministic for a given seed.
inline MonteCarloResult simulate_estimator(const EstimatorDesign& design, double true_dbeta,
                                           long trials, std::uint64_t seed) {
  if (trials < 2) throw std::invalid_argument("simulate_estimator: trials must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  const std::size_t n = design.grid.size();
  double sum = 0.0, sumsq = 0.0;
  for (long t = 0; t < trials; ++t) {
    double est = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double count = design.mu[i] + true_dbeta * design.mu_prime[i] +
                           std::sqrt(design.sigma2[i]) * unit(rng);
      est += design.weights[i] * (count - design.mu[i]);
    }
    sum += est;
    sumsq += est * est;
  }
  const double mean = sum / trials;
  const double var = (sumsq - trials * mean * mean) / (trials - 1);
  return {mean, var};
}

}  // namespace dicke_ising
