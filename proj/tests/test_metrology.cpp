#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "dicke_ising/metrology.hpp"

using namespace dicke_ising;

namespace {
const QuadratureConfig kQ{64, 1e-11, 18};
}

TEST_CASE("photon statistics: thermal state in the normal phase") {
  // decoupled chain (g = 0), beta*omega = log 2 so nbar = 1: mean 1, variance 2
  const ModelParams m{2.0, 1.0, 0.0, std::log(2.0) / 3.0, 3.0};
  const PhotonStats ps = photon_stats(m, 500, kQ);
  CHECK(ps.mean == Catch::Approx(1.0).epsilon(1e-12));
  CHECK(ps.variance == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("photon statistics: displaced state moments") {
  // superradiant with negligible nbar: mean = variance = N x^2 (Poisson-like)
  const ModelParams cold{0.1, 1.0, 1.2, 1.5, 200.0};
  const PhotonStats a = photon_stats(cold, 100, kQ);
  const Observables obs = observables(cold, kQ);
  REQUIRE(obs.phase == Phase::Superradiant);
  CHECK(a.mean == Catch::Approx(100.0 * obs.x_sq).epsilon(1e-10));
  CHECK(a.variance == Catch::Approx(a.mean).epsilon(1e-10));

  // superradiant with nbar = 1: sigma^2 = 3 N x^2 + 2
  const double omega = 1.5;
  const double beta = std::log(2.0) / omega;
  const ModelParams warm{0.0, 0.0, 2.5, omega, beta};
  const PhotonStats b = photon_stats(warm, 64, kQ);
  const double nx2 = b.mean - 1.0;
  CHECK(nx2 > 0.0);
  CHECK(b.variance == Catch::Approx(3.0 * nx2 + 2.0).epsilon(1e-10));
}

TEST_CASE("tanh order parameter model") {
  CHECK(tanh_order_parameter(0.5, 0.5, 100, 1.0) == 0.0);
  CHECK(tanh_order_parameter(0.4, 0.5, 100, 1.0) == 0.0);  // clamped on the normal side
  const double n = 1000.0, gamma = 1.0;
  CHECK(tanh_order_parameter(0.5 + 5.0 / n, 0.5, n, gamma) ==
        Catch::Approx(n * std::tanh(5.0)).epsilon(1e-12));
  CHECK_THROWS_AS(tanh_order_parameter(0.5, 0.5, 0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(tanh_order_parameter(0.5, 0.5, 10, 0.0), std::invalid_argument);
}

TEST_CASE("tanh transition width scales as N^-gamma") {
  auto width = [](double N, double gamma) {
    // h-interval where the value sits in [0.1 N, 0.9 N]: from inverting tanh
    const double lo = std::atanh(0.1), hi = std::atanh(0.9);
    return (hi - lo) / std::pow(N, gamma);
  };
  for (double gamma : {0.5, 1.0}) {
    for (double N : {100.0, 400.0}) {
      // measure the width from the model itself by scanning
      const double hc = 1.0;
      double h_lo = 0, h_hi = 0;
      const int steps = 200000;
      const double span = 5.0 / std::pow(N, gamma);
      for (int i = 0; i <= steps; ++i) {
        const double h = hc + span * i / steps;
        const double v = tanh_order_parameter(h, hc, N, gamma);
        if (h_lo == 0 && v >= 0.1 * N) h_lo = h;
        if (h_hi == 0 && v >= 0.9 * N) {
          h_hi = h;
          break;
        }
      }
      CHECK(h_hi - h_lo == Catch::Approx(width(N, gamma)).epsilon(1e-3));
    }
    const double r = width(100.0, gamma) / width(400.0, gamma);
    CHECK(r == Catch::Approx(std::pow(4.0, gamma)).epsilon(1e-2));
  }
}

TEST_CASE("BLUE: closed-form single- and multi-point designs") {
  // single point (mu' = 2, sigma2 = 4): weight 1/2, variance 1
  const EstimatorDesign one = blue_estimator({0.0}, {5.0}, {2.0}, {4.0}, 1.0);
  CHECK(one.weights[0] == Catch::Approx(0.5).epsilon(1e-14));
  CHECK(one.predicted_variance == Catch::Approx(1.0).epsilon(1e-14));

  // M identical points: the 1/M averaging law
  const int M = 16;
  const EstimatorDesign many =
      blue_estimator(std::vector<double>(M, 0.0), std::vector<double>(M, 5.0),
                     std::vector<double>(M, 2.0), std::vector<double>(M, 4.0), 1.0);
  CHECK(many.predicted_variance == Catch::Approx(4.0 / (M * 4.0)).epsilon(1e-14));

  // unbiasedness and collinearity invariants
  double dot = 0.0;
  for (int i = 0; i < M; ++i) dot += many.weights[i] * many.mu_prime[i];
  CHECK(dot == Catch::Approx(1.0).margin(1e-10));

  CHECK_THROWS_AS(blue_estimator({0.0, 1.0}, {1.0, 1.0}, {0.0, 0.0}, {1.0, 1.0}, 1.0),
                  DegenerateDesignError);
  CHECK_THROWS_AS(blue_estimator({}, {}, {}, {}, 1.0), std::invalid_argument);
}

TEST_CASE("BLUE: weights proportional to mu'/sigma2") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  std::vector<double> grid, mu, mup, s2;
  for (int i = 0; i < 40; ++i) {
    grid.push_back(i);
    mu.push_back(u(rng));
    mup.push_back(u(rng) - 1.2);
    s2.push_back(u(rng));
  }
  const EstimatorDesign d = blue_estimator(grid, mu, mup, s2, 2.0);
  // correlation between weights and mu'/sigma2 is exactly 1
  double num = 0, wa = 0, vb = 0;
  for (std::size_t i = 0; i < d.weights.size(); ++i) {
    const double ref = d.mu_prime[i] / d.sigma2[i];
    num += d.weights[i] * ref;
    wa += d.weights[i] * d.weights[i];
    vb += ref * ref;
  }
  CHECK(num / std::sqrt(wa * vb) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("BLUE: Monte Carlo calibration and optimality") {
  const double b0 = 1.0 / 0.77;
  const TemperatureEstimator est =
      temperature_estimator(0.301, b0, 1000.0, 1.0, MetrologyGridSpec{}, kQ);
  const EstimatorDesign& d = est.design;

  const double dbeta_true = 1e-4;
  const MonteCarloResult mc = simulate_estimator(d, dbeta_true, 100000, 20240817);
  // unbiased within 3 standard errors
  const double se = std::sqrt(d.predicted_variance / 100000.0);
  CHECK(std::abs(mc.mean_estimate - dbeta_true) < 3.0 * se);
  // calibrated within 5%
  CHECK(mc.sample_variance == Catch::Approx(d.predicted_variance).epsilon(0.05));

  // 50 random constraint-preserving perturbations never beat the BLUE variance
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n = d.weights.size();
  double mupsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) mupsq += d.mu_prime[i] * d.mu_prime[i];
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> eta(n);
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      eta[i] = gauss(rng) * d.weights[i] == 0.0 ? gauss(rng) * 1e-6 : gauss(rng) * std::abs(d.weights[i]);
      dot += eta[i] * d.mu_prime[i];
    }
    double vperturbed = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = d.weights[i] + eta[i] - dot * d.mu_prime[i] / mupsq;
      vperturbed += w * w * d.sigma2[i];
    }
    CHECK(vperturbed >= d.predicted_variance - 1e-18);
  }
}

TEST_CASE("temperature estimator: out-of-region inputs are rejected") {
  CHECK_THROWS_AS(temperature_estimator_variance(0.25, 10.0, 1000.0, 1.0, {}, kQ),
                  OutOfRegionError);  // second-order region
  CHECK_THROWS_AS(temperature_estimator_variance(0.40, 10.0, 1000.0, 1.0, {}, kQ),
                  OutOfRegionError);  // no transition at all
}

TEST_CASE("sensitivity scan: Heisenberg-limit exponents") {
  const double b0 = 1.0 / 0.77;
  const std::vector<double> Ns{1e2, 1e3, 1e4, 1e5};
  const ScalingFit fit1 = sensitivity_scan(0.301, b0, Ns, 1.0, MetrologyGridSpec{}, kQ);
  CHECK(fit1.fitted_exponent == Catch::Approx(-2.0).margin(0.1));
  for (std::size_t i = 1; i < fit1.variances.size(); ++i) {
    CHECK(fit1.variances[i] > 0.0);
    CHECK(fit1.variances[i] < fit1.variances[i - 1]);
  }
  const ScalingFit fit05 = sensitivity_scan(0.301, b0, Ns, 0.5, MetrologyGridSpec{}, kQ);
  CHECK(fit05.fitted_exponent == Catch::Approx(-1.5).margin(0.1));

  // doubling the grid density barely moves the exponent
  MetrologyGridSpec dense;
  dense.points = 400;
  const ScalingFit fit_dense = sensitivity_scan(0.301, b0, Ns, 1.0, dense, kQ);
  CHECK(std::abs(fit_dense.fitted_exponent - fit1.fitted_exponent) < 0.02);

  CHECK_THROWS_AS(sensitivity_scan(0.301, b0, {100.0, 200.0}, 1.0, {}, kQ),
                  std::invalid_argument);
  CHECK_THROWS_AS(sensitivity_scan(0.301, b0, {100.0, 100.0, 200.0}, 1.0, {}, kQ),
                  std::invalid_argument);
}

TEST_CASE("photon moments are continuous in h under the tanh model") {
  const double hc = 0.4, nbar = 1.0;
  for (double N : {100.0, 1000.0}) {
    double prev_mu = -1.0;
    bool continuous = true;
    const double step = 1e-3 / N;
    for (double h = hc - 50 * step; h <= hc + 50 * step; h += step) {
      const double nx2 = tanh_order_parameter(h, hc, N, 1.0);
      const double mu = nx2 + nbar;
      if (prev_mu >= 0.0 && std::abs(mu - prev_mu) > 2.0 * N * step * N + 1e-9)
        continuous = false;
      prev_mu = mu;
    }
    CHECK(continuous);
  }
}

TEST_CASE("one-percent temperature shifts move the critical field by ~35%") {
  const double b0 = 1.0 / 0.77;
  const double hc0 = classify(b0, 0.301, kQ).h_crit;
  const double hc_warm = classify(b0 / 1.01, 0.301, kQ).h_crit;   // T 1% higher
  const double hc_cold = classify(b0 / 0.99, 0.301, kQ).h_crit;   // T 1% lower
  const double up = (hc_warm - hc0) / hc0;
  const double dn = (hc_cold - hc0) / hc0;
  CHECK(std::abs(up) == Catch::Approx(0.35).margin(0.05));
  CHECK(std::abs(dn) == Catch::Approx(0.35).margin(0.05));
  CHECK(up * dn < 0.0);  // shifts in opposite directions
}
