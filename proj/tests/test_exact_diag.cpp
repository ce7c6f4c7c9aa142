#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "dicke_ising/exact_diag.hpp"
#include "dicke_ising/ising.hpp"

using namespace dicke_ising;

namespace {
const QuadratureConfig kQ{64, 1e-11, 18};
}

TEST_CASE("dense Ising: two-site hand computation") {
  // periodic sum at N = 2 double-counts the single bond: H = -2 J sigma_y sigma_y,
  // eigenvalues {-2, -2, +2, +2} in units of J
  const DenseSpectrum spec = ising_dense_spectrum(2, 0.0);
  REQUIRE(spec.dimension == 4);
  CHECK(spec.eigenvalues[0] == Catch::Approx(-2.0).margin(1e-12));
  CHECK(spec.eigenvalues[1] == Catch::Approx(-2.0).margin(1e-12));
  CHECK(spec.eigenvalues[2] == Catch::Approx(2.0).margin(1e-12));
  CHECK(spec.eigenvalues[3] == Catch::Approx(2.0).margin(1e-12));
  const double bt = 2.0;
  const double hand = -std::log(2.0 * std::exp(2.0 * bt) + 2.0 * std::exp(-2.0 * bt)) / (2.0 * bt);
  CHECK(ising_dense_free_energy(2, 0.0, bt) == Catch::Approx(hand).epsilon(1e-12));
}

TEST_CASE("dense Ising: trace equals the eigenvalue sum") {
  const Eigen::MatrixXd H = build_ising_dense(6, 0.7);
  const DenseSpectrum spec = ising_dense_spectrum(6, 0.7);
  double sum = 0.0;
  for (double e : spec.eigenvalues) sum += e;
  CHECK(sum == Catch::Approx(H.trace()).margin(1e-8 * spec.dimension));
}

TEST_CASE("dense Ising: ground state at h = 0 is exactly two-fold degenerate") {
  for (int N : {4, 6, 8}) {
    const DenseSpectrum spec = ising_dense_spectrum(N, 0.0);
    CHECK(std::abs(spec.eigenvalues[0] - spec.eigenvalues[1]) < 1e-10);
    CHECK(spec.eigenvalues[2] - spec.eigenvalues[1] > 0.5);  // gap above the doublet
  }
}

TEST_CASE("dense Ising free energy approaches the thermodynamic limit") {
  // (h_t, bt) = (0.5, 2): deviation shrinking with N
  const double f_inf = free_energy_density({2.0, 0.5}, kQ);
  const double d6 = std::abs(ising_dense_free_energy(6, 0.5, 2.0) - f_inf);
  const double d8 = std::abs(ising_dense_free_energy(8, 0.5, 2.0) - f_inf);
  const double d10 = std::abs(ising_dense_free_energy(10, 0.5, 2.0) - f_inf);
  CHECK(d8 < d6);
  CHECK(d10 < d8);
  CHECK(d10 < 0.03);
}

TEST_CASE("dense Ising vs fermionized finite sum differ by the dropped boundary term") {
  // N = 10, h_t = 1, bt = 1: both finite-N routes agree to O(1/N)
  const double dense = ising_dense_free_energy(10, 1.0, 1.0);
  const double jw = free_energy_density_finite({1.0, 1.0}, 10);
  CHECK(std::abs(dense - jw) < 0.1 * std::abs(dense));
  CHECK(std::abs(dense - jw) > 1e-6);  // the truncation is real, not a no-op
}

TEST_CASE("dense Ising: resource bounds") {
  CHECK_THROWS_AS(ising_dense_spectrum(13, 1.0), ResourceError);
  CHECK_THROWS_AS(ising_dense_spectrum(1, 1.0), std::invalid_argument);
}

TEST_CASE("coupled dense model: g = 0 decouples into Ising x vacuum") {
  const ModelParams m{0.7, 1.0, 0.0, 1.3, 1.0};
  const DickeGroundState gs = dicke_ising_dense_ground_state(4, 4, m);
  const DenseSpectrum spin = ising_dense_spectrum(4, 0.7);
  CHECK(gs.mean_photon_number < 1e-10);
  CHECK(gs.energy == Catch::Approx(spin.eigenvalues[0]).margin(1e-8));
}

TEST_CASE("coupled dense model: joint parity commutes with H") {
  const ModelParams m{0.7, 1.0, 0.9, 1.3, 1.0};
  const Eigen::MatrixXd H = build_dicke_dense(4, 6, m);
  const Eigen::VectorXd p = joint_parity_diagonal(4, 6);
  const Eigen::MatrixXd C = H * p.asDiagonal() - p.asDiagonal() * H;
  CHECK(C.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("coupled dense model: boson truncation converges") {
  const ModelParams m{0.3, 1.0, 1.2, 1.5, 50.0};
  const DickeGroundState a = dicke_ising_dense_ground_state(4, 8, m);
  const DickeGroundState b = dicke_ising_dense_ground_state(4, a.n_max_used + 4, m);
  CHECK(a.tail_weight < 1e-8);
  CHECK(std::abs(a.mean_photon_number - b.mean_photon_number) < 1e-6);
}

TEST_CASE("coupled dense model: superradiant trend toward the mean field") {
  // deep superradiant parameters; mean-field order parameter as the N -> inf target
  const ModelParams m{0.3, 1.0, 1.2, 1.5, 50.0};
  const Observables mf = observables(m, kQ);
  REQUIRE(mf.phase == Phase::Superradiant);
  double prev = -1.0;
  double photon_frac8 = 0.0, sx_rms8 = 0.0;
  for (int N : {4, 6, 8}) {
    const DickeGroundState gs = dicke_ising_dense_ground_state(N, 12, m);
    const double frac = gs.mean_photon_number / N;
    CHECK(frac > prev);  // climbing toward the mean-field x^2
    prev = frac;
    CHECK(frac < mf.x_sq);
    if (N == 8) {
      photon_frac8 = frac;
      sx_rms8 = gs.sx_rms;
    }
    CHECK(std::abs(gs.mean_sx) < 1e-6);  // plain expectation vanishes by parity
  }
  // stationarity relation |s_x| = (omega/g) sqrt(<n>/N) at finite N, within 20%
  const double predicted = (m.omega / m.g) * std::sqrt(photon_frac8);
  CHECK(sx_rms8 == Catch::Approx(predicted).epsilon(0.20));
}
