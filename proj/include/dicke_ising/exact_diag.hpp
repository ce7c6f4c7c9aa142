#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dicke_ising/mean_field.hpp"

namespace dicke_ising {

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DenseSpectrum {
  std::vector<double> eigenvalues;  // ascending
  std::size_t dimension;
};

// Basis conventions for all dense builders: spin basis states are bitmasks
// with bit i = 0 meaning sigma_z = +1 on site i; composite indices are
// spin-major (spin slowest, boson fastest): idx = s * (n_max + 1) + n.
// sigma_y sigma_y flips both bits with amplitude +1 for antiparallel and -1
// for parallel pairs.

/// Dense H_Ising / J = -h_t Sum sigma_z - Sum_{i=1..N} sigma_y_i sigma_y_{i+1}
/// with sigma_{N+1} = sigma_1. The periodic sum at N = 2 visits the single
/// bond twice, matching the literal Hamiltonian sum.
inline Eigen::MatrixXd build_ising_dense(int N, double h_t) {
  if (N < 2) throw std::invalid_argument("build_ising_dense: N must be >= 2");
  const std::size_t dim = std::size_t{1} << N;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) {
    int mz = 0;
    for (int i = 0; i < N; ++i) mz += ((s >> i) & 1) ? -1 : 1;
    H(s, s) += -h_t * mz;
    for (int i = 0; i < N; ++i) {
      const int j = (i + 1) % N;
      const int bi = (s >> i) & 1, bj = (s >> j) & 1;
      const std::size_t sp = s ^ (std::size_t{1} << i) ^ (std::size_t{1} << j);
      H(sp, s) += bi != bj ? -1.0 : 1.0;
    }
  }
  return H;
}

inline DenseSpectrum ising_dense_spectrum(int N, double h_t) {
  if (N < 2) throw std::invalid_argument("ising_dense_spectrum: N must be >= 2");
  if (N > 12) throw ResourceError("ising_dense_spectrum: N > 12 exceeds the dense budget");
  const Eigen::MatrixXd H = build_ising_dense(N, h_t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("ising_dense_spectrum: eigensolver failed");
  const auto& ev = solver.eigenvalues();
  return {std::vector<double>(ev.data(), ev.data() + ev.size()), static_cast<std::size_t>(ev.size())};
}

/// f_N = -(1/(N beta_t)) log Sum_i exp(-beta_t E_i) from a spectrum in units of J.
inline double dense_free_energy(const DenseSpectrum& spec, int N, double beta_t) {
  const double e0 = spec.eigenvalues.front();
  double z = 0.0;
  for (double e : spec.eigenvalues) z += std::exp(-beta_t * (e - e0));
  return (e0 - std::log(z) / beta_t) / static_cast<double>(N);
}

inline double ising_dense_free_energy(int N, double h_t, double beta_t) {
  if (!(beta_t > 0.0)) throw std::invalid_argument("ising_dense_free_energy: beta_t must be > 0");
  return dense_free_energy(ising_dense_spectrum(N, h_t), N, beta_t);
}

/// Full H = H_Ising + omega a^dag a + (g/sqrt(N)) Sum sigma_x (a + a^dag),
/// boson space truncated at n_max. Energy units follow the inputs.
inline Eigen::MatrixXd build_dicke_dense(int N, int n_max, const ModelParams& m) {
  if (N < 2) throw std::invalid_argument("build_dicke_dense: N must be >= 2");
  if (n_max < 1) throw std::invalid_argument("build_dicke_dense: n_max must be >= 1");
  const std::size_t dim_s = std::size_t{1} << N;
  const std::size_t dim_b = static_cast<std::size_t>(n_max) + 1;
  const std::size_t dim = dim_s * dim_b;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  const double coupling = m.g / std::sqrt(static_cast<double>(N));
  for (std::size_t s = 0; s < dim_s; ++s) {
    int mz = 0;
    for (int i = 0; i < N; ++i) mz += ((s >> i) & 1) ? -1 : 1;
    for (std::size_t n = 0; n < dim_b; ++n)
      H(s * dim_b + n, s * dim_b + n) += -m.h * mz + m.omega * static_cast<double>(n);
    for (int i = 0; i < N; ++i) {
      const int j = (i + 1) % N;
      const int bi = (s >> i) & 1, bj = (s >> j) & 1;
      const std::size_t sp = s ^ (std::size_t{1} << i) ^ (std::size_t{1} << j);
      const double amp = bi != bj ? -m.J : m.J;
      for (std::size_t n = 0; n < dim_b; ++n) H(sp * dim_b + n, s * dim_b + n) += amp;
    }
    for (int i = 0; i < N; ++i) {
      const std::size_t sp = s ^ (std::size_t{1} << i);
      for (std::size_t n = 0; n < dim_b; ++n) {
        if (n + 1 < dim_b)
          H(sp * dim_b + n + 1, s * dim_b + n) += coupling * std::sqrt(static_cast<double>(n + 1));
        if (n > 0)
          H(sp * dim_b + n - 1, s * dim_b + n) += coupling * std::sqrt(static_cast<double>(n));
      }
    }
  }
  return H;
}

/// Diagonal of the joint parity (-1)^{a^dag a} * Prod_i sigma_z_i, which
/// commutes with the full Hamiltonian.
inline Eigen::VectorXd joint_parity_diagonal(int N, int n_max) {
  const std::size_t dim_s = std::size_t{1} << N;
  const std::size_t dim_b = static_cast<std::size_t>(n_max) + 1;
  Eigen::VectorXd p(dim_s * dim_b);
  for (std::size_t s = 0; s < dim_s; ++s) {
    double zp = 1.0;
    for (int i = 0; i < N; ++i) zp *= ((s >> i) & 1) ? -1.0 : 1.0;
    for (std::size_t n = 0; n < dim_b; ++n)
      p(s * dim_b + n) = zp * (n % 2 == 0 ? 1.0 : -1.0);
  }
  return p;
}

struct DickeGroundState {
  double energy;
  double mean_photon_number;  // <a^dag a>
  double mean_sx;             // <Sum sigma_x>/N; vanishes by parity at finite N
  double sx_rms;              // sqrt(<(Sum sigma_x / N)^2>), the symmetry-resolved mean field
  int n_max_used;
  double tail_weight;         // population of the highest boson level
};

namespace detail {

inline Eigen::VectorXd apply_sx_total(const Eigen::VectorXd& v, int N, int n_max) {
  const std::size_t dim_s = std::size_t{1} << N;
  const std::size_t dim_b = static_cast<std::size_t>(n_max) + 1;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  for (std::size_t s = 0; s < dim_s; ++s) {
    for (int i = 0; i < N; ++i) {
      const std::size_t sp = s ^ (std::size_t{1} << i);
      for (std::size_t n = 0; n < dim_b; ++n) out(sp * dim_b + n) += v(s * dim_b + n);
    }
  }
  return out;
}

// Ground-state vector by inverse iteration against a dense LU factorization,
// after an eigenvalues-only pass pinned E0.
inline Eigen::VectorXd ground_vector(const Eigen::MatrixXd& H, double e0) {
  const Eigen::Index dim = H.rows();
  const double shift = e0 - 1e-7 * (1.0 + std::abs(e0));
  Eigen::MatrixXd A = H;
  A.diagonal().array() -= shift;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  Eigen::VectorXd v(dim);
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  for (Eigen::Index i = 0; i < dim; ++i) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    v(i) = static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
  }
  v.normalize();
  for (int it = 0; it < 5; ++it) {
    v = lu.solve(v);
    v.normalize();
  }
  return v;
}

}  // namespace detail

/// Ground state of the truncated coupled model. The boson cutoff doubles
/// automatically until the top-level population drops below 1e-8; failing
/// that within the dense budget raises TruncationError.
inline DickeGroundState dicke_ising_dense_ground_state(int N, int n_max, const ModelParams& m) {
  m.validate();
  if (N < 2 || N > 8)
    throw ResourceError("dicke_ising_dense_ground_state: N must be in [2, 8]");
  if (n_max < 1) throw std::invalid_argument("dicke_ising_dense_ground_state: n_max must be >= 1");
  for (;;) {
    const std::size_t dim = (std::size_t{1} << N) * (static_cast<std::size_t>(n_max) + 1);
    if (dim > 9500)
      throw TruncationError("dicke_ising_dense_ground_state: boson tail not converged within the dense budget");
    const Eigen::MatrixXd H = build_dicke_dense(N, n_max, m);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("dicke_ising_dense_ground_state: eigensolver failed");
    const double e0 = solver.eigenvalues()(0);
    const Eigen::VectorXd v = detail::ground_vector(H, e0);

    const std::size_t dim_s = std::size_t{1} << N;
    const std::size_t dim_b = static_cast<std::size_t>(n_max) + 1;
    double photons = 0.0, tail = 0.0;
    for (std::size_t s = 0; s < dim_s; ++s) {
      for (std::size_t n = 0; n < dim_b; ++n) {
        const double w = v(s * dim_b + n) * v(s * dim_b + n);
        photons += w * static_cast<double>(n);
        if (n == dim_b - 1) tail += w;
      }
    }
    if (tail >= 1e-8) {
      n_max *= 2;
      continue;
    }
    const Eigen::VectorXd sxv = detail::apply_sx_total(v, N, n_max);
    const double mean_sx = v.dot(sxv) / N;
    const double sx_rms = sxv.norm() / N;
    return {e0, photons, mean_sx, sx_rms, n_max, tail};
  }
}

}  // namespace dicke_ising
