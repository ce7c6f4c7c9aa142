// Batch front end: every computation in the library exposed as a subcommand
// that writes plot-ready CSV/JSON datasets plus a manifest.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dicke_ising/exact_diag.hpp"
#include "dicke_ising/io.hpp"
#include "dicke_ising/landau.hpp"
#include "dicke_ising/mean_field.hpp"
#include "dicke_ising/metrology.hpp"
#include "dicke_ising/phase_diagram.hpp"
#include "dicke_ising/simplex_sweep.hpp"

namespace di = dicke_ising;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitVerifyFailed = 4;

struct GlobalOpts {
  std::string format = "csv";
  std::string out = "out";
  unsigned workers = di::default_workers();
  std::uint64_t seed = 1;
  int quad_points = 64;
  double quad_tol = 1e-10;

  di::QuadratureConfig quadrature() const { return {quad_points, quad_tol, 18}; }
};

void add_global_options(CLI::App* sub, GlobalOpts& g) {
  sub->add_option("--format", g.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--out", g.out, "output directory")->capture_default_str();
  sub->add_option("--workers", g.workers, "worker threads for sweeps")->capture_default_str();
  sub->add_option("--seed", g.seed, "random seed for Monte Carlo checks")->capture_default_str();
  sub->add_option("--quad-points", g.quad_points, "base quadrature nodes")->capture_default_str();
  sub->add_option("--quad-tol", g.quad_tol, "quadrature refinement tolerance")
      ->capture_default_str();
}

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Validator {
 public:
  void require(bool ok, const std::string& message) {
    if (!ok) problems_.push_back(message);
  }
  // reports every violation at once
  void finish() const {
    if (problems_.empty()) return;
    for (const auto& p : problems_) std::cerr << "error: " << p << "\n";
    throw CLI::RuntimeError(kExitInvalidInput);
  }

 private:
  std::vector<std::string> problems_;
};

json manifest_skeleton(const std::string& subcommand, const GlobalOpts& g) {
  json m;
  m["tool"] = di::kToolName;
  m["version"] = di::kToolVersion;
  m["subcommand"] = subcommand;
  m["format"] = g.format;
  m["workers"] = g.workers;
  m["seed"] = g.seed;
  m["quad_points"] = g.quad_points;
  m["quad_tol"] = g.quad_tol;
  m["started_at"] = now_utc();
  return m;
}

void finalize_manifest(json& m, const GlobalOpts& g,
                       const std::chrono::steady_clock::time_point& t0,
                       const std::vector<fs::path>& files) {
  m["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json names = json::array();
  for (const auto& f : files) names.push_back(f.filename().string());
  m["outputs"] = names;
  di::write_manifest(g.out, m);
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::invalid_argument(what + ": cannot parse '" + item + "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------- observables

int cmd_observables(const GlobalOpts& g, double total, double omega, double beta,
                    int resolution) {
  Validator v;
  v.require(total > 0.0, "observables: --total must be > 0");
  v.require(omega > 0.0, "observables: --omega must be > 0");
  v.require(beta > 0.0, "observables: --beta must be > 0");
  v.require(resolution >= 2, "observables: --resolution must be >= 2");
  v.require(g.quad_points >= 16 && g.quad_points % 2 == 0,
            "observables: --quad-points must be even and >= 16");
  v.require(g.quad_tol > 0.0, "observables: --quad-tol must be > 0");
  v.finish();

  const auto t0 = std::chrono::steady_clock::now();
  json manifest = manifest_skeleton("observables", g);
  manifest["params"] = {{"total", total}, {"omega", omega}, {"beta", beta},
                        {"resolution", resolution}};

  const auto rows = di::simplex_sweep(total, omega, beta, resolution, g.quadrature(), g.workers);
  di::Table table;
  table.header = {"i", "j", "k", "h", "J", "g", "bary_h", "bary_J", "bary_g",
                  "x_sq", "s_x", "m_z", "chi", "chi_boundary_adjacent", "h_eff",
                  "superradiant", "on_dicke_curve", "on_heff_curve", "ok", "error"};
  const double R = resolution;
  for (const auto& r : rows) {
    table.rows.push_back({static_cast<long long>(r.i), static_cast<long long>(r.j),
                          static_cast<long long>(r.k), r.h, r.J, r.g, r.i / R, r.j / R, r.k / R,
                          r.obs.x_sq, r.obs.s_x, r.obs.m_z, r.obs.chi,
                          r.obs.chi_boundary_adjacent, r.obs.h_eff,
                          r.obs.phase == di::Phase::Superradiant, r.on_dicke_curve,
                          r.on_heff_curve, r.ok, r.error});
  }
  const auto path = di::write_table(g.out, "observables", g.format, table);
  finalize_manifest(manifest, g, t0, {path});
  return kExitOk;
}

// ---------------------------------------------------------------- free-energy

int cmd_free_energy(const GlobalOpts& g, const std::string& pairs_text, double heff_max,
                    int points) {
  std::vector<std::pair<double, double>> pairs;  // (beta_t, omega_t)
  Validator v;
  std::stringstream ss(pairs_text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      v.require(false, "free-energy: pair '" + item + "' is not beta:omega");
      continue;
    }
    try {
      pairs.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    } catch (const std::exception&) {
      v.require(false, "free-energy: cannot parse pair '" + item + "'");
    }
  }
  for (const auto& [bt, wt] : pairs) {
    v.require(bt > 0.0, "free-energy: beta_t must be > 0");
    v.require(wt > 0.0, "free-energy: omega_t must be > 0");
  }
  v.require(heff_max > 0.0, "free-energy: --heff-max must be > 0");
  v.require(points >= 2, "free-energy: --points must be >= 2");
  v.finish();

  const auto t0 = std::chrono::steady_clock::now();
  json manifest = manifest_skeleton("free-energy", g);
  manifest["params"] = {{"pairs", pairs_text}, {"heff_max", heff_max}, {"points", points}};

  const auto q = g.quadrature();
  di::Table table;
  table.header = {"beta_t", "omega_t", "h_eff_t", "delta_f"};
  for (const auto& [bt, wt] : pairs) {
    const double f0 = di::free_energy_density({bt, 0.0}, q);
    for (int i = 0; i < points; ++i) {
      const double u = heff_max * i / (points - 1);
      const double f = di::free_energy_density({bt, u}, q) + wt * u * u;
      table.rows.push_back({bt, wt, u, f - f0});
    }
  }
  const auto path = di::write_table(g.out, "free_energy_curves", g.format, table);
  finalize_manifest(manifest, g, t0, {path});
  return kExitOk;
}

// --------------------------------------------------------------- phase-diagram

int cmd_phase_diagram(const GlobalOpts& g, const std::string& omega_text, double inv_beta_min,
                      double inv_beta_max, int inv_beta_steps) {
  Validator v;
  std::vector<double> omegas;
  try {
    omegas = parse_double_list(omega_text, "phase-diagram: --omega-list");
  } catch (const std::exception& e) {
    v.require(false, e.what());
  }
  for (double w : omegas)
    v.require(w > 0.0 && std::isfinite(w), "phase-diagram: omega_t values must be > 0");
  v.require(inv_beta_min > 0.0, "phase-diagram: --inv-beta-min must be > 0");
  v.require(inv_beta_max > inv_beta_min, "phase-diagram: --inv-beta-max must exceed the minimum");
  v.require(inv_beta_steps >= 2, "phase-diagram: --inv-beta-steps must be >= 2");
  v.finish();

  const auto t0 = std::chrono::steady_clock::now();
  json manifest = manifest_skeleton("phase-diagram", g);
  manifest["params"] = {{"omega_list", omega_text},
                        {"inv_beta_min", inv_beta_min},
                        {"inv_beta_max", inv_beta_max},
                        {"inv_beta_steps", inv_beta_steps}};

  std::vector<double> beta_grid;
  for (int i = 0; i < inv_beta_steps; ++i) {
    const double inv = inv_beta_min + (inv_beta_max - inv_beta_min) * i / (inv_beta_steps - 1);
    beta_grid.push_back(1.0 / inv);
  }
  std::sort(beta_grid.begin(), beta_grid.end());

  const di::PhaseDiagram diagram =
      di::trace_diagram(omegas, beta_grid, g.quadrature(), g.workers);

  auto boundary_table = [](const std::vector<di::BoundaryPoint>& pts) {
    di::Table t;
    t.header = {"omega_t", "beta_t", "inv_beta_t", "h_t_crit", "order", "jump_x_t_sq",
                "residual"};
    for (const auto& p : pts) {
      t.rows.push_back({p.omega_t, p.beta_t, 1.0 / p.beta_t, p.h_t_crit,
                        std::string(p.order == di::TransitionOrder::First ? "first" : "second"),
                        p.jump_x_t_sq, p.residual});
    }
    return t;
  };
  std::vector<di::BoundaryPoint> second, first;
  for (const auto& p : diagram.boundaries)
    (p.order == di::TransitionOrder::Second ? second : first).push_back(p);

  std::vector<fs::path> files;
  files.push_back(di::write_table(g.out, "second_order", g.format, boundary_table(second)));
  files.push_back(di::write_table(g.out, "first_order", g.format, boundary_table(first)));
  di::Table locus;
  locus.header = {"beta_t", "inv_beta_t", "h_t"};
  for (const auto& [bt, ht] : diagram.i4_zero) locus.rows.push_back({bt, 1.0 / bt, ht});
  files.push_back(di::write_table(g.out, "i4_zero", g.format, locus));
  finalize_manifest(manifest, g, t0, files);
  return kExitOk;
}

// ------------------------------------------------------------------ metrology

int cmd_metrology(const GlobalOpts& g, double omega_t, double inv_beta0, double gamma,
                  const std::string& n_text, double nbar, int grid_points, double width_factor,
                  long mc_trials, double delta_beta) {
  Validator v;
  std::vector<double> Ns;
  try {
    Ns = parse_double_list(n_text, "metrology: --N");
  } catch (const std::exception& e) {
    v.require(false, e.what());
  }
  v.require(!Ns.empty(), "metrology: --N must list at least one particle number");
  for (double n : Ns) v.require(n >= 1.0, "metrology: N values must be >= 1");
  for (std::size_t i = 1; i < Ns.size(); ++i)
    v.require(Ns[i] > Ns[i - 1], "metrology: --N must be strictly increasing");
  v.require(omega_t > 0.0, "metrology: --omega-t must be > 0");
  v.require(inv_beta0 > 0.0, "metrology: --inv-beta0 must be > 0");
  v.require(gamma > 0.0, "metrology: --gamma must be > 0");
  v.require(nbar >= 0.0, "metrology: --nbar must be >= 0");
  v.require(grid_points >= 2, "metrology: --grid-points must be >= 2");
  v.require(width_factor > 0.0, "metrology: --width-factor must be > 0");
  v.require(mc_trials >= 0, "metrology: --mc-trials must be >= 0");
  v.finish();

  const auto t0 = std::chrono::steady_clock::now();
  json manifest = manifest_skeleton("metrology", g);
  manifest["params"] = {{"omega_t", omega_t},
                        {"inv_beta0", inv_beta0},
                        {"gamma", gamma},
                        {"N", n_text},
                        {"nbar", nbar},
                        {"grid_points", grid_points},
                        {"width_factor", width_factor},
                        {"mc_trials", mc_trials},
                        {"delta_beta", delta_beta}};

  const double beta0 = 1.0 / inv_beta0;
  const auto q = g.quadrature();
  di::MetrologyGridSpec spec;
  spec.points = grid_points;
  spec.width_factor = width_factor;
  spec.nbar = nbar;

  json report;
  report["omega_t"] = omega_t;
  report["beta0_t"] = beta0;

  // critical-field sensitivity at the operating point: +-1% temperature
  const di::Classification cls = di::classify(beta0, omega_t, q);
  if (cls.kind != di::ClassifyKind::First)
    throw di::OutOfRegionError("metrology: operating point is not on a first-order line");
  const double hc0 = cls.h_crit;
  const auto warm = di::classify(beta0 / 1.01, omega_t, q);
  const auto cold = di::classify(beta0 / 0.99, omega_t, q);
  report["h_c"] = hc0;
  if (warm.kind == di::ClassifyKind::First)
    report["h_c_shift_warm_1pct"] = (warm.h_crit - hc0) / hc0;
  if (cold.kind == di::ClassifyKind::First)
    report["h_c_shift_cold_1pct"] = (cold.h_crit - hc0) / hc0;

  di::Table designs;
  designs.header = {"N", "h_t", "mu", "sigma2", "mu_prime", "weight"};
  di::Table scaling;
  scaling.header = {"N", "variance", "fitted_exponent"};
  double hc_prime = 0.0;
  double fitted_exponent = std::numeric_limits<double>::quiet_NaN();
  if (Ns.size() >= 3)
    fitted_exponent =
        di::sensitivity_scan(omega_t, beta0, Ns, gamma, spec, q).fitted_exponent;
  for (double N : Ns) {
    const di::TemperatureEstimator est =
        di::temperature_estimator(omega_t, beta0, N, gamma, spec, q);
    hc_prime = est.h_c_prime;
    scaling.rows.push_back({N, est.variance, fitted_exponent});
    for (std::size_t i = 0; i < est.design.grid.size(); ++i) {
      designs.rows.push_back({N, est.design.grid[i], est.design.mu[i], est.design.sigma2[i],
                              est.design.mu_prime[i], est.design.weights[i]});
    }
    if (mc_trials > 0 && N == Ns.back()) {
      const di::MonteCarloResult mc =
          di::simulate_estimator(est.design, delta_beta, mc_trials, g.seed);
      report["mc"] = {{"N", N},
                      {"trials", mc_trials},
                      {"true_delta_beta", delta_beta},
                      {"mean_estimate", mc.mean_estimate},
                      {"sample_variance", mc.sample_variance},
                      {"predicted_variance", est.design.predicted_variance}};
    }
  }
  report["h_c_prime"] = hc_prime;
  if (Ns.size() >= 3) {
    report["fitted_exponent"] = fitted_exponent;
    report["gamma"] = gamma;
    report["expected_exponent"] = -(1.0 + gamma);
  }

  std::vector<fs::path> files;
  files.push_back(di::write_table(g.out, "designs", g.format, designs));
  files.push_back(di::write_table(g.out, "scaling", g.format, scaling));
  fs::create_directories(g.out);
  {
    std::ofstream out(fs::path(g.out) / "report.json");
    out << report.dump(2) << "\n";
    files.push_back(fs::path(g.out) / "report.json");
  }
  finalize_manifest(manifest, g, t0, files);
  return kExitOk;
}

// --------------------------------------------------------------------- verify

struct Check {
  std::string name;
  double value;
  double threshold;
  bool pass;
};

int cmd_verify(const GlobalOpts& g, int max_n, long mc_trials, double tol_scale) {
  Validator v;
  v.require(max_n >= 6 && max_n <= 12, "verify: --max-n must be in [6, 12]");
  v.require(mc_trials >= 100, "verify: --mc-trials must be >= 100");
  v.require(tol_scale >= 0.0, "verify: --tol-scale must be >= 0");
  v.finish();

  const auto t0 = std::chrono::steady_clock::now();
  json manifest = manifest_skeleton("verify", g);
  manifest["params"] = {{"max_n", max_n}, {"mc_trials", mc_trials}, {"tol_scale", tol_scale}};

  const auto q = g.quadrature();
  std::vector<Check> checks;
  auto add = [&](const std::string& name, double value, double threshold) {
    const double limit = threshold * tol_scale;
    checks.push_back({name, value, limit, value <= limit});
  };

  // finite chain sum vs an inline hand sum
  {
    double hand = 0.0;
    for (int n = 0; n < 8; ++n) {
      const double k = 2.0 * M_PI * n / 8.0;
      hand += std::log(2.0 * std::cosh(2.0 * std::sqrt(2.0 - 2.0 * std::cos(k))));
    }
    hand /= -(8.0 * 2.0);
    add("ising_finite_hand_sum", std::abs(di::free_energy_density_finite({2.0, 1.0}, 8) - hand),
        1e-12);
  }
  // dense two-site free energy vs the closed form
  {
    const double hand = -std::log(2.0 * std::exp(4.0) + 2.0 * std::exp(-4.0)) / 4.0;
    add("ising_dense_two_site", std::abs(di::ising_dense_free_energy(2, 0.0, 2.0) - hand), 1e-12);
  }
  // dense free energy converges to the thermodynamic-limit integral
  {
    double worst_final = 0.0;
    bool monotone = true;
    for (const auto& [ht, bt] : std::vector<std::pair<double, double>>{{0.5, 2.0}, {2.0, 1.0}}) {
      const double f_inf = di::free_energy_density({bt, ht}, q);
      double prev = 1e300, final_dev = 0.0;
      for (int N = 6; N <= max_n; N += 2) {
        const double dev = std::abs(di::ising_dense_free_energy(N, ht, bt) - f_inf);
        if (dev >= prev) monotone = false;
        prev = dev;
        final_dev = dev;
      }
      worst_final = std::max(worst_final, final_dev);
    }
    add("dense_vs_integral_monotone", monotone ? 0.0 : 1.0, 0.5);
    add("dense_vs_integral_final", worst_final, max_n >= 12 ? 0.02 : 0.05);
  }
  // magnetization vs finite differences of the free energy
  {
    double worst = 0.0;
    for (int a = 0; a < 6; ++a) {
      for (int b = 0; b < 6; ++b) {
        const double ht = 0.2 + 0.5 * a, bt = 0.5 + 1.2 * b;
        const double d = 1e-4;
        const double fd = (di::free_energy_density({bt, ht + d}, q) -
                           di::free_energy_density({bt, ht - d}, q)) /
                          (2.0 * d);
        worst = std::max(worst, std::abs(di::magnetization({bt, ht}, q) + fd));
      }
    }
    add("magnetization_vs_fd", worst, 1e-6);
  }
  // Landau coefficients vs Richardson differences in u = x_t^2
  {
    const double bt = 3.0, ht = 0.8;
    auto term = [&](double u) {
      return di::free_energy_density({bt, std::sqrt(ht * ht + u)}, q);
    };
    const double base = 1e-3 * ht * ht;
    auto d1 = [&](double s) { return (term(s) - term(-s)) / (2.0 * s); };
    auto d2 = [&](double s) { return (term(s) - 2.0 * term(0.0) + term(-s)) / (s * s); };
    const double i2_fd = (4.0 * d1(base / 2) - d1(base)) / 3.0;
    const double i4_fd = 0.5 * (4.0 * d2(base / 2) - d2(base)) / 3.0;
    const di::LandauCoeffs c = di::landau_coefficients(bt, ht, q);
    add("landau_i2_vs_fd", std::abs(c.I2 - i2_fd), 1e-7);
    add("landau_i4_vs_fd", std::abs(c.I4 - i4_fd), 1e-7);
  }
  // global-minimum spot check and stationarity
  {
    std::mt19937_64 rng(g.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (const di::ReducedParams p :
         {di::ReducedParams{0.3, 10.0, 0.25}, di::ReducedParams{0.1, 1.0 / 0.77, 0.301},
          di::ReducedParams{1.5, 2.0, 0.3}}) {
      const di::MeanFieldSolution sol = di::minimize(p, q);
      for (int i = 0; i < 50; ++i) {
        const double u = p.h_t + u01(rng) * (4.0 + 2.0 * p.h_t);
        worst = std::max(worst, sol.free_energy - di::reduced_free_energy(u, p, q));
      }
    }
    add("minimize_global_spot", worst, 1e-10);

    const di::ReducedParams p{0.3, 10.0, 0.25};
    const di::MeanFieldSolution sol = di::minimize(p, q);
    const double d = 1e-5;
    const double deriv = (di::reduced_free_energy(sol.h_eff_t + d, p, q) -
                          di::reduced_free_energy(sol.h_eff_t - d, p, q)) /
                         (2.0 * d);
    add("minimize_stationarity", std::abs(deriv), 1e-6);
  }
  // coupled dense model: decoupling, parity, truncation
  json dense_runs = json::array();
  {
    const di::ModelParams m0{0.7, 1.0, 0.0, 1.3, 1.0};
    const di::DickeGroundState gs = di::dicke_ising_dense_ground_state(4, 4, m0);
    const di::DenseSpectrum spin = di::ising_dense_spectrum(4, 0.7);
    const double e_spin = spin.eigenvalues.front();
    add("dicke_dense_g0_photons", gs.mean_photon_number, 1e-10);
    add("dicke_dense_g0_energy", std::abs(gs.energy - e_spin), 1e-8);
    dense_runs.push_back({{"kind", "ising"},
                          {"N", 4},
                          {"h_t", 0.7},
                          {"e_min", spin.eigenvalues.front()},
                          {"e_max", spin.eigenvalues.back()},
                          {"dimension", spin.dimension}});
    dense_runs.push_back({{"kind", "dicke_ising_ground_state"},
                          {"N", 4},
                          {"params", {{"h", m0.h}, {"J", m0.J}, {"g", m0.g},
                                      {"omega", m0.omega}, {"beta", m0.beta}}},
                          {"energy", gs.energy},
                          {"mean_photon_number", gs.mean_photon_number},
                          {"mean_sx", gs.mean_sx},
                          {"sx_rms", gs.sx_rms},
                          {"n_max_used", gs.n_max_used},
                          {"tail_weight", gs.tail_weight}});

    const di::ModelParams m1{0.7, 1.0, 0.9, 1.3, 1.0};
    const Eigen::MatrixXd H = di::build_dicke_dense(4, 6, m1);
    const Eigen::VectorXd p = di::joint_parity_diagonal(4, 6);
    const Eigen::MatrixXd C = H * p.asDiagonal() - p.asDiagonal() * H;
    add("dicke_dense_parity_commutator", C.cwiseAbs().maxCoeff(), 1e-10);

    const di::ModelParams m2{0.3, 1.0, 1.2, 1.5, 50.0};
    const di::DickeGroundState a = di::dicke_ising_dense_ground_state(4, 8, m2);
    const di::DickeGroundState b = di::dicke_ising_dense_ground_state(4, a.n_max_used + 4, m2);
    add("dicke_dense_nmax_tail", std::abs(a.mean_photon_number - b.mean_photon_number), 1e-6);
    dense_runs.push_back({{"kind", "dicke_ising_ground_state"},
                          {"N", 4},
                          {"params", {{"h", m2.h}, {"J", m2.J}, {"g", m2.g},
                                      {"omega", m2.omega}, {"beta", m2.beta}}},
                          {"energy", a.energy},
                          {"mean_photon_number", a.mean_photon_number},
                          {"mean_sx", a.mean_sx},
                          {"sx_rms", a.sx_rms},
                          {"n_max_used", a.n_max_used},
                          {"tail_weight", a.tail_weight}});
  }
  manifest["dense_runs"] = dense_runs;
  // estimator: Monte Carlo calibration and optimality
  {
    const double beta0 = 1.0 / 0.77;
    const di::TemperatureEstimator est =
        di::temperature_estimator(0.301, beta0, 1000.0, 1.0, {}, q);
    const di::MonteCarloResult mc = di::simulate_estimator(est.design, 1e-4, mc_trials, g.seed);
    add("blue_mc_calibration",
        std::abs(mc.sample_variance / est.design.predicted_variance - 1.0), 0.05);

    std::mt19937_64 rng(g.seed + 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t n = est.design.weights.size();
    double mupsq = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      mupsq += est.design.mu_prime[i] * est.design.mu_prime[i];
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> eta(n);
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        eta[i] = gauss(rng) * (std::abs(est.design.weights[i]) + 1e-9);
        dot += eta[i] * est.design.mu_prime[i];
      }
      double var = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double w = est.design.weights[i] + eta[i] - dot * est.design.mu_prime[i] / mupsq;
        var += w * w * est.design.sigma2[i];
      }
      worst = std::max(worst, est.design.predicted_variance - var);
    }
    add("blue_optimality_margin", worst, 1e-15);
  }

  bool all_pass = true;
  std::printf("%-32s %14s %14s  %s\n", "check", "value", "threshold", "status");
  json rows = json::array();
  for (const auto& c : checks) {
    all_pass = all_pass && c.pass;
    std::printf("%-32s %14.6e %14.6e  %s\n", c.name.c_str(), c.value, c.threshold,
                c.pass ? "PASS" : "FAIL");
    rows.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold},
                    {"pass", c.pass}});
  }
  manifest["checks"] = rows;
  manifest["all_pass"] = all_pass;
  finalize_manifest(manifest, g, t0, {});
  std::printf("%s\n", all_pass ? "verification passed" : "verification FAILED");
  return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field thermodynamics, phase diagram and metrology of the Dicke-Ising model"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file, merged under command-line flags");
  app.allow_config_extras(true);

  GlobalOpts g_obs, g_fe, g_pd, g_met, g_ver;

  auto* obs = app.add_subcommand("observables", "barycentric sweep of x^2, s_x, m_z and chi");
  double total = 1.0, omega = 1.0, beta = 100.0;
  int resolution = 60;
  obs->add_option("--total", total, "fixed sum h + J + g")->capture_default_str();
  obs->add_option("--omega", omega, "cavity frequency")->capture_default_str();
  obs->add_option("--beta", beta, "inverse temperature")->capture_default_str();
  obs->add_option("--resolution", resolution, "barycentric subdivisions")->capture_default_str();
  obs->configurable(true);
  add_global_options(obs, g_obs);

  auto* fe = app.add_subcommand("free-energy", "reduced free-energy curves over h_eff");
  std::string pairs = "1:0.25,10:0.25,10:0.315,10:0.33";
  double heff_max = 3.0;
  int fe_points = 301;
  fe->add_option("--pairs", pairs, "comma list of beta_t:omega_t pairs")->capture_default_str();
  fe->add_option("--heff-max", heff_max, "upper end of the h_eff_t range")->capture_default_str();
  fe->add_option("--points", fe_points, "samples per curve")->capture_default_str();
  fe->configurable(true);
  add_global_options(fe, g_fe);

  auto* pd =
      app.add_subcommand("phase-diagram", "first/second-order boundaries and the I4 = 0 locus");
  std::string omega_list = "0.1,0.2,0.25,0.301,0.32";
  double inv_beta_min = 0.05, inv_beta_max = 1.0;
  int inv_beta_steps = 96;
  pd->add_option("--omega-list", omega_list, "comma list of omega_t values")
      ->capture_default_str();
  pd->add_option("--inv-beta-min", inv_beta_min, "smallest 1/beta_t")->capture_default_str();
  pd->add_option("--inv-beta-max", inv_beta_max, "largest 1/beta_t")->capture_default_str();
  pd->add_option("--inv-beta-steps", inv_beta_steps, "grid points in 1/beta_t")
      ->capture_default_str();
  pd->configurable(true);
  add_global_options(pd, g_pd);

  auto* met =
      app.add_subcommand("metrology", "BLUE temperature estimator across the first-order line");
  double omega_t = 0.301, inv_beta0 = 0.77, gamma = 1.0, nbar = 1.0, width_factor = 10.0;
  double delta_beta = 1e-4;
  std::string n_list = "100,1000,10000,100000";
  int grid_points = 200;
  long mc_trials = 0;
  met->add_option("--omega-t", omega_t, "reduced mode frequency")->capture_default_str();
  met->add_option("--inv-beta0", inv_beta0, "reference 1/beta_t")->capture_default_str();
  met->add_option("--gamma", gamma, "finite-size width exponent")->capture_default_str();
  met->add_option("--N", n_list, "comma list of particle numbers")->capture_default_str();
  met->add_option("--nbar", nbar, "thermal photon occupation")->capture_default_str();
  met->add_option("--grid-points", grid_points, "scan points across the transition")
      ->capture_default_str();
  met->add_option("--width-factor", width_factor, "half-width in units of N^-gamma")
      ->capture_default_str();
  met->add_option("--mc-trials", mc_trials, "Monte Carlo trials at the largest N (0 = off)")
      ->capture_default_str();
  met->add_option("--delta-beta", delta_beta, "true beta_t deviation for the Monte Carlo run")
      ->capture_default_str();
  met->configurable(true);
  add_global_options(met, g_met);

  auto* ver = app.add_subcommand("verify", "finite-size oracles and invariant checks");
  int max_n = 10;
  long ver_trials = 20000;
  double tol_scale = 1.0;
  ver->add_option("--max-n", max_n, "largest dense chain length (<= 12)")->capture_default_str();
  ver->add_option("--mc-trials", ver_trials, "Monte Carlo trials")->capture_default_str();
  ver->add_option("--tol-scale", tol_scale, "multiplies every check threshold")
      ->capture_default_str();
  ver->configurable(true);
  add_global_options(ver, g_ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitInvalidInput;
  }

  try {
    if (obs->parsed()) return cmd_observables(g_obs, total, omega, beta, resolution);
    if (fe->parsed()) return cmd_free_energy(g_fe, pairs, heff_max, fe_points);
    if (pd->parsed())
      return cmd_phase_diagram(g_pd, omega_list, inv_beta_min, inv_beta_max, inv_beta_steps);
    if (met->parsed())
      return cmd_metrology(g_met, omega_t, inv_beta0, gamma, n_list, nbar, grid_points,
                           width_factor, mc_trials, delta_beta);
    if (ver->parsed()) return cmd_verify(g_ver, max_n, ver_trials, tol_scale);
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const di::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const di::TruncationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}
