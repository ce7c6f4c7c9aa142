#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dicke_ising/mean_field.hpp"
#include "dicke_ising/parallel.hpp"

namespace dicke_ising {

/// One grid point of a barycentric sweep over {h + J + g = total, all >= 0}.
struct SweepRow {
  int i, j, k;  // barycentric integers, i + j + k = resolution
  double h, J, g;
  Observables obs;
  bool on_dicke_curve;  // adjacent to a sign change of the order parameter
  bool on_heff_curve;   // adjacent to a sign change of h_eff - J
  bool ok;
  std::string error;
};

/// Evaluates observables on the barycentric grid with i + j + k = resolution,
/// h = total*i/R etc. Per-point failures are recorded in the row and the
/// sweep continues. Rows are emitted in deterministic (i, j) lexicographic
/// order regardless of worker scheduling.
inline std::vector<SweepRow> simplex_sweep(double total, double omega, double beta,
                                           int resolution, const QuadratureConfig& q = {},
                                           unsigned workers = default_workers()) {
  if (!(total > 0.0)) throw std::invalid_argument("simplex_sweep: total must be > 0");
  if (!(omega > 0.0)) throw std::invalid_argument("simplex_sweep: omega must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("simplex_sweep: beta must be > 0");
  if (resolution < 2) throw std::invalid_argument("simplex_sweep: resolution must be >= 2");

  const int R = resolution;
  std::vector<SweepRow> rows;
  std::map<std::pair<int, int>, std::size_t> index;
  for (int i = 0; i <= R; ++i) {
    for (int j = 0; j + i <= R; ++j) {
      const int k = R - i - j;
      SweepRow row{};
      row.i = i;
      row.j = j;
      row.k = k;
      row.h = total * i / R;
      row.J = total * j / R;
      row.g = total * k / R;
      row.ok = false;
      index[{i, j}] = rows.size();
      rows.push_back(std::move(row));
    }
  }

  parallel_for(rows.size(), workers, [&](std::size_t n) {
    SweepRow& row = rows[n];
    try {
      row.obs = observables({row.h, row.J, row.g, omega, beta}, q);
      row.ok = true;
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
  });

  // curve-membership flags: a row is on a curve when its indicator differs
  // from any simplex neighbour's
  const double sr_eps = 1e-8 * total * total;
  auto sr_flag = [&](const SweepRow& r) { return r.obs.x_sq > sr_eps; };
  auto heff_flag = [&](const SweepRow& r) { return r.obs.h_eff >= r.J; };
  const int di[6] = {1, 1, -1, -1, 0, 0};
  const int dj[6] = {-1, 0, 1, 0, 1, -1};
  for (auto& row : rows) {
    if (!row.ok) continue;
    for (int d = 0; d < 6; ++d) {
      const int ni = row.i + di[d], nj = row.j + dj[d];
      if (ni < 0 || nj < 0 || ni + nj > R) continue;
      const auto it = index.find({ni, nj});
      if (it == index.end()) continue;
      const SweepRow& nb = rows[it->second];
      if (!nb.ok) continue;
      if (sr_flag(row) != sr_flag(nb)) row.on_dicke_curve = true;
      if (heff_flag(row) != heff_flag(nb)) row.on_heff_curve = true;
    }
  }
  return rows;
}

}  // namespace dicke_ising
