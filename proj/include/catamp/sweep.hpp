#pragma once

#include <optional>
#include <string>
#include <vector>

#include "catamp/oat.hpp"

namespace catamp {

/// Grid over (N, chi, theta). Rows come back sorted by N, then chi, then theta.
struct SweepSpec {
  std::vector<int> n_atoms;
  std::vector<double> chi;
  std::vector<double> theta{0.0};
  PrepOrder order = PrepOrder::TwistThenRotate;
  double gamma = 1.0;
  /// Unset: evaluate at the variance peak t_opt. Set: evaluate every point at
  /// this fixed time instead (t_opt then reports t_end, never boundary-flagged).
  std::optional<double> t_end;
  int grid_points = 512;
};

struct SweepRow {
  int n_atoms = 0;
  double chi = 0.0;
  double theta = 0.0;
  double t_opt = 0.0;
  bool boundary = false;
  double peak_var = 0.0;
  double peak_var_normalized = 0.0;  // peak_var / (N^2/4)
  double survival = 0.0;
  double cat_fidelity = 0.0;
  std::optional<double> t_c;
  /// Empty on success; otherwise the row's numeric fields are meaningless.
  std::string error;
};

/// Evaluates one grid point (no error capture).
SweepRow evaluate_point(const SpinOperators& ops, const PrepSpec& prep, double gamma,
                        std::optional<double> t_end, int grid_points);

/// Parallel over grid points. Per-point failures land in SweepRow::error;
/// invalid SweepSpec throws.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers);

}  // namespace catamp
