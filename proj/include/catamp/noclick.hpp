#pragma once

#include <optional>
#include <vector>

#include "catamp/dicke.hpp"

namespace catamp {

/// Amplitude decay rates |eps_m| = (gamma/2)(N(N+2)/4 - m^2 + m) of the
/// no-click Hamiltonian -i(gamma/2) S_+ S_-, indexed like DickeState.
/// Populations decay at twice these rates.
class DecaySpectrum {
public:
  /// Throws InvalidArgument unless gamma > 0, Sizing unless N >= 1.
  DecaySpectrum(int n_atoms, double gamma);

  int n_atoms() const noexcept { return n_atoms_; }
  double gamma() const noexcept { return gamma_; }
  const Eigen::VectorXd& rates() const noexcept { return rates_; }
  double rate(Eigen::Index index) const { return rates_[index]; }

private:
  int n_atoms_;
  double gamma_;
  Eigen::VectorXd rates_;
};

/// c_m <- c_m exp(-|eps_m| dt). Diagonal, phase-free.
DickeState evolve_noclick(const DickeState& state, const DecaySpectrum& spectrum, double dt);

/// Squared norm of the no-click evolved state relative to the input's.
double survival_probability(const DickeState& state0, const DecaySpectrum& spectrum, double t);

/// (1/(gamma N)) ln(|c_{N/2}|^2 / |c_{-N/2}|^2). Throws UndefinedCatTime when
/// the dark population is zero and NegativeCatTime when the ratio is below 1.
double cat_time(const DickeState& state0, const DecaySpectrum& spectrum);
/// Same as cat_time but without throwing.
std::optional<double> try_cat_time(const DickeState& state0, const DecaySpectrum& spectrum);

/// Default search horizon: max(4 max(ln N, 1)/(gamma N), 2 t_c).
double default_t_max(const DickeState& state0, const DecaySpectrum& spectrum);

struct OptimalTime {
  double t_opt = 0.0;
  double peak_var = 0.0;
  /// Maximizer sits on 0 or t_max (monotone or flat variance).
  bool at_boundary = false;
};

inline constexpr int kDefaultGridPoints = 512;

/// Variance of S_z along the no-click trajectory at time t (normalized state).
double noclick_variance(const DickeState& state0, const DecaySpectrum& spectrum, double t);

/// Coarse scan over [0, t_max] followed by golden-section refinement.
OptimalTime find_t_opt(const DickeState& state0, const DecaySpectrum& spectrum, double t_max,
                       int grid_points = kDefaultGridPoints);

struct TrajectoryPoint {
  double t;
  double var_sz;
  double survival;
  double cat_fidelity;
  std::vector<double> populations;
};

struct NoClickTrajectory {
  std::vector<TrajectoryPoint> points;
  OptimalTime optimum;
};

/// n_samples uniform times on [0, t_end]; the optimum is searched over the same
/// window.
NoClickTrajectory noclick_trajectory(const DickeState& state0, const DecaySpectrum& spectrum,
                                     double t_end, int n_samples,
                                     int grid_points = kDefaultGridPoints);

}  // namespace catamp
