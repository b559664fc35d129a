#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "catamp/dicke.hpp"

namespace catamp::oracle {

// Brute-force reference propagators. Everything here works on dense or
// sparse matrices in the full basis and shares no code path with the
// diagonal no-click propagator or the event-driven sampler.

inline constexpr Eigen::Index kMaxExpmDim = 512;
inline constexpr int kMaxLindbladAtoms = 63;
inline constexpr Eigen::Index kMaxTcDim = 256;

struct DensityMatrix {
  Eigen::MatrixXcd rho;

  static DensityMatrix pure(const Vector& psi);

  double trace() const { return rho.trace().real(); }
  double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const;
  std::vector<double> diagonal() const;
};

/// exp(a) by scaling and squaring with a Taylor kernel.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a);

/// exp(-i H t) psi for any square H (Hermitian or not). Dimension cap
/// kMaxExpmDim.
Vector expm_apply(const Eigen::MatrixXcd& hamiltonian, const Vector& psi, double t);

/// -i (gamma/2) S_+ S_- as a dense matrix product.
Eigen::MatrixXcd noclick_hamiltonian(const SpinOperators& ops, double gamma);

/// Eigenvalues of (gamma/2) S_+ S_- from a dense Hermitian eigensolve, ascending.
Eigen::VectorXd brute_force_decay_rates(const SpinOperators& ops, double gamma);

struct Rk4Options {
  double tolerance = 1e-8;  // max change of any population between halvings
  int max_halvings = 16;
};

/// Collective decay  d rho/dt = gamma (S_- rho S_+ - {S_+ S_-, rho}/2) by
/// fixed-step RK4, halving the step until the populations at every grid time
/// change by less than the tolerance. Starts at t = 0; grid ascending.
std::vector<DensityMatrix> lindblad_collective(const DensityMatrix& rho0, double gamma,
                                               std::span<const double> grid,
                                               const Rk4Options& options = {});

/// Tavis-Cummings ensemble in a single damped mode:
///   H = -delta S_z + g (a S_+ + a^+ S_-),  cavity loss 4 kappa D[a].
/// With this loss normalization the field amplitude relaxes at 2 kappa and
/// adiabatic elimination gives collective decay at gamma = g^2/kappa.
struct TcParams {
  int n_atoms = 2;
  double g = 1.0;
  double kappa = 50.0;
  double delta = 0.0;  // only 0 is supported
  int photon_cutoff = 6;
};

struct TcResult {
  /// Reduced atomic populations (ascending m) at each grid time.
  std::vector<std::vector<double>> atomic_populations;
  /// Max population change when re-run with photon_cutoff + 1.
  double cutoff_change = 0.0;
};

/// Cavity starts in vacuum. Throws Numerical when the cutoff re-check moves any
/// population by 1e-6 or more, Sizing above kMaxTcDim.
TcResult tavis_cummings_lindblad(const TcParams& params, const DickeState& atomic0,
                                 std::span<const double> grid, const Rk4Options& options = {});

/// Atomic populations from a collective-decay run.
std::vector<std::vector<double>> populations_of(const std::vector<DensityMatrix>& states);

/// max over grid times of the L1 distance between population vectors.
double max_l1_distance(const std::vector<std::vector<double>>& a,
                       const std::vector<std::vector<double>>& b);

}  // namespace catamp::oracle
