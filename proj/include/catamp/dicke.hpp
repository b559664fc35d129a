#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace catamp {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;

/// Largest ensemble for which SpinOperators can be built. Dense eigensolves at
/// dimension 401 stay well under a second.
inline constexpr int kMaxAtoms = 400;

/// Amplitudes over the symmetric Dicke ladder |S = N/2, m>, stored in
/// ascending m: index i holds m = i - N/2, so index 0 is the dark state.
/// The vector may be sub-normalized; its squared norm carries the no-click
/// probability.
class DickeState {
public:
  DickeState(int n_atoms, Vector amplitudes);

  /// |m> with m = index - N/2.
  static DickeState basis(int n_atoms, Eigen::Index index);
  /// |N/2> (fully inverted).
  static DickeState top(int n_atoms) { return basis(n_atoms, n_atoms); }
  /// (|N/2> + e^{i phi}|-N/2>)/sqrt(2).
  static DickeState cat(int n_atoms, double phi = 0.0);

  int n_atoms() const noexcept { return n_atoms_; }
  Eigen::Index dim() const noexcept { return amplitudes_.size(); }
  double m_at(Eigen::Index index) const noexcept {
    return static_cast<double>(index) - 0.5 * n_atoms_;
  }

  const Vector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](Eigen::Index index) const { return amplitudes_[index]; }

  double squared_norm() const { return amplitudes_.squaredNorm(); }
  /// Throws DegenerateState on a zero vector.
  DickeState normalized() const;

private:
  int n_atoms_;
  Vector amplitudes_;
};

/// Spectrum and eigenvectors of a Hermitian operator, H = V diag(values) V^+.
struct HermitianEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

/// Dense collective spin matrices for one N, plus cached eigendecompositions
/// of S_x and S_y. Immutable after construction.
class SpinOperators {
public:
  /// Throws Sizing for N < 1 or N > kMaxAtoms.
  explicit SpinOperators(int n_atoms);

  int n_atoms() const noexcept { return n_atoms_; }
  Eigen::Index dim() const noexcept { return n_atoms_ + 1; }
  double spin() const noexcept { return 0.5 * n_atoms_; }

  const Eigen::VectorXd& sz_diagonal() const noexcept { return sz_; }
  Eigen::MatrixXd sz() const { return sz_.asDiagonal(); }
  const Eigen::MatrixXd& s_plus() const noexcept { return s_plus_; }
  const Eigen::MatrixXd& s_minus() const noexcept { return s_minus_; }
  const Eigen::MatrixXd& sx() const noexcept { return sx_; }
  const Eigen::MatrixXcd& sy() const noexcept { return sy_; }

  /// sqrt(S(S+1) - m(m-1)) at each index: S_- |m> = lowering(i) |m-1>.
  const Eigen::VectorXd& lowering() const noexcept { return lowering_; }

  /// Eigenvalues are snapped onto the exact grid {-N/2, ..., N/2} after a
  /// 1e-9 consistency check.
  const HermitianEigen& eig_sx() const noexcept { return eig_sx_; }
  const HermitianEigen& eig_sy() const noexcept { return eig_sy_; }

private:
  int n_atoms_;
  Eigen::VectorXd sz_;
  Eigen::VectorXd lowering_;
  Eigen::MatrixXd s_plus_;
  Eigen::MatrixXd s_minus_;
  Eigen::MatrixXd sx_;
  Eigen::MatrixXcd sy_;
  HermitianEigen eig_sx_;
  HermitianEigen eig_sy_;
};

/// V diag(f(lambda)) V^+ psi for a cached decomposition.
template <typename Fn>
Vector apply_spectral(const HermitianEigen& eig, Fn&& fn, const Vector& psi) {
  Vector coeffs = eig.vectors.adjoint() * psi;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs[k] *= fn(eig.values[k]);
  return eig.vectors * coeffs;
}

struct Observables {
  double mean_sz;
  double var_sz;
  double cat_fidelity;
  std::vector<double> populations;
};

/// Observables are evaluated on the normalized state; a zero vector throws
/// DegenerateState.
std::vector<double> populations(const DickeState& state);
double mean_sz(const DickeState& state);
double variance_sz(const DickeState& state);
/// max_phi |<psi|cat(phi)>|^2 = (|c_{N/2}| + |c_{-N/2}|)^2 / 2.
double cat_fidelity(const DickeState& state);
/// arg(c_{N/2} conj(c_{-N/2})); diagnostic only, 0 when either end vanishes.
double cat_phase(const DickeState& state);
Observables observe(const DickeState& state);

/// exp(-i theta S_y) state.
DickeState apply_rotation_y(const SpinOperators& ops, const DickeState& state,
                            double theta);

}  // namespace catamp
