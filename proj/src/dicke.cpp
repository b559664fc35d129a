#include "catamp/dicke.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "catamp/error.hpp"

namespace catamp {

namespace {

void check_atoms(int n_atoms) {
  if (n_atoms < 1 || n_atoms > kMaxAtoms) {
    throw Error(ErrorCode::Sizing, "atom number " + std::to_string(n_atoms) +
                                       " outside [1, " + std::to_string(kMaxAtoms) + "]");
  }
}

// Spin components have the nondegenerate spectrum {-S, ..., S}; any drift
// beyond roundoff means the decomposition cannot be trusted.
void snap_spectrum(Eigen::VectorXd& values, double spin) {
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const double exact = -spin + static_cast<double>(k);
    if (std::abs(values[k] - exact) > 1e-9) {
      throw Error(ErrorCode::Numerical, "spin eigenvalue " + std::to_string(values[k]) +
                                            " deviates from " + std::to_string(exact));
    }
    values[k] = exact;
  }
}

}  // namespace

DickeState::DickeState(int n_atoms, Vector amplitudes)
    : n_atoms_(n_atoms), amplitudes_(std::move(amplitudes)) {
  if (n_atoms < 1) throw Error(ErrorCode::Sizing, "atom number must be positive");
  if (amplitudes_.size() != n_atoms + 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected " + std::to_string(n_atoms + 1) + " amplitudes, got " +
                    std::to_string(amplitudes_.size()));
  }
  if (!amplitudes_.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "amplitudes must be finite");
  }
}

DickeState DickeState::basis(int n_atoms, Eigen::Index index) {
  if (n_atoms < 1) throw Error(ErrorCode::Sizing, "atom number must be positive");
  if (index < 0 || index > n_atoms) {
    throw Error(ErrorCode::InvalidArgument, "Dicke index out of range");
  }
  Vector amps = Vector::Zero(n_atoms + 1);
  amps[index] = 1.0;
  return DickeState(n_atoms, std::move(amps));
}

DickeState DickeState::cat(int n_atoms, double phi) {
  if (n_atoms < 1) throw Error(ErrorCode::Sizing, "atom number must be positive");
  Vector amps = Vector::Zero(n_atoms + 1);
  amps[n_atoms] = M_SQRT1_2;
  amps[0] = std::polar(M_SQRT1_2, phi);
  return DickeState(n_atoms, std::move(amps));
}

DickeState DickeState::normalized() const {
  const double norm = amplitudes_.norm();
  if (!(norm > 0.0)) throw Error(ErrorCode::DegenerateState, "state has zero norm");
  return DickeState(n_atoms_, amplitudes_ / norm);
}

SpinOperators::SpinOperators(int n_atoms) : n_atoms_(n_atoms) {
  check_atoms(n_atoms);
  const Eigen::Index d = dim();
  const double s = spin();
  const double casimir = s * (s + 1.0);

  sz_.resize(d);
  lowering_.setZero(d);
  s_plus_.setZero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double m = static_cast<double>(i) - s;
    sz_[i] = m;
    if (i + 1 < d) s_plus_(i + 1, i) = std::sqrt(casimir - m * (m + 1.0));
    if (i > 0) lowering_[i] = std::sqrt(casimir - m * (m - 1.0));
  }
  s_minus_ = s_plus_.transpose();
  sx_ = 0.5 * (s_plus_ + s_minus_);
  sy_ = Complex(0.0, -0.5) * (s_plus_ - s_minus_).cast<Complex>();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solve_x(sx_);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solve_y(sy_);
  if (solve_x.info() != Eigen::Success || solve_y.info() != Eigen::Success) {
    throw Error(ErrorCode::Numerical, "spin eigendecomposition failed");
  }
  eig_sx_.values = solve_x.eigenvalues();
  eig_sx_.vectors = solve_x.eigenvectors().cast<Complex>();
  eig_sy_.values = solve_y.eigenvalues();
  eig_sy_.vectors = solve_y.eigenvectors();
  snap_spectrum(eig_sx_.values, s);
  snap_spectrum(eig_sy_.values, s);
}

std::vector<double> populations(const DickeState& state) {
  const double total = state.squared_norm();
  if (!(total > 0.0)) throw Error(ErrorCode::DegenerateState, "state has zero norm");
  std::vector<double> out(static_cast<std::size_t>(state.dim()));
  for (Eigen::Index i = 0; i < state.dim(); ++i) {
    out[static_cast<std::size_t>(i)] = std::norm(state[i]) / total;
  }
  return out;
}

namespace {

struct Moments {
  double mean;
  double second;
};

Moments sz_moments(const DickeState& state) {
  const auto p = populations(state);
  Moments mom{0.0, 0.0};
  for (Eigen::Index i = 0; i < state.dim(); ++i) {
    const double m = state.m_at(i);
    mom.mean += p[static_cast<std::size_t>(i)] * m;
    mom.second += p[static_cast<std::size_t>(i)] * m * m;
  }
  return mom;
}

}  // namespace

double mean_sz(const DickeState& state) { return sz_moments(state).mean; }

double variance_sz(const DickeState& state) {
  const auto mom = sz_moments(state);
  return std::max(0.0, mom.second - mom.mean * mom.mean);
}

double cat_fidelity(const DickeState& state) {
  const double total = state.squared_norm();
  if (!(total > 0.0)) throw Error(ErrorCode::DegenerateState, "state has zero norm");
  const double sum = std::abs(state[state.dim() - 1]) + std::abs(state[0]);
  return std::min(1.0, 0.5 * sum * sum / total);
}

double cat_phase(const DickeState& state) {
  const Complex product = state[state.dim() - 1] * std::conj(state[0]);
  return product == Complex(0.0, 0.0) ? 0.0 : std::arg(product);
}

Observables observe(const DickeState& state) {
  const auto mom = sz_moments(state);
  return Observables{mom.mean, std::max(0.0, mom.second - mom.mean * mom.mean),
                     cat_fidelity(state), populations(state)};
}

DickeState apply_rotation_y(const SpinOperators& ops, const DickeState& state,
                            double theta) {
  if (ops.n_atoms() != state.n_atoms()) {
    throw Error(ErrorCode::DimensionMismatch, "operators and state differ in N");
  }
  if (!std::isfinite(theta)) throw Error(ErrorCode::InvalidArgument, "theta must be finite");
  auto phase = [theta](double lambda) { return std::polar(1.0, -theta * lambda); };
  return DickeState(state.n_atoms(), apply_spectral(ops.eig_sy(), phase, state.amplitudes()));
}

}  // namespace catamp
