#include "catamp/oat.hpp"

#include <cmath>

#include "catamp/error.hpp"

namespace catamp {

void validate(const PrepSpec& spec) {
  if (spec.n_atoms < 1 || spec.n_atoms > kMaxAtoms) {
    throw Error(ErrorCode::Sizing, "atom number outside supported range");
  }
  if (!(spec.chi >= 0.0 && spec.chi <= M_PI)) {
    throw Error(ErrorCode::InvalidArgument, "chi must lie in [0, pi]");
  }
  if (!(spec.theta >= -M_PI && spec.theta <= M_PI)) {
    throw Error(ErrorCode::InvalidArgument, "theta must lie in [-pi, pi]");
  }
}

DickeState fully_inverted(int n_atoms) { return DickeState::top(n_atoms); }

DickeState apply_oat(const SpinOperators& ops, const DickeState& state, double chi) {
  if (ops.n_atoms() != state.n_atoms()) {
    throw Error(ErrorCode::DimensionMismatch, "operators and state differ in N");
  }
  if (!std::isfinite(chi)) throw Error(ErrorCode::InvalidArgument, "chi must be finite");
  // lambda^2 is exact here (snapped spectrum), so periodicities in chi are
  // not polluted by eigenvalue roundoff.
  auto phase = [chi](double lambda) {
    const double arg = std::fmod(chi * lambda * lambda, 2.0 * M_PI);
    return std::polar(1.0, -arg);
  };
  return DickeState(state.n_atoms(), apply_spectral(ops.eig_sx(), phase, state.amplitudes()));
}

DickeState prepare(const SpinOperators& ops, const PrepSpec& spec) {
  validate(spec);
  if (ops.n_atoms() != spec.n_atoms) {
    throw Error(ErrorCode::DimensionMismatch, "operators and spec differ in N");
  }
  DickeState psi = fully_inverted(spec.n_atoms);
  if (spec.order == PrepOrder::RotateThenTwist) {
    if (spec.theta != 0.0) psi = apply_rotation_y(ops, psi, spec.theta);
    if (spec.chi != 0.0) psi = apply_oat(ops, psi, spec.chi);
  } else {
    if (spec.chi != 0.0) psi = apply_oat(ops, psi, spec.chi);
    if (spec.theta != 0.0) psi = apply_rotation_y(ops, psi, spec.theta);
  }
  return psi.normalized();
}

}  // namespace catamp
