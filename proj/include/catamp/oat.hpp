#pragma once

#include "catamp/dicke.hpp"

namespace catamp {

enum class PrepOrder { RotateThenTwist, TwistThenRotate };

/// Initial-state recipe: start from |N/2>, then apply exp(-i theta S_y) and
/// exp(-i chi S_x^2) in the given order.
struct PrepSpec {
  int n_atoms = 100;
  double chi = 0.0;
  double theta = 0.0;
  PrepOrder order = PrepOrder::TwistThenRotate;
};

/// chi in [0, pi], theta in [-pi, pi]; throws InvalidArgument otherwise.
void validate(const PrepSpec& spec);

DickeState fully_inverted(int n_atoms);

/// One-axis twisting exp(-i chi S_x^2), applied through the cached S_x
/// eigenbasis.
DickeState apply_oat(const SpinOperators& ops, const DickeState& state, double chi);

/// `ops` must match spec.n_atoms. Result is normalized.
DickeState prepare(const SpinOperators& ops, const PrepSpec& spec);

}  // namespace catamp
