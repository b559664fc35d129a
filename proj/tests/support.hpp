#pragma once

#include <cmath>
#include <random>

#include "catamp/dicke.hpp"

namespace test_support {

/// Unit-norm state with i.i.d. complex Gaussian amplitudes.
inline catamp::DickeState random_state(int n_atoms, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  catamp::Vector v(n_atoms + 1);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = {gauss(rng), gauss(rng)};
  return catamp::DickeState(n_atoms, v).normalized();
}

inline double max_abs_diff(const catamp::Vector& a, const catamp::Vector& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

/// Binomial coefficient as a double via lgamma.
inline double binomial(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace test_support
