#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "catamp/dicke.hpp"
#include "catamp/noclick.hpp"

namespace catamp {

/// One Monte-Carlo wavefunction trajectory of collective decay with jump
/// operator sqrt(gamma) S_-.
struct McwfRecord {
  std::vector<double> jump_times;
  DickeState final_state;
  std::uint64_t seed = 0;

  std::size_t n_jumps() const noexcept { return jump_times.size(); }
};

/// Seed of trajectory `index` in a batch started from `seed_base`
/// (splitmix64 of the pair). Independent of how the batch is scheduled.
std::uint64_t trajectory_seed(std::uint64_t seed_base, std::uint64_t index);

/// Exact event-driven sampling up to t_end. Between jumps the squared norm is
/// sum_m p_m exp(-2|eps_m| tau), so each waiting time is found by inverting
/// that closed form against a uniform draw.
McwfRecord sample_trajectory(const DickeState& state0, const DecaySpectrum& spectrum,
                             double t_end, std::uint64_t seed);

/// Called with (grid index, normalized state at that grid time).
using GridObserver = std::function<void(std::size_t, const DickeState&)>;

/// Same random stream as sample_trajectory(state0, spectrum, grid.back(), seed);
/// additionally reports the state at every grid time. Grid must be ascending
/// and nonnegative.
McwfRecord sample_trajectory(const DickeState& state0, const DecaySpectrum& spectrum,
                             std::span<const double> grid, std::uint64_t seed,
                             const GridObserver& observer);

struct JumpHistogram {
  double t_end = 0.0;
  std::size_t n_trajectories = 0;
  std::vector<std::uint64_t> counts;    // n = 0..N
  std::vector<double> probabilities;
  std::vector<double> std_errors;       // binomial sqrt(p(1-p)/n)
};

JumpHistogram jump_histogram(const DickeState& state0, const DecaySpectrum& spectrum,
                             double t_end, std::size_t n_trajectories, std::uint64_t seed_base,
                             int workers = 1);

/// p_0 / sum_n p_n (1 - eta)^n: probability that a run reported as click-free
/// truly had no jump, for a detector of efficiency eta.
double detector_precision(const JumpHistogram& hist, double eta);

struct MeanPoint {
  double t;
  double mean;
  double std_error;
};

/// Trajectory-averaged <S_z>(t) on the grid.
std::vector<MeanPoint> ensemble_mean_sz(const DickeState& state0, const DecaySpectrum& spectrum,
                                        std::span<const double> grid,
                                        std::size_t n_trajectories, std::uint64_t seed_base,
                                        int workers = 1);

}  // namespace catamp
