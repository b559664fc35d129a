#include "catamp/mcwf.hpp"

#include <cmath>
#include <random>
#include <string>

#include "catamp/error.hpp"
#include "catamp/parallel.hpp"

namespace catamp {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform on the open interval (0, 1).
double open_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

class Sampler {
public:
  Sampler(const DickeState& state0, const DecaySpectrum& spectrum)
      : n_(spectrum.n_atoms()), rates_(spectrum.rates()), amps_(state0.normalized().amplitudes()) {
    if (state0.n_atoms() != spectrum.n_atoms()) {
      throw Error(ErrorCode::DimensionMismatch, "state and spectrum differ in N");
    }
    weights_.resize(amps_.size());
    refresh_weights();
  }

  // Runs to t_end; `emit(t)` is called for each grid time in order with the
  // state already advanced there.
  template <typename Emit>
  std::vector<double> run(double t_end, std::uint64_t seed, std::span<const double> grid,
                          Emit&& emit) {
    std::mt19937_64 rng(seed);
    std::vector<double> jumps;
    double t_last = 0.0;
    std::size_t next_grid = 0;
    while (true) {
      const double r = open_uniform(rng);
      const double horizon = t_end - t_last;
      double tau = horizon;
      bool jump = false;
      if (r >= weights_[0] && norm_after(horizon) <= r) {
        tau = invert(r, horizon);
        jump = true;
      }
      const double t_event = t_last + tau;
      for (; next_grid < grid.size() && (grid[next_grid] < t_event || (!jump && grid[next_grid] <= t_event)); ++next_grid) {
        emit(next_grid, state_after(grid[next_grid] - t_last));
      }
      if (!jump) {
        amps_ = state_after(horizon).amplitudes();
        return jumps;
      }
      jumps.push_back(t_event);
      apply_jump(tau);
      t_last = t_event;
    }
  }

  DickeState state() const { return DickeState(n_, amps_); }

private:
  void refresh_weights() {
    for (Eigen::Index i = 0; i < amps_.size(); ++i) weights_[i] = std::norm(amps_[i]);
  }

  double norm_after(double tau) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
      if (weights_[i] > 0.0) s += weights_[i] * std::exp(-2.0 * rates_[i] * tau);
    }
    return s;
  }

  // norm_after is strictly decreasing from 1, and norm_after(hi) <= r < 1.
  double invert(double r, double hi) const {
    double lo = 0.0;
    for (int iter = 0; iter < 400 && hi - lo > 1e-12 * hi; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (norm_after(mid) > r) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  DickeState state_after(double tau) const {
    Vector v(amps_.size());
    for (Eigen::Index i = 0; i < amps_.size(); ++i) v[i] = amps_[i] * std::exp(-rates_[i] * tau);
    return DickeState(n_, std::move(v)).normalized();
  }

  // Lowering coefficient at index k: sqrt(k (N - k + 1)).
  void apply_jump(double tau) {
    Vector lowered = Vector::Zero(amps_.size());
    for (Eigen::Index k = 1; k < amps_.size(); ++k) {
      const double coeff = std::sqrt(static_cast<double>(k) * static_cast<double>(n_ - k + 1));
      lowered[k - 1] = coeff * amps_[k] * std::exp(-rates_[k] * tau);
    }
    const double norm = lowered.norm();
    if (!(norm > 0.0)) throw Error(ErrorCode::Numerical, "jump applied to the dark state");
    amps_ = lowered / norm;
    refresh_weights();
  }

  int n_;
  Eigen::VectorXd rates_;
  Vector amps_;
  Eigen::VectorXd weights_;
};

void check_horizon(double t_end) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorCode::InvalidArgument, "t_end must be positive");
  }
}

}  // namespace

std::uint64_t trajectory_seed(std::uint64_t seed_base, std::uint64_t index) {
  return splitmix64(splitmix64(seed_base) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

McwfRecord sample_trajectory(const DickeState& state0, const DecaySpectrum& spectrum,
                             double t_end, std::uint64_t seed) {
  check_horizon(t_end);
  Sampler sampler(state0, spectrum);
  auto jumps = sampler.run(t_end, seed, {}, [](std::size_t, const DickeState&) {});
  return McwfRecord{std::move(jumps), sampler.state(), seed};
}

McwfRecord sample_trajectory(const DickeState& state0, const DecaySpectrum& spectrum,
                             std::span<const double> grid, std::uint64_t seed,
                             const GridObserver& observer) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "time grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || (i > 0 && grid[i] < grid[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "time grid must be ascending and nonnegative");
    }
  }
  const double t_end = grid.back();
  if (t_end == 0.0) {
    const DickeState psi = state0.normalized();
    if (observer) {
      for (std::size_t i = 0; i < grid.size(); ++i) observer(i, psi);
    }
    return McwfRecord{{}, psi, seed};
  }
  Sampler sampler(state0, spectrum);
  auto jumps = sampler.run(t_end, seed, grid, [&](std::size_t i, const DickeState& psi) {
    if (observer) observer(i, psi);
  });
  return McwfRecord{std::move(jumps), sampler.state(), seed};
}

JumpHistogram jump_histogram(const DickeState& state0, const DecaySpectrum& spectrum,
                             double t_end, std::size_t n_trajectories, std::uint64_t seed_base,
                             int workers) {
  check_horizon(t_end);
  if (n_trajectories < 1) throw Error(ErrorCode::InvalidArgument, "need at least one trajectory");
  std::vector<std::size_t> jumps(n_trajectories);
  parallel_for(n_trajectories, workers, [&](std::size_t i) {
    jumps[i] = sample_trajectory(state0, spectrum, t_end, trajectory_seed(seed_base, i)).n_jumps();
  });

  JumpHistogram hist;
  hist.t_end = t_end;
  hist.n_trajectories = n_trajectories;
  hist.counts.assign(static_cast<std::size_t>(spectrum.n_atoms()) + 1, 0);
  for (auto n : jumps) ++hist.counts.at(n);
  const double total = static_cast<double>(n_trajectories);
  for (auto c : hist.counts) {
    const double p = static_cast<double>(c) / total;
    hist.probabilities.push_back(p);
    hist.std_errors.push_back(std::sqrt(p * (1.0 - p) / total));
  }
  return hist;
}

double detector_precision(const JumpHistogram& hist, double eta) {
  if (hist.probabilities.empty() || hist.n_trajectories == 0) {
    throw Error(ErrorCode::InvalidArgument, "empty jump histogram");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "eta must lie in [0, 1]");
  double positives = 0.0;
  double miss = 1.0;
  for (double p : hist.probabilities) {
    positives += p * miss;
    miss *= 1.0 - eta;
  }
  if (!(positives > 0.0)) {
    throw Error(ErrorCode::DegenerateState, "no trajectory is ever reported click-free");
  }
  return hist.probabilities.front() / positives;
}

std::vector<MeanPoint> ensemble_mean_sz(const DickeState& state0, const DecaySpectrum& spectrum,
                                        std::span<const double> grid,
                                        std::size_t n_trajectories, std::uint64_t seed_base,
                                        int workers) {
  if (n_trajectories < 1) throw Error(ErrorCode::InvalidArgument, "need at least one trajectory");
  const std::size_t g = grid.size();
  std::vector<double> samples(n_trajectories * g);
  parallel_for(n_trajectories, workers, [&](std::size_t i) {
    double* row = samples.data() + i * g;
    sample_trajectory(state0, spectrum, grid, trajectory_seed(seed_base, i),
                      [row](std::size_t k, const DickeState& psi) { row[k] = mean_sz(psi); });
  });

  std::vector<MeanPoint> out;
  out.reserve(g);
  const double n = static_cast<double>(n_trajectories);
  for (std::size_t k = 0; k < g; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_trajectories; ++i) sum += samples[i * g + k];
    const double mean = sum / n;
    double sq = 0.0;
    for (std::size_t i = 0; i < n_trajectories; ++i) {
      const double dev = samples[i * g + k] - mean;
      sq += dev * dev;
    }
    const double var = n_trajectories > 1 ? sq / (n - 1.0) : 0.0;
    out.push_back(MeanPoint{grid[k], mean, std::sqrt(var / n)});
  }
  return out;
}

}  // namespace catamp
