#include "catamp/noclick.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "catamp/error.hpp"

namespace catamp {

namespace {

void check_match(const DickeState& state, const DecaySpectrum& spectrum) {
  if (state.n_atoms() != spectrum.n_atoms()) {
    throw Error(ErrorCode::DimensionMismatch,
                "state has N=" + std::to_string(state.n_atoms()) + ", spectrum has N=" +
                    std::to_string(spectrum.n_atoms()));
  }
}

void check_time(double t, const char* what) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be finite and >= 0");
  }
}

// Normalized populations at time t, computed from log-weights so that
// long horizons do not underflow the whole vector.
std::vector<double> noclick_populations(const DickeState& state0, const DecaySpectrum& spectrum,
                                        double t) {
  const Eigen::Index d = state0.dim();
  std::vector<double> logw(static_cast<std::size_t>(d));
  double top = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d; ++i) {
    const double p = std::norm(state0[i]);
    const double lw = p > 0.0 ? std::log(p) - 2.0 * spectrum.rate(i) * t
                              : -std::numeric_limits<double>::infinity();
    logw[static_cast<std::size_t>(i)] = lw;
    top = std::max(top, lw);
  }
  if (!std::isfinite(top)) throw Error(ErrorCode::DegenerateState, "state has zero norm");
  double total = 0.0;
  for (auto& lw : logw) {
    lw = std::exp(lw - top);
    total += lw;
  }
  for (auto& w : logw) w /= total;
  return logw;
}

struct PopulationMoments {
  double var;
  double fidelity;
};

PopulationMoments moments(const std::vector<double>& p, int n_atoms) {
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = static_cast<double>(i) - 0.5 * n_atoms;
    mean += p[i] * m;
    second += p[i] * m * m;
  }
  const double ends = std::sqrt(p.back()) + std::sqrt(p.front());
  return {std::max(0.0, second - mean * mean), std::min(1.0, 0.5 * ends * ends)};
}

}  // namespace

DecaySpectrum::DecaySpectrum(int n_atoms, double gamma) : n_atoms_(n_atoms), gamma_(gamma) {
  if (n_atoms < 1) throw Error(ErrorCode::Sizing, "atom number must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  }
  // N(N+2)/4 - m^2 + m == k (N - k + 1) with k = m + N/2, exact in integers.
  rates_.resize(n_atoms + 1);
  for (int k = 0; k <= n_atoms; ++k) {
    rates_[k] = 0.5 * gamma * static_cast<double>(k) * static_cast<double>(n_atoms - k + 1);
  }
}

DickeState evolve_noclick(const DickeState& state, const DecaySpectrum& spectrum, double dt) {
  check_match(state, spectrum);
  check_time(dt, "dt");
  Vector amps = state.amplitudes();
  for (Eigen::Index i = 0; i < amps.size(); ++i) amps[i] *= std::exp(-spectrum.rate(i) * dt);
  return DickeState(state.n_atoms(), std::move(amps));
}

double survival_probability(const DickeState& state0, const DecaySpectrum& spectrum, double t) {
  check_match(state0, spectrum);
  check_time(t, "t");
  const double initial = state0.squared_norm();
  if (!(initial > 0.0)) throw Error(ErrorCode::DegenerateState, "state has zero norm");
  double remaining = 0.0;
  for (Eigen::Index i = 0; i < state0.dim(); ++i) {
    remaining += std::norm(state0[i]) * std::exp(-2.0 * spectrum.rate(i) * t);
  }
  return remaining / initial;
}

namespace {

// Dark populations this far below the norm are roundoff from an exactly
// vanishing amplitude (odd N without rotation leaves |c| ~ 1e-16).
constexpr double kDarkFloor = 1e-24;

bool dark_is_empty(const DickeState& s, double dark) { return !(dark > kDarkFloor * s.squared_norm()); }

}  // namespace

std::optional<double> try_cat_time(const DickeState& state0, const DecaySpectrum& spectrum) {
  check_match(state0, spectrum);
  const double dark = std::norm(state0[0]);
  const double top = std::norm(state0[state0.dim() - 1]);
  if (dark_is_empty(state0, dark) || top < dark) return std::nullopt;
  return std::log(top / dark) / (spectrum.gamma() * spectrum.n_atoms());
}

double cat_time(const DickeState& state0, const DecaySpectrum& spectrum) {
  check_match(state0, spectrum);
  const double dark = std::norm(state0[0]);
  const double top = std::norm(state0[state0.dim() - 1]);
  if (dark_is_empty(state0, dark)) {
    throw Error(ErrorCode::UndefinedCatTime,
                "cat time undefined: the m=-N/2 population is zero, so the extreme "
                "populations never equalize");
  }
  if (top < dark) {
    throw Error(ErrorCode::NegativeCatTime,
                "cat time would be negative: the m=+N/2 population is already below the "
                "m=-N/2 population and no-click decay only widens the gap");
  }
  return std::log(top / dark) / (spectrum.gamma() * spectrum.n_atoms());
}

double default_t_max(const DickeState& state0, const DecaySpectrum& spectrum) {
  const int n = spectrum.n_atoms();
  double t_max = 4.0 * std::max(std::log(static_cast<double>(n)), 1.0) / (spectrum.gamma() * n);
  if (auto tc = try_cat_time(state0, spectrum); tc && *tc > 0.0) t_max = std::max(t_max, 2.0 * *tc);
  return t_max;
}

double noclick_variance(const DickeState& state0, const DecaySpectrum& spectrum, double t) {
  check_match(state0, spectrum);
  check_time(t, "t");
  return moments(noclick_populations(state0, spectrum, t), state0.n_atoms()).var;
}

OptimalTime find_t_opt(const DickeState& state0, const DecaySpectrum& spectrum, double t_max,
                       int grid_points) {
  check_match(state0, spectrum);
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw Error(ErrorCode::InvalidArgument, "t_max must be positive");
  }
  if (grid_points < 16) throw Error(ErrorCode::InvalidArgument, "grid_points must be >= 16");

  auto var_at = [&](double t) {
    return moments(noclick_populations(state0, spectrum, t), state0.n_atoms()).var;
  };
  const double step = t_max / (grid_points - 1);
  std::vector<double> grid(static_cast<std::size_t>(grid_points));
  for (int i = 0; i < grid_points; ++i) grid[static_cast<std::size_t>(i)] = var_at(step * i);

  const auto [lo_it, hi_it] = std::minmax_element(grid.begin(), grid.end());
  const double n = state0.n_atoms();
  if (*hi_it - *lo_it <= 1e-12 * std::max(1.0, 0.25 * n * n)) {
    return OptimalTime{0.0, grid.front(), true};
  }
  const auto best = static_cast<int>(std::distance(grid.begin(), hi_it));

  // Golden section on the two cells around the best grid point.
  const double tol = 1e-6 * t_max;
  double a = step * std::max(best - 1, 0);
  double b = best + 1 < grid_points ? step * (best + 1) : t_max;
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = var_at(c);
  double fd = var_at(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = var_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = var_at(d);
    }
  }
  double t_opt = 0.5 * (a + b);
  double peak = var_at(t_opt);
  if (grid[static_cast<std::size_t>(best)] > peak) {
    t_opt = step * best;
    peak = grid[static_cast<std::size_t>(best)];
  }

  OptimalTime out{t_opt, peak, false};
  if (t_opt <= tol) {
    out = OptimalTime{0.0, std::max(grid.front(), peak), true};
  } else if (t_opt >= t_max - tol) {
    out = OptimalTime{t_max, std::max(grid.back(), peak), true};
  }
  return out;
}

NoClickTrajectory noclick_trajectory(const DickeState& state0, const DecaySpectrum& spectrum,
                                     double t_end, int n_samples, int grid_points) {
  check_match(state0, spectrum);
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorCode::InvalidArgument, "t_end must be positive");
  }
  if (n_samples < 2) throw Error(ErrorCode::InvalidArgument, "n_samples must be >= 2");

  NoClickTrajectory out;
  out.points.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    // Endpoint exact so the last sample sits on t_end.
    const double t = i + 1 == n_samples ? t_end : t_end * i / (n_samples - 1);
    auto pops = noclick_populations(state0, spectrum, t);
    const auto mom = moments(pops, state0.n_atoms());
    out.points.push_back(TrajectoryPoint{t, mom.var, survival_probability(state0, spectrum, t),
                                         mom.fidelity, std::move(pops)});
  }
  out.optimum = find_t_opt(state0, spectrum, t_end, grid_points);
  return out;
}

}  // namespace catamp
