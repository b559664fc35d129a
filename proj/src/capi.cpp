#include "catamp/catamp.h"

#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "catamp/dicke.hpp"
#include "catamp/error.hpp"
#include "catamp/mcwf.hpp"
#include "catamp/noclick.hpp"
#include "catamp/oat.hpp"
#include "catamp/parallel.hpp"
#include "catamp/sweep.hpp"
#include "catamp/validation.hpp"

struct catamp_operators {
  catamp::SpinOperators ops;
};

struct catamp_state {
  catamp::DickeState state;
};

struct catamp_trajectory {
  catamp::NoClickTrajectory traj;
  int n_atoms;
};

struct catamp_histogram {
  catamp::JumpHistogram hist;
};

struct catamp_sweep {
  std::vector<catamp::SweepRow> rows;
};

struct catamp_check_report {
  std::vector<catamp::CheckResult> checks;
};

namespace {

thread_local std::string tl_error;

struct BufferTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

catamp_status set_error(catamp_status status, const char* msg) {
  tl_error = msg;
  return status;
}

catamp_status map_code(catamp::ErrorCode code) {
  using catamp::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return CATAMP_ERR_INVALID_ARGUMENT;
    case ErrorCode::Sizing: return CATAMP_ERR_SIZING;
    case ErrorCode::DegenerateState: return CATAMP_ERR_DEGENERATE_STATE;
    case ErrorCode::UndefinedCatTime: return CATAMP_ERR_UNDEFINED_CAT_TIME;
    case ErrorCode::NegativeCatTime: return CATAMP_ERR_NEGATIVE_CAT_TIME;
    case ErrorCode::DimensionMismatch: return CATAMP_ERR_DIMENSION_MISMATCH;
    case ErrorCode::Numerical: return CATAMP_ERR_NUMERICAL;
  }
  return CATAMP_ERR_INTERNAL;
}

template <typename Fn>
catamp_status guard(Fn&& fn) {
  try {
    fn();
    return CATAMP_OK;
  } catch (const catamp::Error& e) {
    return set_error(map_code(e.code()), e.what());
  } catch (const BufferTooSmall& e) {
    return set_error(CATAMP_ERR_BUFFER_TOO_SMALL, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(CATAMP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(CATAMP_ERR_INTERNAL, e.what());
  }
}

#define CATAMP_REQUIRE(ptr)                                                   \
  do {                                                                        \
    if (!(ptr)) return set_error(CATAMP_ERR_NULL_POINTER, "null pointer: " #ptr); \
  } while (0)

catamp::PrepOrder to_order(catamp_prep_order order) {
  switch (order) {
    case CATAMP_ROTATE_THEN_TWIST: return catamp::PrepOrder::RotateThenTwist;
    case CATAMP_TWIST_THEN_ROTATE: return catamp::PrepOrder::TwistThenRotate;
  }
  throw catamp::Error(catamp::ErrorCode::InvalidArgument, "unknown preparation order");
}

int resolve_workers(int workers) {
  return workers > 0 ? workers : catamp::default_worker_count();
}

void check_len(std::size_t len, Eigen::Index expected) {
  if (len != static_cast<std::size_t>(expected)) {
    throw catamp::Error(catamp::ErrorCode::DimensionMismatch,
                        "buffer length " + std::to_string(len) + " != " + std::to_string(expected));
  }
}

// Output buffers may be longer than needed.
void check_out_len(std::size_t len, Eigen::Index expected) {
  if (len < static_cast<std::size_t>(expected)) {
    throw BufferTooSmall("buffer length " + std::to_string(len) + " < " + std::to_string(expected));
  }
}

catamp_state* wrap(catamp::DickeState s) { return new catamp_state{std::move(s)}; }

}  // namespace

extern "C" {

const char* catamp_version(void) { return "1.0.0"; }

const char* catamp_last_error(void) { return tl_error.c_str(); }

const char* catamp_status_name(catamp_status status) {
  switch (status) {
    case CATAMP_OK: return "ok";
    case CATAMP_ERR_NULL_POINTER: return "null pointer";
    case CATAMP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CATAMP_ERR_SIZING: return "sizing error";
    case CATAMP_ERR_DEGENERATE_STATE: return "degenerate state";
    case CATAMP_ERR_UNDEFINED_CAT_TIME: return "undefined cat time";
    case CATAMP_ERR_NEGATIVE_CAT_TIME: return "negative cat time";
    case CATAMP_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case CATAMP_ERR_NUMERICAL: return "numerical failure";
    case CATAMP_ERR_OUT_OF_RANGE: return "index out of range";
    case CATAMP_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case CATAMP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int catamp_max_atoms(void) { return catamp::kMaxAtoms; }

int catamp_default_workers(void) { return catamp::default_worker_count(); }

/* ---- operators ---- */

catamp_status catamp_operators_create(int n_atoms, catamp_operators** out) {
  CATAMP_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = new catamp_operators{catamp::SpinOperators(n_atoms)}; });
}

void catamp_operators_destroy(catamp_operators* ops) { delete ops; }

int catamp_operators_n_atoms(const catamp_operators* ops) { return ops ? ops->ops.n_atoms() : 0; }

catamp_status catamp_operators_sx_spectrum(const catamp_operators* ops, double* out, size_t len) {
  CATAMP_REQUIRE(ops);
  CATAMP_REQUIRE(out);
  return guard([&] {
    const auto& values = ops->ops.eig_sx().values;
    check_out_len(len, values.size());
    std::memcpy(out, values.data(), static_cast<std::size_t>(values.size()) * sizeof(double));
  });
}

/* ---- states ---- */

catamp_status catamp_state_prepare(const catamp_operators* ops, double chi, double theta,
                                   catamp_prep_order order, catamp_state** out) {
  CATAMP_REQUIRE(ops);
  CATAMP_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    const catamp::PrepSpec spec{ops->ops.n_atoms(), chi, theta, to_order(order)};
    *out = wrap(catamp::prepare(ops->ops, spec));
  });
}

catamp_status catamp_state_from_amplitudes(int n_atoms, const double* re, const double* im,
                                           size_t len, catamp_state** out) {
  CATAMP_REQUIRE(re);
  CATAMP_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    if (n_atoms < 1) throw catamp::Error(catamp::ErrorCode::Sizing, "atom number must be positive");
    check_len(len, n_atoms + 1);
    catamp::Vector amps(static_cast<Eigen::Index>(len));
    for (std::size_t i = 0; i < len; ++i) amps[static_cast<Eigen::Index>(i)] = {re[i], im ? im[i] : 0.0};
    *out = wrap(catamp::DickeState(n_atoms, std::move(amps)));
  });
}

catamp_status catamp_state_amplitudes(const catamp_state* state, double* re, double* im,
                                      size_t len) {
  CATAMP_REQUIRE(state);
  return guard([&] {
    const auto& amps = state->state.amplitudes();
    check_out_len(len, amps.size());
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
      if (re) re[i] = amps[i].real();
      if (im) im[i] = amps[i].imag();
    }
  });
}

int catamp_state_n_atoms(const catamp_state* state) { return state ? state->state.n_atoms() : 0; }

catamp_status catamp_state_rotate_y(const catamp_operators* ops, const catamp_state* state,
                                    double theta, catamp_state** out) {
  CATAMP_REQUIRE(ops);
  CATAMP_REQUIRE(state);
  CATAMP_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = wrap(catamp::apply_rotation_y(ops->ops, state->state, theta)); });
}

catamp_status catamp_state_twist(const catamp_operators* ops, const catamp_state* state,
                                 double chi, catamp_state** out) {
  CATAMP_REQUIRE(ops);
  CATAMP_REQUIRE(state);
  CATAMP_REQUIRE(out);
  *out = nullptr;
  return guard([&] { *out = wrap(catamp::apply_oat(ops->ops, state->state, chi)); });
}

catamp_status catamp_state_evolve_noclick(const catamp_state* state, double gamma, double dt,
                                          catamp_state** out) {
  CATAMP_REQUIRE(state);
  CATAMP_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    const catamp::DecaySpectrum spectrum(state->state.n_atoms(), gamma);
    *out = wrap(catamp::evolve_noclick(state->state, spectrum, dt));
  });
}

catamp_status catamp_state_observables(const catamp_state* state, catamp_observables* out) {
  CATAMP_REQUIRE(state);
  CATAMP_REQUIRE(out);
  return guard([&] {
    const auto obs = catamp::observe(state->state);
    *out = catamp_observables{state->state.squared_norm(), obs.mean_sz, obs.var_sz,
                              obs.cat_fidelity, catamp::cat_phase(state->state)};
  });
}

catamp_status catamp_state_populations(const catamp_state* state, double* out, size_t len) {
  CATAMP_REQUIRE(state);
  CATAMP_REQUIRE(out);
  return guard([&] {
    const auto pops = catamp::populations(state->state);
    check_out_len(len, static_cast<Eigen::Index>(pops.size()));
    std::memcpy(out, pops.data(), pops.size() * sizeof(double));
  });
}

void catamp_state_destroy(catamp_state* state) { delete state; }

/* ---- no-click ---- */

catamp_status catamp_decay_spectrum(int n_atoms, double gamma, double* rates, size_t len) {
  CATAMP_REQUIRE(rates);
  return guard([&] {
    const catamp::DecaySpectrum spectrum(n_atoms, gamma);
    check_out_len(len, spectrum.rates().size());
    std::memcpy(rates, spectrum.rates().data(),
                static_cast<std::size_t>(spectrum.rates().size()) * sizeof(double));
  });
}

catamp_status catamp_survival_probability(const catamp_state* state0, double gamma, double t,
                                          double* out) {
  CATAMP_REQUIRE(state0);
  CATAMP_REQUIRE(out);
  return guard([&] {
    const catamp::DecaySpectrum spectrum(state0->state.n_atoms(), gamma);
    *out = catamp::survival_probability(state0->state, spectrum, t);
  });
}

catamp_status catamp_cat_time(const catamp_state* state0, double gamma, double* out) {
  CATAMP_REQUIRE(state0);
  CATAMP_REQUIRE(out);
  return guard([&] {
    const catamp::DecaySpectrum spectrum(state0->state.n_atoms(), gamma);
    *out = catamp::cat_time(state0->state, spectrum);
  });
}

catamp_status catamp_default_t_max(const catamp_state* state0, double gamma, double* out) {
  CATAMP_REQUIRE(state0);
  CATAMP_REQUIRE(out);
  return guard([&] {
    const catamp::DecaySpectrum spectrum(state0->state.n_atoms(), gamma);
    *out = catamp::default_t_max(state0->state, spectrum);
  });
}

catamp_status catamp_find_t_opt(const catamp_state* state0, double gamma, double t_max,
                                int grid_points, catamp_optimum* out) {
  CATAMP_REQUIRE(state0);
  CATAMP_REQUIRE(out);
  return guard([&] {
    const catamp::DecaySpectrum spectrum(state0->state.n_atoms(), gamma);
    const auto opt = catamp::find_t_opt(state0->state, spectrum, t_max,
                                        grid_points > 0 ? grid_points : catamp::kDefaultGridPoints);
    *out = catamp_optimum{opt.t_opt, opt.peak_var, opt.at_boundary ? 1 : 0};
  });
}

catamp_status catamp_trajectory_compute(const catamp_state* state0, double gamma, double t_end,
                                        int n_samples, catamp_trajectory** out) {
  CATAMP_REQUIRE(state0);
  CATAMP_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    const catamp::DecaySpectrum spectrum(state0->state.n_atoms(), gamma);
    *out = new catamp_trajectory{catamp::noclick_trajectory(state0->state, spectrum, t_end, n_samples),
                                 state0->state.n_atoms()};
  });
}

size_t catamp_trajectory_size(const catamp_trajectory* traj) {
  return traj ? traj->traj.points.size() : 0;
}

catamp_status catamp_trajectory_point_at(const catamp_trajectory* traj, size_t index,
                                         catamp_trajectory_point* out) {
  CATAMP_REQUIRE(traj);
  CATAMP_REQUIRE(out);
  if (index >= traj->traj.points.size()) return set_error(CATAMP_ERR_OUT_OF_RANGE, "trajectory index");
  const auto& p = traj->traj.points[index];
  const double n = traj->n_atoms;
  *out = catamp_trajectory_point{p.t, p.var_sz, p.var_sz / (0.25 * n * n), p.survival, p.cat_fidelity};
  return CATAMP_OK;
}

catamp_status catamp_trajectory_optimum(const catamp_trajectory* traj, catamp_optimum* out) {
  CATAMP_REQUIRE(traj);
  CATAMP_REQUIRE(out);
  const auto& o = traj->traj.optimum;
  *out = catamp_optimum{o.t_opt, o.peak_var, o.at_boundary ? 1 : 0};
  return CATAMP_OK;
}

void catamp_trajectory_destroy(catamp_trajectory* traj) { delete traj; }

/* ---- MCWF ---- */

uint64_t catamp_trajectory_seed(uint64_t seed_base, uint64_t index) {
  return catamp::trajectory_seed(seed_base, index);
}

catamp_status catamp_mcwf_sample(const catamp_state* state0, double gamma, double t_end,
                                 uint64_t seed, double* jump_times, size_t capacity,
                                 size_t* n_jumps, catamp_state** final_state) {
  CATAMP_REQUIRE(state0);
  CATAMP_REQUIRE(n_jumps);
  if (capacity > 0) CATAMP_REQUIRE(jump_times);
  if (final_state) *final_state = nullptr;
  bool truncated = false;
  const auto status = guard([&] {
    const catamp::DecaySpectrum spectrum(state0->state.n_atoms(), gamma);
    auto rec = catamp::sample_trajectory(state0->state, spectrum, t_end, seed);
    *n_jumps = rec.n_jumps();
    const std::size_t written = std::min(capacity, rec.n_jumps());
    std::copy_n(rec.jump_times.begin(), written, jump_times ? jump_times : nullptr);
    truncated = written < rec.n_jumps();
    if (final_state) *final_state = wrap(std::move(rec.final_state));
  });
  if (status == CATAMP_OK && truncated) {
    return set_error(CATAMP_ERR_BUFFER_TOO_SMALL, "jump time buffer too small");
  }
  return status;
}

catamp_status catamp_mcwf_sample_on_grid(const catamp_state* state0, double gamma,
                                         const double* grid, size_t n_grid, uint64_t seed,
                                         double* mean_sz, double* var_sz,
                                         uint32_t* jumps_so_far) {
  CATAMP_REQUIRE(state0);
  CATAMP_REQUIRE(grid);
  return guard([&] {
    const catamp::DecaySpectrum spectrum(state0->state.n_atoms(), gamma);
    const std::span<const double> times(grid, n_grid);
    auto rec = catamp::sample_trajectory(
        state0->state, spectrum, times, seed, [&](std::size_t k, const catamp::DickeState& psi) {
          if (mean_sz) mean_sz[k] = catamp::mean_sz(psi);
          if (var_sz) var_sz[k] = catamp::variance_sz(psi);
        });
    if (jumps_so_far) {
      std::size_t j = 0;
      for (std::size_t k = 0; k < n_grid; ++k) {
        while (j < rec.jump_times.size() && rec.jump_times[j] <= grid[k]) ++j;
        jumps_so_far[k] = static_cast<uint32_t>(j);
      }
    }
  });
}

catamp_status catamp_mcwf_histogram(const catamp_state* state0, double gamma, double t_end,
                                    size_t n_trajectories, uint64_t seed_base, int workers,
                                    catamp_histogram** out) {
  CATAMP_REQUIRE(state0);
  CATAMP_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    const catamp::DecaySpectrum spectrum(state0->state.n_atoms(), gamma);
    *out = new catamp_histogram{catamp::jump_histogram(state0->state, spectrum, t_end, n_trajectories,
                                                       seed_base, resolve_workers(workers))};
  });
}

size_t catamp_histogram_size(const catamp_histogram* hist) {
  return hist ? hist->hist.probabilities.size() : 0;
}

catamp_status catamp_histogram_bin(const catamp_histogram* hist, size_t n, double* probability,
                                   double* std_error, uint64_t* count) {
  CATAMP_REQUIRE(hist);
  if (n >= hist->hist.probabilities.size()) return set_error(CATAMP_ERR_OUT_OF_RANGE, "histogram bin");
  if (probability) *probability = hist->hist.probabilities[n];
  if (std_error) *std_error = hist->hist.std_errors[n];
  if (count) *count = hist->hist.counts[n];
  return CATAMP_OK;
}

catamp_status catamp_histogram_info(const catamp_histogram* hist, double* t_end,
                                    size_t* n_trajectories) {
  CATAMP_REQUIRE(hist);
  if (t_end) *t_end = hist->hist.t_end;
  if (n_trajectories) *n_trajectories = hist->hist.n_trajectories;
  return CATAMP_OK;
}

catamp_status catamp_detector_precision(const catamp_histogram* hist, double eta, double* out) {
  CATAMP_REQUIRE(hist);
  CATAMP_REQUIRE(out);
  return guard([&] { *out = catamp::detector_precision(hist->hist, eta); });
}

void catamp_histogram_destroy(catamp_histogram* hist) { delete hist; }

catamp_status catamp_mcwf_mean_sz(const catamp_state* state0, double gamma, const double* grid,
                                  size_t n_grid, size_t n_trajectories, uint64_t seed_base,
                                  int workers, double* mean, double* std_error) {
  CATAMP_REQUIRE(state0);
  CATAMP_REQUIRE(grid);
  CATAMP_REQUIRE(mean);
  return guard([&] {
    const catamp::DecaySpectrum spectrum(state0->state.n_atoms(), gamma);
    const auto points = catamp::ensemble_mean_sz(state0->state, spectrum, {grid, n_grid},
                                                 n_trajectories, seed_base, resolve_workers(workers));
    for (std::size_t k = 0; k < points.size(); ++k) {
      mean[k] = points[k].mean;
      if (std_error) std_error[k] = points[k].std_error;
    }
  });
}

/* ---- sweeps ---- */

catamp_status catamp_sweep_run(const catamp_sweep_spec* spec, catamp_sweep** out) {
  CATAMP_REQUIRE(spec);
  CATAMP_REQUIRE(out);
  *out = nullptr;
  if (spec->n_atoms_count > 0) CATAMP_REQUIRE(spec->n_atoms);
  if (spec->chi_count > 0) CATAMP_REQUIRE(spec->chi);
  return guard([&] {
    catamp::SweepSpec s;
    s.n_atoms.assign(spec->n_atoms, spec->n_atoms + spec->n_atoms_count);
    s.chi.assign(spec->chi, spec->chi + spec->chi_count);
    if (spec->theta && spec->theta_count > 0) {
      s.theta.assign(spec->theta, spec->theta + spec->theta_count);
    }
    s.order = to_order(spec->order);
    s.gamma = spec->gamma;
    if (spec->fixed_time) s.t_end = spec->t_end;
    s.grid_points = spec->grid_points > 0 ? spec->grid_points : catamp::kDefaultGridPoints;
    *out = new catamp_sweep{catamp::run_sweep(s, resolve_workers(spec->workers))};
  });
}

size_t catamp_sweep_size(const catamp_sweep* sweep) { return sweep ? sweep->rows.size() : 0; }

catamp_status catamp_sweep_row_at(const catamp_sweep* sweep, size_t index, catamp_sweep_row* out) {
  CATAMP_REQUIRE(sweep);
  CATAMP_REQUIRE(out);
  if (index >= sweep->rows.size()) return set_error(CATAMP_ERR_OUT_OF_RANGE, "sweep row index");
  const auto& r = sweep->rows[index];
  *out = catamp_sweep_row{r.n_atoms,
                          r.chi,
                          r.theta,
                          r.t_opt,
                          r.boundary ? 1 : 0,
                          r.peak_var,
                          r.peak_var_normalized,
                          r.survival,
                          r.cat_fidelity,
                          r.t_c ? 1 : 0,
                          r.t_c.value_or(0.0),
                          r.error.empty() ? 1 : 0,
                          r.error.c_str()};
  return CATAMP_OK;
}

void catamp_sweep_destroy(catamp_sweep* sweep) { delete sweep; }

/* ---- oracle checks ---- */

catamp_status catamp_oracle_check_run(uint64_t seed_base, int workers, size_t mcwf_trajectories,
                                      catamp_check_report** out) {
  CATAMP_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    catamp::OracleCheckOptions options;
    options.seed_base = seed_base;
    options.workers = resolve_workers(workers);
    if (mcwf_trajectories > 0) options.mcwf_trajectories = mcwf_trajectories;
    *out = new catamp_check_report{catamp::run_oracle_checks(options)};
  });
}

size_t catamp_check_report_size(const catamp_check_report* report) {
  return report ? report->checks.size() : 0;
}

catamp_status catamp_check_report_at(const catamp_check_report* report, size_t index,
                                     catamp_check* out) {
  CATAMP_REQUIRE(report);
  CATAMP_REQUIRE(out);
  if (index >= report->checks.size()) return set_error(CATAMP_ERR_OUT_OF_RANGE, "check index");
  const auto& c = report->checks[index];
  *out = catamp_check{c.name.c_str(), c.passed ? 1 : 0, c.deviation, c.tolerance, c.detail.c_str()};
  return CATAMP_OK;
}

void catamp_check_report_destroy(catamp_check_report* report) { delete report; }

}  // extern "C"
