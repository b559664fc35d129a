/*
 * catamp C API: no-click superradiant dynamics of OAT-seeded Dicke states.
 *
 * All objects are opaque handles created by *_create / *_run / *_prepare
 * functions and released with the matching *_destroy (NULL is accepted).
 * Every fallible call returns a catamp_status; on failure a human-readable
 * message is available from catamp_last_error() on the calling thread.
 *
 * Times are in the same units as 1/gamma. Amplitude arrays are ordered by
 * ascending m = -N/2 ... N/2 (index 0 is the dark state).
 */
#ifndef CATAMP_CATAMP_H
#define CATAMP_CATAMP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(CATAMP_BUILDING_LIBRARY)
#    define CATAMP_API __declspec(dllexport)
#  else
#    define CATAMP_API __declspec(dllimport)
#  endif
#else
#  define CATAMP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum catamp_status {
  CATAMP_OK = 0,
  CATAMP_ERR_NULL_POINTER = 1,
  CATAMP_ERR_INVALID_ARGUMENT = 2,
  CATAMP_ERR_SIZING = 3,
  CATAMP_ERR_DEGENERATE_STATE = 4,
  CATAMP_ERR_UNDEFINED_CAT_TIME = 5,
  CATAMP_ERR_NEGATIVE_CAT_TIME = 6,
  CATAMP_ERR_DIMENSION_MISMATCH = 7,
  CATAMP_ERR_NUMERICAL = 8,
  CATAMP_ERR_OUT_OF_RANGE = 9,
  CATAMP_ERR_BUFFER_TOO_SMALL = 10,
  CATAMP_ERR_INTERNAL = 11
} catamp_status;

typedef enum catamp_prep_order {
  CATAMP_ROTATE_THEN_TWIST = 0,
  CATAMP_TWIST_THEN_ROTATE = 1
} catamp_prep_order;

CATAMP_API const char* catamp_version(void);
CATAMP_API const char* catamp_last_error(void);
CATAMP_API const char* catamp_status_name(catamp_status status);
CATAMP_API int catamp_max_atoms(void);
/* Hardware concurrency; used wherever a worker count <= 0 is passed. */
CATAMP_API int catamp_default_workers(void);

/* ---- spin operators ---------------------------------------------------- */

typedef struct catamp_operators catamp_operators;

CATAMP_API catamp_status catamp_operators_create(int n_atoms, catamp_operators** out);
CATAMP_API void catamp_operators_destroy(catamp_operators* ops);
CATAMP_API int catamp_operators_n_atoms(const catamp_operators* ops);
/* Eigenvalues of S_x, ascending. Output buffers shorter than N+1 give
 * BUFFER_TOO_SMALL. */
CATAMP_API catamp_status catamp_operators_sx_spectrum(const catamp_operators* ops, double* out,
                                                      size_t len);

/* ---- Dicke states ------------------------------------------------------ */

typedef struct catamp_state catamp_state;

typedef struct catamp_observables {
  double squared_norm;
  double mean_sz;
  double var_sz;
  double cat_fidelity;
  double cat_phase;
} catamp_observables;

/* |N/2>, then exp(-i theta S_y) and exp(-i chi S_x^2) in the given order. */
CATAMP_API catamp_status catamp_state_prepare(const catamp_operators* ops, double chi,
                                              double theta, catamp_prep_order order,
                                              catamp_state** out);
/* im may be NULL for real amplitudes. len must equal n_atoms + 1. */
CATAMP_API catamp_status catamp_state_from_amplitudes(int n_atoms, const double* re,
                                                      const double* im, size_t len,
                                                      catamp_state** out);
CATAMP_API catamp_status catamp_state_amplitudes(const catamp_state* state, double* re,
                                                 double* im, size_t len);
CATAMP_API int catamp_state_n_atoms(const catamp_state* state);
CATAMP_API catamp_status catamp_state_rotate_y(const catamp_operators* ops,
                                               const catamp_state* state, double theta,
                                               catamp_state** out);
CATAMP_API catamp_status catamp_state_twist(const catamp_operators* ops,
                                            const catamp_state* state, double chi,
                                            catamp_state** out);
/* Unnormalized no-click propagation by dt. */
CATAMP_API catamp_status catamp_state_evolve_noclick(const catamp_state* state, double gamma,
                                                     double dt, catamp_state** out);
CATAMP_API catamp_status catamp_state_observables(const catamp_state* state,
                                                  catamp_observables* out);
CATAMP_API catamp_status catamp_state_populations(const catamp_state* state, double* out,
                                                  size_t len);
CATAMP_API void catamp_state_destroy(catamp_state* state);

/* ---- no-click dynamics ------------------------------------------------- */

typedef struct catamp_optimum {
  double t_opt;
  double peak_var;
  int at_boundary;
} catamp_optimum;

/* Amplitude decay rates |eps_m|, len N+1. */
CATAMP_API catamp_status catamp_decay_spectrum(int n_atoms, double gamma, double* rates,
                                               size_t len);
CATAMP_API catamp_status catamp_survival_probability(const catamp_state* state0, double gamma,
                                                     double t, double* out);
CATAMP_API catamp_status catamp_cat_time(const catamp_state* state0, double gamma,
                                         double* out);
CATAMP_API catamp_status catamp_default_t_max(const catamp_state* state0, double gamma,
                                              double* out);
CATAMP_API catamp_status catamp_find_t_opt(const catamp_state* state0, double gamma,
                                           double t_max, int grid_points, catamp_optimum* out);

typedef struct catamp_trajectory catamp_trajectory;

typedef struct catamp_trajectory_point {
  double t;
  double var_sz;
  double var_sz_normalized;
  double survival;
  double cat_fidelity;
} catamp_trajectory_point;

CATAMP_API catamp_status catamp_trajectory_compute(const catamp_state* state0, double gamma,
                                                   double t_end, int n_samples,
                                                   catamp_trajectory** out);
CATAMP_API size_t catamp_trajectory_size(const catamp_trajectory* traj);
CATAMP_API catamp_status catamp_trajectory_point_at(const catamp_trajectory* traj, size_t index,
                                                    catamp_trajectory_point* out);
CATAMP_API catamp_status catamp_trajectory_optimum(const catamp_trajectory* traj,
                                                   catamp_optimum* out);
CATAMP_API void catamp_trajectory_destroy(catamp_trajectory* traj);

/* ---- Monte-Carlo wavefunction ------------------------------------------ */

CATAMP_API uint64_t catamp_trajectory_seed(uint64_t seed_base, uint64_t index);

/* One trajectory to t_end. Jump times are written up to `capacity`;
 * *n_jumps always receives the true count (BUFFER_TOO_SMALL if it exceeds
 * capacity). final_state may be NULL. */
CATAMP_API catamp_status catamp_mcwf_sample(const catamp_state* state0, double gamma,
                                            double t_end, uint64_t seed, double* jump_times,
                                            size_t capacity, size_t* n_jumps,
                                            catamp_state** final_state);

/* One trajectory reported on an ascending grid: normalized-state <S_z>,
 * Var S_z, and the number of jumps so far. Output pointers may be NULL. */
CATAMP_API catamp_status catamp_mcwf_sample_on_grid(const catamp_state* state0, double gamma,
                                                    const double* grid, size_t n_grid,
                                                    uint64_t seed, double* mean_sz,
                                                    double* var_sz, uint32_t* jumps_so_far);

typedef struct catamp_histogram catamp_histogram;

CATAMP_API catamp_status catamp_mcwf_histogram(const catamp_state* state0, double gamma,
                                               double t_end, size_t n_trajectories,
                                               uint64_t seed_base, int workers,
                                               catamp_histogram** out);
/* Number of bins, N+1 (n = 0..N jumps). */
CATAMP_API size_t catamp_histogram_size(const catamp_histogram* hist);
CATAMP_API catamp_status catamp_histogram_bin(const catamp_histogram* hist, size_t n,
                                              double* probability, double* std_error,
                                              uint64_t* count);
CATAMP_API catamp_status catamp_histogram_info(const catamp_histogram* hist, double* t_end,
                                               size_t* n_trajectories);
CATAMP_API catamp_status catamp_detector_precision(const catamp_histogram* hist, double eta,
                                                   double* out);
CATAMP_API void catamp_histogram_destroy(catamp_histogram* hist);

CATAMP_API catamp_status catamp_mcwf_mean_sz(const catamp_state* state0, double gamma,
                                             const double* grid, size_t n_grid,
                                             size_t n_trajectories, uint64_t seed_base,
                                             int workers, double* mean, double* std_error);

/* ---- parameter sweeps -------------------------------------------------- */

typedef struct catamp_sweep_spec {
  const int* n_atoms;
  size_t n_atoms_count;
  const double* chi;
  size_t chi_count;
  const double* theta; /* NULL or count 0: theta = 0 only */
  size_t theta_count;
  catamp_prep_order order;
  double gamma;
  int fixed_time; /* nonzero: evaluate at t_end instead of t_opt */
  double t_end;
  int grid_points; /* <= 0: 512 */
  int workers;     /* <= 0: catamp_default_workers() */
} catamp_sweep_spec;

typedef struct catamp_sweep catamp_sweep;

typedef struct catamp_sweep_row {
  int n_atoms;
  double chi;
  double theta;
  double t_opt;
  int boundary;
  double peak_var;
  double peak_var_normalized;
  double survival;
  double cat_fidelity;
  int has_t_c;
  double t_c;
  int ok;
  const char* error; /* "" when ok; owned by the sweep handle */
} catamp_sweep_row;

/* Rows sorted by N, chi, theta. A failing grid point does not fail the call;
 * it is reported with ok == 0. */
CATAMP_API catamp_status catamp_sweep_run(const catamp_sweep_spec* spec, catamp_sweep** out);
CATAMP_API size_t catamp_sweep_size(const catamp_sweep* sweep);
CATAMP_API catamp_status catamp_sweep_row_at(const catamp_sweep* sweep, size_t index,
                                             catamp_sweep_row* out);
CATAMP_API void catamp_sweep_destroy(catamp_sweep* sweep);

/* ---- oracle checks ----------------------------------------------------- */

typedef struct catamp_check_report catamp_check_report;

typedef struct catamp_check {
  const char* name;
  int passed;
  double deviation;
  double tolerance;
  const char* detail;
} catamp_check;

CATAMP_API catamp_status catamp_oracle_check_run(uint64_t seed_base, int workers,
                                                 size_t mcwf_trajectories,
                                                 catamp_check_report** out);
CATAMP_API size_t catamp_check_report_size(const catamp_check_report* report);
CATAMP_API catamp_status catamp_check_report_at(const catamp_check_report* report, size_t index,
                                                catamp_check* out);
CATAMP_API void catamp_check_report_destroy(catamp_check_report* report);

#ifdef __cplusplus
}
#endif

#endif /* CATAMP_CATAMP_H */
