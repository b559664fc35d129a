// Exercises the shared library strictly through its C header.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "catamp/catamp.h"

namespace {

struct OpsHandle {
  catamp_operators* p = nullptr;
  explicit OpsHandle(int n) { REQUIRE(catamp_operators_create(n, &p) == CATAMP_OK); }
  ~OpsHandle() { catamp_operators_destroy(p); }
};

struct StateHandle {
  catamp_state* p = nullptr;
  ~StateHandle() { catamp_state_destroy(p); }
};

}  // namespace

TEST_CASE("library metadata") {
  CHECK(std::string(catamp_version()) == "1.0.0");
  CHECK(catamp_max_atoms() == 400);
  CHECK(catamp_default_workers() >= 1);
  CHECK(std::string(catamp_status_name(CATAMP_OK)) == "ok");
  CHECK(std::string(catamp_status_name(static_cast<catamp_status>(999))) == "unknown status");
}

TEST_CASE("operator handles report sizing errors") {
  catamp_operators* ops = nullptr;
  CHECK(catamp_operators_create(0, &ops) == CATAMP_ERR_SIZING);
  CHECK(ops == nullptr);
  CHECK(std::strlen(catamp_last_error()) > 0);
  CHECK(catamp_operators_create(401, &ops) == CATAMP_ERR_SIZING);
  CHECK(catamp_operators_create(4, nullptr) == CATAMP_ERR_NULL_POINTER);
  catamp_operators_destroy(nullptr);

  OpsHandle h(4);
  CHECK(catamp_operators_n_atoms(h.p) == 4);
  std::vector<double> spec(5);
  CHECK(catamp_operators_sx_spectrum(h.p, spec.data(), spec.size()) == CATAMP_OK);
  CHECK(spec == std::vector<double>{-2, -1, 0, 1, 2});
  CHECK(catamp_operators_sx_spectrum(h.p, spec.data(), 3) == CATAMP_ERR_BUFFER_TOO_SMALL);
}

TEST_CASE("prepared cat state via the C API") {
  OpsHandle ops(10);
  StateHandle s;
  REQUIRE(catamp_state_prepare(ops.p, std::acos(0.0), 0.0, CATAMP_TWIST_THEN_ROTATE, &s.p) == CATAMP_OK);
  catamp_observables obs{};
  REQUIRE(catamp_state_observables(s.p, &obs) == CATAMP_OK);
  CHECK(obs.cat_fidelity == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(obs.var_sz == doctest::Approx(25.0).epsilon(1e-9));
  CHECK(obs.squared_norm == doctest::Approx(1.0));
  CHECK(catamp_state_n_atoms(s.p) == 10);

  std::vector<double> re(11), im(11), pops(11);
  CHECK(catamp_state_amplitudes(s.p, re.data(), im.data(), 11) == CATAMP_OK);
  CHECK(catamp_state_amplitudes(s.p, re.data(), im.data(), 5) == CATAMP_ERR_BUFFER_TOO_SMALL);
  CHECK(catamp_state_populations(s.p, pops.data(), 11) == CATAMP_OK);
  CHECK(pops[0] == doctest::Approx(0.5));
  CHECK(pops[10] == doctest::Approx(0.5));
}

TEST_CASE("preparation errors map to status codes") {
  OpsHandle ops(10);
  catamp_state* s = nullptr;
  CHECK(catamp_state_prepare(ops.p, -1.0, 0.0, CATAMP_TWIST_THEN_ROTATE, &s) == CATAMP_ERR_INVALID_ARGUMENT);
  CHECK(s == nullptr);
  CHECK(catamp_state_prepare(nullptr, 0.1, 0.0, CATAMP_TWIST_THEN_ROTATE, &s) == CATAMP_ERR_NULL_POINTER);
  CHECK(catamp_state_prepare(ops.p, 0.1, 0.0, static_cast<catamp_prep_order>(7), &s) ==
        CATAMP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("states from amplitudes and no-click evolution") {
  const double re[3] = {0.0, 0.0, 1.0};
  StateHandle top;
  REQUIRE(catamp_state_from_amplitudes(2, re, nullptr, 3, &top.p) == CATAMP_OK);
  StateHandle later;
  REQUIRE(catamp_state_evolve_noclick(top.p, 1.0, 0.25, &later.p) == CATAMP_OK);
  catamp_observables obs{};
  REQUIRE(catamp_state_observables(later.p, &obs) == CATAMP_OK);
  CHECK(obs.squared_norm == doctest::Approx(std::exp(-0.5)));
  double s = 0;
  CHECK(catamp_survival_probability(top.p, 1.0, 0.25, &s) == CATAMP_OK);
  CHECK(s == doctest::Approx(std::exp(-0.5)));

  catamp_state* bad = nullptr;
  CHECK(catamp_state_from_amplitudes(2, re, nullptr, 2, &bad) == CATAMP_ERR_DIMENSION_MISMATCH);
  CHECK(catamp_state_from_amplitudes(2, nullptr, nullptr, 3, &bad) == CATAMP_ERR_NULL_POINTER);
  const double zero[3] = {0, 0, 0};
  StateHandle z;
  REQUIRE(catamp_state_from_amplitudes(2, zero, nullptr, 3, &z.p) == CATAMP_OK);
  CHECK(catamp_state_observables(z.p, &obs) == CATAMP_ERR_DEGENERATE_STATE);
  CHECK(catamp_state_evolve_noclick(top.p, 0.0, 0.1, &bad) == CATAMP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("rotation and twist handles compose") {
  OpsHandle ops(6);
  StateHandle base, rotated, twisted, direct;
  REQUIRE(catamp_state_prepare(ops.p, 0.0, 0.0, CATAMP_TWIST_THEN_ROTATE, &base.p) == CATAMP_OK);
  REQUIRE(catamp_state_twist(ops.p, base.p, 0.3, &twisted.p) == CATAMP_OK);
  REQUIRE(catamp_state_rotate_y(ops.p, twisted.p, 0.2, &rotated.p) == CATAMP_OK);
  REQUIRE(catamp_state_prepare(ops.p, 0.3, 0.2, CATAMP_TWIST_THEN_ROTATE, &direct.p) == CATAMP_OK);
  std::vector<double> a(7), b(7), ai(7), bi(7);
  catamp_state_amplitudes(rotated.p, a.data(), ai.data(), 7);
  catamp_state_amplitudes(direct.p, b.data(), bi.data(), 7);
  for (int i = 0; i < 7; ++i) {
    CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    CHECK(ai[i] == doctest::Approx(bi[i]).epsilon(1e-12));
  }
  OpsHandle other(5);
  catamp_state* out = nullptr;
  CHECK(catamp_state_twist(other.p, base.p, 0.3, &out) == CATAMP_ERR_DIMENSION_MISMATCH);
}

TEST_CASE("decay spectrum and cat time") {
  std::vector<double> rates(5);
  REQUIRE(catamp_decay_spectrum(4, 1.0, rates.data(), 5) == CATAMP_OK);
  CHECK(rates == std::vector<double>{0, 2, 3, 3, 2});
  CHECK(catamp_decay_spectrum(4, 1.0, rates.data(), 4) == CATAMP_ERR_BUFFER_TOO_SMALL);

  OpsHandle odd(11);
  StateHandle s;
  REQUIRE(catamp_state_prepare(odd.p, 0.2, 0.0, CATAMP_TWIST_THEN_ROTATE, &s.p) == CATAMP_OK);
  double tc = 0;
  CHECK(catamp_cat_time(s.p, 1.0, &tc) == CATAMP_ERR_UNDEFINED_CAT_TIME);
  const double re[3] = {1.0, 0.0, 0.5};
  StateHandle heavy;
  REQUIRE(catamp_state_from_amplitudes(2, re, nullptr, 3, &heavy.p) == CATAMP_OK);
  CHECK(catamp_cat_time(heavy.p, 1.0, &tc) == CATAMP_ERR_NEGATIVE_CAT_TIME);
}

TEST_CASE("trajectory handle and optimum") {
  OpsHandle ops(20);
  StateHandle s;
  REQUIRE(catamp_state_prepare(ops.p, 0.3, 0.0, CATAMP_TWIST_THEN_ROTATE, &s.p) == CATAMP_OK);
  double t_max = 0;
  REQUIRE(catamp_default_t_max(s.p, 1.0, &t_max) == CATAMP_OK);
  catamp_trajectory* traj = nullptr;
  REQUIRE(catamp_trajectory_compute(s.p, 1.0, t_max, 50, &traj) == CATAMP_OK);
  CHECK(catamp_trajectory_size(traj) == 50);
  catamp_trajectory_point p{};
  CHECK(catamp_trajectory_point_at(traj, 49, &p) == CATAMP_OK);
  CHECK(p.t == doctest::Approx(t_max));
  CHECK(p.var_sz_normalized == doctest::Approx(p.var_sz / 100.0));
  CHECK(catamp_trajectory_point_at(traj, 50, &p) == CATAMP_ERR_OUT_OF_RANGE);
  catamp_optimum a{}, b{};
  CHECK(catamp_trajectory_optimum(traj, &a) == CATAMP_OK);
  CHECK(catamp_find_t_opt(s.p, 1.0, t_max, 512, &b) == CATAMP_OK);
  CHECK(a.t_opt == b.t_opt);
  catamp_trajectory_destroy(traj);
  CHECK(catamp_find_t_opt(s.p, 1.0, t_max, 4, &b) == CATAMP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("MCWF sampling through the C API") {
  OpsHandle ops(4);
  StateHandle top;
  REQUIRE(catamp_state_prepare(ops.p, 0.0, 0.0, CATAMP_TWIST_THEN_ROTATE, &top.p) == CATAMP_OK);
  double times[4];
  size_t n = 0;
  catamp_state* fin = nullptr;
  REQUIRE(catamp_mcwf_sample(top.p, 1.0, 50.0, 5, times, 4, &n, &fin) == CATAMP_OK);
  CHECK(n == 4);
  catamp_observables obs{};
  catamp_state_observables(fin, &obs);
  CHECK(obs.mean_sz == doctest::Approx(-2.0));
  catamp_state_destroy(fin);
  CHECK(catamp_mcwf_sample(top.p, 1.0, 50.0, 5, times, 2, &n, nullptr) == CATAMP_ERR_BUFFER_TOO_SMALL);
  CHECK(n == 4);

  const double grid[3] = {0.0, 0.5, 50.0};
  double mean[3];
  uint32_t jumps[3];
  REQUIRE(catamp_mcwf_sample_on_grid(top.p, 1.0, grid, 3, 5, mean, nullptr, jumps) == CATAMP_OK);
  CHECK(mean[0] == 2.0);
  CHECK(jumps[2] == 4);

  catamp_histogram* h = nullptr;
  REQUIRE(catamp_mcwf_histogram(top.p, 1.0, 0.3, 500, 9, 2, &h) == CATAMP_OK);
  CHECK(catamp_histogram_size(h) == 5);
  double total = 0;
  for (size_t k = 0; k < 5; ++k) {
    double p = 0, se = 0;
    uint64_t c = 0;
    REQUIRE(catamp_histogram_bin(h, k, &p, &se, &c) == CATAMP_OK);
    total += p;
  }
  CHECK(total == doctest::Approx(1.0));
  double prec = 0;
  CHECK(catamp_detector_precision(h, 1.0, &prec) == CATAMP_OK);
  CHECK(prec == doctest::Approx(1.0));
  CHECK(catamp_detector_precision(h, 2.0, &prec) == CATAMP_ERR_INVALID_ARGUMENT);
  double t_end = 0;
  size_t n_traj = 0;
  CHECK(catamp_histogram_info(h, &t_end, &n_traj) == CATAMP_OK);
  CHECK(n_traj == 500);
  CHECK(catamp_histogram_bin(h, 5, &prec, nullptr, nullptr) == CATAMP_ERR_OUT_OF_RANGE);
  catamp_histogram_destroy(h);

  double m[3], se[3];
  CHECK(catamp_mcwf_mean_sz(top.p, 1.0, grid, 3, 200, 1, 1, m, se) == CATAMP_OK);
  CHECK(m[0] == 2.0);
  CHECK(m[2] == doctest::Approx(-2.0));
  CHECK(catamp_trajectory_seed(1, 2) == catamp_trajectory_seed(1, 2));
}

TEST_CASE("sweep through the C API keeps failing rows") {
  const int ns[2] = {20, 1000};
  const double chis[2] = {0.2, 0.1};
  catamp_sweep_spec spec{};
  spec.n_atoms = ns;
  spec.n_atoms_count = 2;
  spec.chi = chis;
  spec.chi_count = 2;
  spec.order = CATAMP_TWIST_THEN_ROTATE;
  spec.gamma = 1.0;
  spec.workers = 2;
  catamp_sweep* sw = nullptr;
  REQUIRE(catamp_sweep_run(&spec, &sw) == CATAMP_OK);
  REQUIRE(catamp_sweep_size(sw) == 4);
  catamp_sweep_row r{};
  REQUIRE(catamp_sweep_row_at(sw, 0, &r) == CATAMP_OK);
  CHECK(r.ok);
  CHECK(r.chi == 0.1);
  CHECK(std::string(r.error).empty());
  REQUIRE(catamp_sweep_row_at(sw, 3, &r) == CATAMP_OK);
  CHECK_FALSE(r.ok);
  CHECK(r.n_atoms == 1000);
  CHECK(std::string(r.error).size() > 0);
  CHECK(catamp_sweep_row_at(sw, 4, &r) == CATAMP_ERR_OUT_OF_RANGE);
  catamp_sweep_destroy(sw);

  spec.chi_count = 0;
  CHECK(catamp_sweep_run(&spec, &sw) == CATAMP_ERR_INVALID_ARGUMENT);
  CHECK(catamp_sweep_run(nullptr, &sw) == CATAMP_ERR_NULL_POINTER);
}

TEST_CASE("oracle report through the C API") {
  catamp_check_report* rep = nullptr;
  REQUIRE(catamp_oracle_check_run(12345, 2, 1000, &rep) == CATAMP_OK);
  const size_t n = catamp_check_report_size(rep);
  CHECK(n >= 6);
  for (size_t i = 0; i < n; ++i) {
    catamp_check c{};
    REQUIRE(catamp_check_report_at(rep, i, &c) == CATAMP_OK);
    CAPTURE(c.name);
    CHECK(std::strlen(c.name) > 0);
  }
  catamp_check c{};
  CHECK(catamp_check_report_at(rep, n, &c) == CATAMP_ERR_OUT_OF_RANGE);
  catamp_check_report_destroy(rep);
}
