// Acceptance gate: one PASS/FAIL line per criterion.
//   acceptance          run every criterion
//   acceptance 3 7      run the listed criteria
// Exit status is nonzero if any selected criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "catamp/dicke.hpp"
#include "catamp/error.hpp"
#include "catamp/mcwf.hpp"
#include "catamp/noclick.hpp"
#include "catamp/oat.hpp"
#include "catamp/oracle.hpp"
#include "catamp/parallel.hpp"

using namespace catamp;

namespace {

struct Verdict {
  bool passed = false;
  std::string summary;
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;  // <= 0: no runtime budget
  std::function<Verdict()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

int workers() { return default_worker_count(); }

DickeState prepared(const SpinOperators& ops, double chi, double theta = 0.0,
                    PrepOrder order = PrepOrder::TwistThenRotate) {
  return prepare(ops, {ops.n_atoms(), chi, theta, order});
}

OptimalTime optimum(const DickeState& psi, const DecaySpectrum& spec) {
  return find_t_opt(psi, spec, default_t_max(psi, spec));
}

// ---- 1 ----------------------------------------------------------------------
Verdict spectrum_exactness() {
  double worst = 0.0;
  bool min_ok = true;
  std::string mins;
  for (int n : {2, 10, 100, 101}) {
    const SpinOperators ops(n);
    const DecaySpectrum spec(n, 1.0);
    Eigen::VectorXd fast = spec.rates();
    std::sort(fast.data(), fast.data() + fast.size());
    worst = std::max(worst, (fast - oracle::brute_force_decay_rates(ops, 1.0)).cwiseAbs().maxCoeff());
    double min_nonzero = INFINITY;
    for (Eigen::Index k = 1; k <= n; ++k) min_nonzero = std::min(min_nonzero, spec.rate(k));
    const double expected = 0.5 * n;
    min_ok = min_ok && min_nonzero == expected && spec.rate(n) == expected && spec.rate(1) == expected;
    mins += fmt(" N=%d:%g", n, min_nonzero);
  }
  return {worst <= 1e-10 && min_ok,
          fmt("max |rate - brute| = %.3g (tol 1e-10); min nonzero rate (want N/2 at m=N/2, -N/2+1):",
              worst) + mins};
}

// ---- 2 ----------------------------------------------------------------------
Verdict oracle_equivalence() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dt_dist(0.0, 2.0);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  int cases = 0;
  for (int n = 1; n <= 12; ++n) {
    const SpinOperators ops(n);
    const DecaySpectrum spec(n, 1.0);
    const Eigen::MatrixXcd h = oracle::noclick_hamiltonian(ops, 1.0);
    for (int s = 0; s < 100; ++s) {
      Vector v(n + 1);
      for (Eigen::Index i = 0; i <= n; ++i) v[i] = {gauss(rng), gauss(rng)};
      const DickeState psi = DickeState(n, v).normalized();
      const double dt = dt_dist(rng);
      const Vector fast = evolve_noclick(psi, spec, dt).amplitudes();
      worst = std::max(worst, (fast - oracle::expm_apply(h, psi.amplitudes(), dt)).cwiseAbs().maxCoeff());
      ++cases;
    }
  }
  return {worst <= 1e-10, fmt("%d states, N = 1..12: max amplitude deviation %.3g (tol 1e-10)", cases, worst)};
}

// ---- 3 ----------------------------------------------------------------------
Verdict operating_point() {
  const SpinOperators ops(100);
  const DecaySpectrum spec(100, 1.0);
  const auto psi = prepared(ops, 0.2);
  const auto opt = optimum(psi, spec);
  const double surv = survival_probability(psi, spec, opt.t_opt);
  const double fid = cat_fidelity(evolve_noclick(psi, spec, opt.t_opt));
  const bool s_ok = std::abs(surv - 0.073) <= 0.005;
  const bool f_ok = std::abs(fid - 0.90) <= 0.02;
  const bool t_ok = std::abs(opt.t_opt - 0.033) <= 0.002;
  return {s_ok && f_ok && t_ok,
          fmt("survival %.4f (0.073 +- 0.005) %s; fidelity %.4f (0.90 +- 0.02) %s; t_opt %.5f (0.033 +- 0.002) %s",
              surv, s_ok ? "ok" : "MISS", fid, f_ok ? "ok" : "MISS", opt.t_opt, t_ok ? "ok" : "MISS")};
}

// ---- 4 ----------------------------------------------------------------------
Verdict cat_time_agreement() {
  const DecaySpectrum* unused = nullptr;
  (void)unused;
  double worst = 0.0;
  int worst_n = 0;
  for (int n = 20; n <= 100; n += 2) {
    const SpinOperators ops(n);
    const DecaySpectrum spec(n, 1.0);
    const auto psi = prepared(ops, 0.1);
    const double tc = cat_time(psi, spec);
    const double rel = std::abs(optimum(psi, spec).t_opt - tc) / tc;
    if (rel > worst) worst = rel, worst_n = n;
  }
  const SpinOperators ops(140);
  const DecaySpectrum spec(140, 1.0);
  const auto psi = prepared(ops, 0.2);
  const double tc = cat_time(psi, spec);
  const double t_opt = optimum(psi, spec).t_opt;
  const bool first = worst <= 0.05;
  const bool second = tc < 0.5 * t_opt;
  return {first && second,
          fmt("chi=0.1, even N 20..100: max |t_opt-t_c|/t_c = %.3g at N=%d (tol 0.05) %s; "
              "N=140 chi=0.2: t_c = %.5f, t_opt/2 = %.5f %s",
              worst, worst_n, first ? "ok" : "MISS", tc, 0.5 * t_opt, second ? "ok" : "MISS")};
}

// ---- 5 ----------------------------------------------------------------------
Verdict mcwf_norm_identity() {
  const SpinOperators ops(100);
  const DecaySpectrum spec(100, 1.0);
  const auto psi = prepared(ops, 0.2);
  const double t = optimum(psi, spec).t_opt;
  const std::size_t n_traj = 10000;
  const auto hist = jump_histogram(psi, spec, t, n_traj, 5005, workers());
  const double p = survival_probability(psi, spec, t);
  const double sigma = std::sqrt(p * (1.0 - p) / n_traj);
  const double z = std::abs(hist.probabilities[0] - p) / sigma;
  return {z <= 3.0, fmt("zero-jump fraction %.4f vs survival %.4f at t_opt=%.5f: %.2f sigma (tol 3)",
                        hist.probabilities[0], p, t, z)};
}

// ---- 6 ----------------------------------------------------------------------
Verdict mcwf_lindblad() {
  const int n = 10;
  const DecaySpectrum spec(n, 1.0);
  std::vector<double> grid;
  for (int k = 1; k <= 20; ++k) grid.push_back(0.05 * k);
  const auto top = DickeState::top(n);
  const auto mc = ensemble_mean_sz(top, spec, grid, 20000, 6006, workers());
  std::vector<double> full{0.0};
  full.insert(full.end(), grid.begin(), grid.end());
  const auto rho = oracle::lindblad_collective(oracle::DensityMatrix::pure(top.amplitudes()), 1.0, full);
  double worst_z = 0.0;
  int worst_k = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double ref = 0.0;
    for (Eigen::Index i = 0; i <= n; ++i) ref += rho[k + 1].rho(i, i).real() * (i - 0.5 * n);
    // 1e-6 floor covers the reference solver's own tolerance.
    const double z = std::abs(mc[k].mean - ref) / (mc[k].std_error + 1e-6 / 3.0);
    if (z > worst_z) worst_z = z, worst_k = static_cast<int>(k);
  }
  return {worst_z <= 3.0, fmt("N=10, 2e4 trajectories, 20 times on (0, 1]: worst %.2f sigma at t=%.2f (tol 3)",
                              worst_z, grid[worst_k])};
}

// ---- 7 ----------------------------------------------------------------------
double elimination_deviation(int n, double ratio, int cutoff) {
  const double gamma = 1.0;
  const double kappa = ratio * ratio * n * gamma;  // kappa / (sqrt(N) g) = ratio with g^2 = gamma kappa
  const double g = std::sqrt(gamma * kappa);
  std::vector<double> grid;
  for (int k = 0; k <= 20; ++k) grid.push_back(2.0 / gamma * k / 20.0);
  const auto top = DickeState::top(n);
  // Raise the photon cutoff until the cutoff+1 re-check accepts it.
  oracle::TcResult tc;
  for (;; ++cutoff) {
    try {
      tc = oracle::tavis_cummings_lindblad({n, g, kappa, 0.0, cutoff}, top, grid);
      break;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Numerical || cutoff >= 6) throw;
    }
  }
  const auto eff = oracle::populations_of(
      oracle::lindblad_collective(oracle::DensityMatrix::pure(top.amplitudes()), gamma, grid));
  // Relative L1 deviation of the population vector (each vector sums to 1).
  return oracle::max_l1_distance(tc.atomic_populations, eff);
}

Verdict adiabatic_elimination() {
  bool ok = true;
  std::string detail;
  for (int n : {2, 4}) {
    const double d5 = elimination_deviation(n, 5.0, 3);
    const double d10 = elimination_deviation(n, 10.0, 3);
    const double d20 = elimination_deviation(n, 20.0, 3);
    const double d40 = elimination_deviation(n, 40.0, 3);
    const bool within = d20 <= 0.05;
    const bool monotone = d5 > d10 && d10 > d20 && d20 > d40;
    ok = ok && within && monotone;
    detail += fmt("N=%d: dev(ratio 5, 10, 20, 40) = %.4f, %.4f, %.4f, %.4f %s%s; ", n, d5, d10, d20, d40,
                  within ? "" : "[>5%]", monotone ? "" : "[not monotone]");
  }
  return {ok, detail + "tol 0.05 at ratio 20"};
}

// ---- 8 ----------------------------------------------------------------------
Verdict oat_cat_identity() {
  double worst = 0.0;
  for (int n : {2, 4, 10, 100}) {
    const SpinOperators ops(n);
    worst = std::max(worst, std::abs(cat_fidelity(prepared(ops, std::numbers::pi / 2)) - 1.0));
  }
  const SpinOperators ops(101);
  const double ground = std::abs(prepared(ops, 0.2)[0]);
  return {worst <= 1e-9 && ground <= 1e-12,
          fmt("even N {2,4,10,100}: max |F-1| = %.3g (tol 1e-9); N=101 |c_-N/2| = %.3g (tol 1e-12)", worst,
              ground)};
}

// ---- 9 ----------------------------------------------------------------------
Verdict parity_rotation() {
  const SpinOperators ops100(100);
  const DecaySpectrum spec100(100, 1.0);
  const double t_lo = optimum(prepared(ops100, 0.2), spec100).t_opt;
  const double t_hi = 1.5 * t_lo;
  const SpinOperators ops(101);
  const DecaySpectrum spec(101, 1.0);
  const int samples = 401;
  auto scan = [&](const DickeState& psi) {
    std::vector<double> v(samples);
    for (int k = 0; k < samples; ++k) v[k] = noclick_variance(psi, spec, t_lo + (t_hi - t_lo) * k / (samples - 1));
    return v;
  };

  const auto flat = scan(prepared(ops, 0.2, 0.0));
  double worst_drop = 0.0;
  for (int k = 1; k < samples; ++k) worst_drop = std::max(worst_drop, flat[k - 1] - flat[k]);
  const bool first = worst_drop <= 1e-9 * flat.back();

  auto interior_peak = [&](PrepOrder order, double& t_peak) {
    const auto psi = prepared(ops, 0.2, 0.1, order);
    const auto v = scan(psi);
    const auto it = std::max_element(v.begin(), v.end());
    const auto k = static_cast<int>(it - v.begin());
    const auto global = find_t_opt(psi, spec, default_t_max(psi, spec));
    t_peak = global.t_opt;
    return k > 0 && k < samples - 1;
  };
  double t_tr = 0, t_rt = 0;
  const bool second = interior_peak(PrepOrder::TwistThenRotate, t_tr);
  const bool other = interior_peak(PrepOrder::RotateThenTwist, t_rt);
  return {first && second,
          fmt("window [%.5f, %.5f]; theta=0: largest drop %.3g %s; theta=0.1: interior max %s "
              "(peak at %.5f; rotate-then-twist peak at %.5f, interior %s)",
              t_lo, t_hi, worst_drop, first ? "ok" : "MISS", second ? "yes" : "no, MISS", t_tr, t_rt,
              other ? "yes" : "no")};
}

// ---- 10 ---------------------------------------------------------------------
Verdict detector_precision_check() {
  const SpinOperators ops(100);
  const DecaySpectrum spec(100, 1.0);
  const auto psi = prepared(ops, 0.2);
  const double t = optimum(psi, spec).t_opt;
  const auto hist = jump_histogram(psi, spec, t, 10000, 1010, workers());
  const double prec = detector_precision(hist, 0.9);
  return {std::abs(prec - 0.93) <= 0.01,
          fmt("precision(eta=0.9) = %.4f at t_opt=%.5f, 1e4 trajectories (0.93 +- 0.01)", prec, t)};
}

// ---- 11 ---------------------------------------------------------------------
std::string read_all(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("catamp_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  struct Job {
    const char* name;
    const char* args;
  };
  const Job jobs[] = {
      {"sweep", "sweep -n 10:80:2 --chi 0:0.5:0.025 --theta 0,0.05 -q"},
      {"mcwf", "mcwf -n 100 --chi 0.2 --trajectories 4000 --seed 77 --eta 0.5,0.9 -q"},
  };
  bool ok = true;
  std::string detail;
  for (const auto& job : jobs) {
    std::vector<std::string> outputs;
    for (const char* w : {"1", "8", "1", "8"}) {
      const fs::path target = dir / (std::string(job.name) + "_" + w + "_" + std::to_string(outputs.size()) + ".csv");
      const std::string cmd = "'" CATAMP_CLI_PATH "' " + std::string(job.args) + " -j " + w + " -o '" +
                              target.string() + "'";
      const int status = std::system(cmd.c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        ok = false;
        detail += std::string(job.name) + ": CLI exit " + std::to_string(WEXITSTATUS(status)) + "; ";
        break;
      }
      std::string text = read_all(target);
      const fs::path extra = target.parent_path() / (target.stem().string() + "_precision.csv");
      if (fs::exists(extra)) text += read_all(extra);
      outputs.push_back(text);
    }
    bool same = outputs.size() == 4 && !outputs[0].empty();
    for (const auto& o : outputs) same = same && o == outputs[0];
    ok = ok && same;
    detail += fmt("%s: %zu bytes x4 runs (workers 1, 8, 1, 8) %s; ", job.name,
                  outputs.empty() ? std::size_t{0} : outputs[0].size(), same ? "identical" : "DIFFER");
  }
  fs::remove_all(dir);
  return {ok, detail};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {1, "spectrum exactness", 1, spectrum_exactness},
      {2, "oracle equivalence", 10, oracle_equivalence},
      {3, "operating point", 5, operating_point},
      {4, "cat-time agreement", 30, cat_time_agreement},
      {5, "MCWF zero-jump vs norm", 120, mcwf_norm_identity},
      {6, "MCWF vs master equation", 120, mcwf_lindblad},
      {7, "adiabatic elimination", 60, adiabatic_elimination},
      {8, "OAT cat identity and parity", 5, oat_cat_identity},
      {9, "parity and rotation", 5, parity_rotation},
      {10, "detector precision", 120, detector_precision_check},
      {11, "determinism across workers", 0, determinism},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const auto& c : criteria()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = c.budget_s <= 0 || secs <= c.budget_s;
    const bool pass = v.passed && in_budget;
    if (!pass) ++failures;
    std::string timing = c.budget_s > 0 ? fmt("%.2f s (budget %g s%s)", secs, c.budget_s, in_budget ? "" : ", EXCEEDED")
                                        : fmt("%.2f s", secs);
    std::printf("%s [%2d] %s | %s | %s\n", pass ? "PASS" : "FAIL", c.id, c.title, v.summary.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
