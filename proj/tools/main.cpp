// catamp command-line front end. Talks to the simulator only through the C API.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "handles.hpp"
#include "table.hpp"

namespace fs = std::filesystem;
using namespace catamp_cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitPartial = 3;

constexpr std::size_t kMcwfTrajectories = 10000;
constexpr std::size_t kOracleTrajectories = 4000;
constexpr std::uint64_t kOracleSeed = 12345;
constexpr double kFixedTimeS2 = 0.033;
constexpr double kWindowS1 = 0.066;
constexpr int kFig2Trajectories = 10;

struct Flags {
  std::string config_path;
  std::optional<std::string> n_atoms, chi, theta, eta, t_end, order, output, format;
  std::optional<double> gamma;
  std::optional<std::size_t> trajectories;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers, samples, grid_points;
  bool to_stdout = false;
  bool quiet = false;
};

struct Context {
  RunConfig cfg;
  bool to_stdout = false;
  bool quiet = false;

  int workers() const { return cfg.worker_count > 0 ? cfg.worker_count : catamp_default_workers(); }
  catamp_prep_order order() const {
    return cfg.order == "rotate_then_twist" ? CATAMP_ROTATE_THEN_TWIST : CATAMP_TWIST_THEN_ROTATE;
  }
  void note(const std::string& msg) const {
    if (!quiet) std::cerr << "catamp: " << msg << '\n';
  }
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("-c,--config", f.config_path, "JSON config file");
  cmd->add_option("-n,--n-atoms", f.n_atoms, "atom number(s): N, list a,b or range start:stop:step");
  cmd->add_option("--chi", f.chi, "twisting strength(s)");
  cmd->add_option("--theta", f.theta, "rotation angle(s) about y");
  cmd->add_option("--order", f.order, "twist_then_rotate | rotate_then_twist");
  cmd->add_option("--gamma", f.gamma, "collective decay rate");
  cmd->add_option("--t-end", f.t_end, "evaluation time or 'auto'");
  cmd->add_option("--trajectories", f.trajectories, "MCWF trajectory count");
  cmd->add_option("--seed", f.seed, "seed_base for stochastic runs");
  cmd->add_option("--eta", f.eta, "detector efficiencies");
  cmd->add_option("-o,--output", f.output, "output file (directory for 'figure')");
  cmd->add_option("--format", f.format, "csv | json");
  cmd->add_option("-j,--workers", f.workers, "worker threads, 0 = all cores");
  cmd->add_option("--samples", f.samples, "trajectory samples on [0, t_end]");
  cmd->add_option("--grid-points", f.grid_points, "coarse grid for the t_opt search");
  cmd->add_flag("--stdout", f.to_stdout, "write results to stdout");
  cmd->add_flag("-q,--quiet", f.quiet, "suppress progress on stderr");
}

// defaults < config file < environment < flags
Context resolve(const Flags& f) {
  Context ctx;
  RunConfig& cfg = ctx.cfg;
  if (!f.config_path.empty()) load_config_file(cfg, f.config_path);
  apply_environment(cfg);
  auto mark = [&](const char* key) { cfg.explicit_keys.insert(key); };
  if (f.n_atoms) cfg.n_atoms = parse_int_list(*f.n_atoms, "n_atoms"), mark("n_atoms");
  if (f.chi) cfg.chi = parse_real_list(*f.chi, "chi"), mark("chi");
  if (f.theta) cfg.theta = parse_real_list(*f.theta, "theta"), mark("theta");
  if (f.eta) cfg.eta = parse_real_list(*f.eta, "eta"), mark("eta");
  if (f.order) cfg.order = *f.order, mark("order");
  if (f.gamma) cfg.gamma = *f.gamma, mark("gamma");
  if (f.t_end) {
    mark("t_end");
    if (*f.t_end == "auto") {
      cfg.t_end.reset();
    } else {
      const auto v = parse_real_list(*f.t_end, "t_end");
      if (v.size() != 1) throw ConfigError("t_end: expected a single value");
      cfg.t_end = v.front();
    }
  }
  if (f.trajectories) cfg.n_trajectories = *f.trajectories, mark("n_trajectories");
  if (f.seed) cfg.seed_base = *f.seed, mark("seed_base");
  if (f.output) cfg.output_path = *f.output, mark("output_path");
  if (f.format) cfg.output_format = *f.format, mark("output_format");
  if (f.workers) cfg.worker_count = *f.workers, mark("worker_count");
  if (f.samples) cfg.samples = *f.samples, mark("samples");
  if (f.grid_points) cfg.grid_points = *f.grid_points, mark("grid_points");
  validate(cfg);
  ctx.to_stdout = f.to_stdout;
  ctx.quiet = f.quiet;
  return ctx;
}

template <typename T>
T single(const std::vector<T>& values, const char* key) {
  if (values.size() != 1) throw ConfigError(std::string(key) + ": this subcommand takes one value");
  return values.front();
}

std::uint64_t require_seed(const RunConfig& cfg) {
  if (!cfg.seed_base) throw ConfigError("seed_base: required for stochastic runs (--seed)");
  return *cfg.seed_base;
}

void warn_odd(const Context& ctx, const std::vector<int>& ns) {
  std::vector<int> odd;
  for (int n : ns) {
    if (n % 2 != 0) odd.push_back(n);
  }
  if (odd.empty() || ctx.quiet) return;
  std::string list;
  for (std::size_t i = 0; i < odd.size() && i < 5; ++i) list += (i ? "," : "") + std::to_string(odd[i]);
  if (odd.size() > 5) list += ",...";
  std::cerr << "catamp: warning: odd N (" << list
            << "): without a rotation the twist leaves the dark state unpopulated, so the"
               " variance may keep growing and t_opt may be boundary-flagged\n";
}

// ---- output ----------------------------------------------------------------

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("output: cannot write '" + path.string() + "'");
  out << text;
}

std::string render_json(const std::vector<Table>& tables) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& t : tables) doc[t.name] = to_json(t);
  return doc.dump(2) + "\n";
}

/// First table goes to `path`; the others to `<stem>_<name><ext>` beside it.
void emit(const Context& ctx, const std::vector<Table>& tables, const std::string& default_stem) {
  const bool json = ctx.cfg.output_format == "json";
  if (ctx.to_stdout) {
    if (json) {
      std::cout << render_json(tables);
    } else {
      for (std::size_t i = 0; i < tables.size(); ++i) {
        if (i) std::cout << '\n';
        std::cout << to_csv(tables[i]);
      }
    }
    std::cout.flush();
    return;
  }
  const std::string ext = json ? ".json" : ".csv";
  const fs::path path = ctx.cfg.output_path.empty() ? fs::path(default_stem + ext)
                                                     : fs::path(ctx.cfg.output_path);
  if (json) {
    write_file(path, render_json(tables));
    ctx.note("wrote " + path.string());
    return;
  }
  for (std::size_t i = 0; i < tables.size(); ++i) {
    fs::path target = path;
    if (i) {
      target = path.parent_path() /
               (path.stem().string() + "_" + tables[i].name + path.extension().string());
    }
    write_file(target, to_csv(tables[i]));
    ctx.note("wrote " + target.string());
  }
}

/// Figure mode: one file per table inside the output directory.
void emit_figure(const Context& ctx, const std::string& figure, const std::vector<Table>& tables) {
  if (ctx.to_stdout) {
    emit(ctx, tables, figure);
    return;
  }
  const bool json = ctx.cfg.output_format == "json";
  const fs::path dir = ctx.cfg.output_path.empty() ? fs::path("figures") : fs::path(ctx.cfg.output_path);
  for (const auto& t : tables) {
    const fs::path target = dir / (figure + "_" + t.name + (json ? ".json" : ".csv"));
    write_file(target, json ? to_json(t).dump(2) + "\n" : to_csv(t));
    ctx.note("wrote " + target.string());
  }
}

// ---- shared computations -----------------------------------------------------

Table trajectory_table(const catamp_trajectory* traj, const std::vector<Cell>& prefix,
                       const std::vector<std::string>& prefix_cols, Table table = {}) {
  if (table.columns.empty()) {
    table.columns = prefix_cols;
    for (const char* c : {"t", "var_sz", "var_sz_normalized", "survival", "cat_fidelity"}) {
      table.columns.emplace_back(c);
    }
  }
  const std::size_t n = catamp_trajectory_size(traj);
  for (std::size_t i = 0; i < n; ++i) {
    catamp_trajectory_point p{};
    CATAMP_CALL(catamp_trajectory_point_at(traj, i, &p));
    std::vector<Cell> row = prefix;
    for (double v : {p.t, p.var_sz, p.var_sz_normalized, p.survival, p.cat_fidelity}) row.emplace_back(v);
    table.add(std::move(row));
  }
  return table;
}

Trajectory compute_trajectory(const catamp_state* state, double gamma, double t_end, int samples) {
  catamp_trajectory* raw = nullptr;
  CATAMP_CALL(catamp_trajectory_compute(state, gamma, t_end, samples, &raw));
  return Trajectory(raw);
}

double default_horizon(const catamp_state* state, double gamma) {
  double t = 0;
  CATAMP_CALL(catamp_default_t_max(state, gamma, &t));
  return t;
}

catamp_optimum optimum_of(const catamp_state* state, double gamma, int grid_points) {
  catamp_optimum opt{};
  CATAMP_CALL(catamp_find_t_opt(state, gamma, default_horizon(state, gamma), grid_points, &opt));
  return opt;
}

struct SweepRequest {
  std::vector<int> n_atoms;
  std::vector<double> chi;
  std::vector<double> theta;
  std::optional<double> t_end;
};

Sweep run_sweep(const Context& ctx, const SweepRequest& req) {
  catamp_sweep_spec spec{};
  spec.n_atoms = req.n_atoms.data();
  spec.n_atoms_count = req.n_atoms.size();
  spec.chi = req.chi.data();
  spec.chi_count = req.chi.size();
  spec.theta = req.theta.data();
  spec.theta_count = req.theta.size();
  spec.order = ctx.order();
  spec.gamma = ctx.cfg.gamma;
  spec.fixed_time = req.t_end ? 1 : 0;
  spec.t_end = req.t_end.value_or(0.0);
  spec.grid_points = ctx.cfg.grid_points;
  spec.workers = ctx.workers();
  ctx.note("sweep over " + std::to_string(req.n_atoms.size() * req.chi.size() * req.theta.size()) +
           " points on " + std::to_string(spec.workers) + " worker(s)");
  catamp_sweep* raw = nullptr;
  CATAMP_CALL(catamp_sweep_run(&spec, &raw));
  return Sweep(raw);
}

std::vector<catamp_sweep_row> sweep_rows(const catamp_sweep* sweep) {
  std::vector<catamp_sweep_row> rows(catamp_sweep_size(sweep));
  for (std::size_t i = 0; i < rows.size(); ++i) CATAMP_CALL(catamp_sweep_row_at(sweep, i, &rows[i]));
  return rows;
}

Cell tc_cell(const catamp_sweep_row& r) { return r.has_t_c ? Cell(r.t_c) : Cell(Null{}); }

/// Full sweep schema; returns the number of failed rows via `failures`.
Table sweep_table(const catamp_sweep* sweep, std::size_t& failures) {
  Table t;
  t.name = "sweep";
  t.columns = {"N",    "chi",           "theta",     "t_opt", "boundary_flag",
               "peak_var", "peak_var_normalized", "survival_at_topt", "cat_fidelity_at_topt",
               "t_c",  "status"};
  failures = 0;
  for (const auto& r : sweep_rows(sweep)) {
    if (!r.ok) {
      ++failures;
      t.add({std::int64_t{r.n_atoms}, r.chi, r.theta, Null{}, Null{}, Null{}, Null{}, Null{}, Null{},
             Null{}, std::string(r.error)});
      continue;
    }
    t.add({std::int64_t{r.n_atoms}, r.chi, r.theta, r.t_opt, std::int64_t{r.boundary}, r.peak_var,
           r.peak_var_normalized, r.survival, r.cat_fidelity, tc_cell(r), std::string("ok")});
  }
  return t;
}

struct McwfTables {
  Table histogram;
  Table precision;
  std::size_t failures = 0;
  double p0 = 0;
};

McwfTables mcwf_tables(const Context& ctx, const catamp_state* state, double t_end,
                       std::size_t n_traj, std::uint64_t seed, const std::vector<double>& etas) {
  ctx.note("sampling " + std::to_string(n_traj) + " trajectories to t_end=" + format_double(t_end) +
           " on " + std::to_string(ctx.workers()) + " worker(s)");
  catamp_histogram* raw = nullptr;
  CATAMP_CALL(catamp_mcwf_histogram(state, ctx.cfg.gamma, t_end, n_traj, seed, ctx.workers(), &raw));
  Histogram hist(raw);
  McwfTables out;
  out.histogram.name = "histogram";
  out.histogram.columns = {"n", "p_n", "stderr"};
  const std::size_t bins = catamp_histogram_size(hist.get());
  for (std::size_t n = 0; n < bins; ++n) {
    double p = 0, se = 0;
    std::uint64_t count = 0;
    CATAMP_CALL(catamp_histogram_bin(hist.get(), n, &p, &se, &count));
    if (n == 0) out.p0 = p;
    out.histogram.add({static_cast<std::int64_t>(n), p, se});
  }
  out.precision.name = "precision";
  out.precision.columns = {"eta", "precision"};
  for (double eta : etas) {
    double prec = 0;
    const catamp_status st = catamp_detector_precision(hist.get(), eta, &prec);
    if (st == CATAMP_OK) {
      out.precision.add({eta, prec});
    } else {
      ++out.failures;
      ctx.note(std::string("precision at eta=") + format_double(eta) + " failed: " + catamp_last_error());
      out.precision.add({eta, Null{}});
    }
  }
  return out;
}

std::vector<int> default_n_grid() {
  std::vector<int> ns;
  for (int n = 10; n <= 200; n += 2) ns.push_back(n);
  return ns;
}

std::vector<double> default_chi_grid() {
  std::vector<double> chis;
  for (int k = 0; k <= 100; ++k) chis.push_back(k * std::numbers::pi / 200.0);
  return chis;
}

// ---- subcommands -------------------------------------------------------------

int cmd_noclick(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const int n = single(cfg.n_atoms, "n_atoms");
  const double chi = single(cfg.chi, "chi");
  const double theta = single(cfg.theta, "theta");
  warn_odd(ctx, {n});
  auto ops = make_operators(n);
  auto state = prepare_state(ops.get(), chi, theta, ctx.order());
  const double t_end = cfg.t_end.value_or(default_horizon(state.get(), cfg.gamma));
  auto traj = compute_trajectory(state.get(), cfg.gamma, t_end, cfg.samples);
  catamp_optimum opt{};
  CATAMP_CALL(catamp_trajectory_optimum(traj.get(), &opt));
  ctx.note("t_opt=" + format_double(opt.t_opt) + " peak_var=" + format_double(opt.peak_var) +
           (opt.at_boundary ? " (boundary)" : ""));
  Table t = trajectory_table(traj.get(), {}, {});
  t.name = "noclick";
  emit(ctx, {t}, "noclick");
  return kExitOk;
}

int cmd_sweep(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  warn_odd(ctx, cfg.n_atoms);
  auto sweep = run_sweep(ctx, {cfg.n_atoms, cfg.chi, cfg.theta, cfg.t_end});
  std::size_t failures = 0;
  Table t = sweep_table(sweep.get(), failures);
  emit(ctx, {t}, "sweep");
  if (failures) {
    ctx.note(std::to_string(failures) + " grid point(s) failed; see the status column");
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_mcwf(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const int n = single(cfg.n_atoms, "n_atoms");
  const double chi = single(cfg.chi, "chi");
  const double theta = single(cfg.theta, "theta");
  const std::uint64_t seed = require_seed(cfg);
  warn_odd(ctx, {n});
  auto ops = make_operators(n);
  auto state = prepare_state(ops.get(), chi, theta, ctx.order());
  const double t_end = cfg.t_end.value_or(optimum_of(state.get(), cfg.gamma, cfg.grid_points).t_opt);
  if (!(t_end > 0)) throw ApiError(CATAMP_ERR_NUMERICAL, "t_end resolved to 0; pass --t-end");
  auto tables = mcwf_tables(ctx, state.get(), t_end, cfg.n_trajectories.value_or(kMcwfTrajectories),
                            seed, cfg.eta);
  double survival = 0;
  CATAMP_CALL(catamp_survival_probability(state.get(), cfg.gamma, t_end, &survival));
  ctx.note("p_0=" + format_double(tables.p0) + " survival=" + format_double(survival));
  emit(ctx, {tables.histogram, tables.precision}, "mcwf");
  return tables.failures ? kExitPartial : kExitOk;
}

int cmd_oracle_check(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  catamp_check_report* raw = nullptr;
  CATAMP_CALL(catamp_oracle_check_run(cfg.seed_base.value_or(kOracleSeed), ctx.workers(),
                                      cfg.n_trajectories.value_or(kOracleTrajectories), &raw));
  Report report(raw);
  Table t;
  t.name = "checks";
  t.columns = {"check", "passed", "deviation", "tolerance", "detail"};
  std::size_t failed = 0;
  for (std::size_t i = 0; i < catamp_check_report_size(report.get()); ++i) {
    catamp_check c{};
    CATAMP_CALL(catamp_check_report_at(report.get(), i, &c));
    if (!c.passed) ++failed;
    ctx.note(std::string(c.passed ? "PASS " : "FAIL ") + c.name + " deviation=" +
             format_double(c.deviation) + " tolerance=" + format_double(c.tolerance));
    t.add({std::string(c.name), std::int64_t{c.passed}, c.deviation, c.tolerance, std::string(c.detail)});
  }
  emit(ctx, {t}, "oracle_check");
  return failed ? kExitNumerical : kExitOk;
}

// ---- figures -----------------------------------------------------------------

int figure_fig2(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const std::uint64_t seed = require_seed(cfg);
  const int n = cfg.has("n_atoms") ? single(cfg.n_atoms, "n_atoms") : 100;
  const std::vector<double> chis = cfg.has("chi") ? cfg.chi : std::vector<double>{0.1, 0.2, 0.3};
  auto ops = make_operators(n);
  std::vector<State> states;
  double window = 0;
  for (double chi : chis) {
    states.push_back(prepare_state(ops.get(), chi, 0.0, ctx.order()));
    window = std::max(window, default_horizon(states.back().get(), cfg.gamma));
  }
  if (cfg.t_end) window = *cfg.t_end;

  Table noclick;
  noclick.name = "noclick";
  for (std::size_t i = 0; i < chis.size(); ++i) {
    auto traj = compute_trajectory(states[i].get(), cfg.gamma, window, cfg.samples);
    noclick = trajectory_table(traj.get(), {chis[i]}, {"chi"}, std::move(noclick));
  }

  // Individual trajectories at the middle twisting strength.
  const std::size_t mid = chis.size() / 2;
  std::vector<double> grid(static_cast<std::size_t>(cfg.samples));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid[k] = window * static_cast<double>(k) / static_cast<double>(grid.size() - 1);
  }
  Table mc;
  mc.name = "mcwf";
  mc.columns = {"trajectory", "chi", "t", "mean_sz", "var_sz", "n_jumps"};
  std::vector<double> mean(grid.size()), var(grid.size());
  std::vector<std::uint32_t> jumps(grid.size());
  for (int k = 0; k < kFig2Trajectories; ++k) {
    CATAMP_CALL(catamp_mcwf_sample_on_grid(states[mid].get(), cfg.gamma, grid.data(), grid.size(),
                                           catamp_trajectory_seed(seed, static_cast<std::uint64_t>(k)),
                                           mean.data(), var.data(), jumps.data()));
    for (std::size_t g = 0; g < grid.size(); ++g) {
      mc.add({std::int64_t{k}, chis[mid], grid[g], mean[g], var[g], std::int64_t{jumps[g]}});
    }
  }
  emit_figure(ctx, "fig2", {noclick, mc});
  return kExitOk;
}

int figure_fig3a(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  SweepRequest req{cfg.has("n_atoms") ? cfg.n_atoms : default_n_grid(),
                   cfg.has("chi") ? cfg.chi : std::vector<double>{0.1, 0.2}, {0.0}, std::nullopt};
  warn_odd(ctx, req.n_atoms);
  auto sweep = run_sweep(ctx, req);
  Table t;
  t.name = "tc";
  t.columns = {"N", "chi", "t_opt", "t_c"};
  std::size_t failures = 0;
  for (const auto& r : sweep_rows(sweep.get())) {
    if (!r.ok) {
      ++failures;
      t.add({std::int64_t{r.n_atoms}, r.chi, Null{}, Null{}});
      continue;
    }
    t.add({std::int64_t{r.n_atoms}, r.chi, r.t_opt, tc_cell(r)});
  }
  emit_figure(ctx, "fig3a", {t});
  return failures ? kExitPartial : kExitOk;
}

int figure_map(const Context& ctx, const std::string& name, std::optional<double> t_end) {
  const auto& cfg = ctx.cfg;
  SweepRequest req{cfg.has("n_atoms") ? cfg.n_atoms : default_n_grid(),
                   cfg.has("chi") ? cfg.chi : default_chi_grid(), cfg.theta, t_end};
  warn_odd(ctx, req.n_atoms);
  auto sweep = run_sweep(ctx, req);
  std::size_t failures = 0;
  Table t = sweep_table(sweep.get(), failures);
  t.name = "map";
  std::vector<Table> tables{t};

  if (name == "fig4") {
    // Cuts at N = 100 over a finer chi grid, with the variance of the seed state.
    std::vector<double> chis;
    for (int k = 0; k <= 400; ++k) chis.push_back(k * std::numbers::pi / 800.0);
    if (cfg.has("chi")) chis = cfg.chi;
    const int n_cut = 100;
    auto cut = run_sweep(ctx, {{n_cut}, chis, {0.0}, std::nullopt});
    auto ops = make_operators(n_cut);
    Table c;
    c.name = "cuts_N100";
    c.columns = {"chi", "initial_var_normalized", "peak_var_normalized", "survival_at_topt",
                 "cat_fidelity_at_topt", "t_opt"};
    const double scale = n_cut * n_cut / 4.0;
    for (const auto& r : sweep_rows(cut.get())) {
      if (!r.ok) {
        ++failures;
        c.add({r.chi, Null{}, Null{}, Null{}, Null{}, Null{}});
        continue;
      }
      auto seed_state = prepare_state(ops.get(), r.chi, 0.0, ctx.order());
      catamp_observables obs{};
      CATAMP_CALL(catamp_state_observables(seed_state.get(), &obs));
      c.add({r.chi, obs.var_sz / scale, r.peak_var_normalized, r.survival, r.cat_fidelity, r.t_opt});
    }
    tables.push_back(std::move(c));
  }
  emit_figure(ctx, name, tables);
  return failures ? kExitPartial : kExitOk;
}

int figure_s1(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const std::vector<int> ns = cfg.has("n_atoms") ? cfg.n_atoms : std::vector<int>{100, 101};
  const std::vector<double> thetas = cfg.has("theta") ? cfg.theta : std::vector<double>{0.0, 0.1};
  const double chi = cfg.has("chi") ? single(cfg.chi, "chi") : 0.2;
  const double window = cfg.t_end.value_or(kWindowS1);
  Table t;
  t.name = "trajectories";
  for (int n : ns) {
    auto ops = make_operators(n);
    for (double theta : thetas) {
      auto state = prepare_state(ops.get(), chi, theta, ctx.order());
      auto traj = compute_trajectory(state.get(), cfg.gamma, window, cfg.samples);
      t = trajectory_table(traj.get(), {std::int64_t{n}, theta}, {"N", "theta"}, std::move(t));
    }
  }
  emit_figure(ctx, "s1", {t});
  return kExitOk;
}

int figure_s3(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const std::uint64_t seed = require_seed(cfg);
  const int n = cfg.has("n_atoms") ? single(cfg.n_atoms, "n_atoms") : 100;
  const double chi = cfg.has("chi") ? single(cfg.chi, "chi") : 0.2;
  std::vector<double> etas;
  for (int k = 0; k <= 20; ++k) etas.push_back(k / 20.0);
  if (cfg.has("eta")) etas = cfg.eta;
  auto ops = make_operators(n);
  auto state = prepare_state(ops.get(), chi, 0.0, ctx.order());
  const double t_end = cfg.t_end.value_or(optimum_of(state.get(), cfg.gamma, cfg.grid_points).t_opt);
  auto tables = mcwf_tables(ctx, state.get(), t_end, cfg.n_trajectories.value_or(kMcwfTrajectories),
                            seed, etas);
  emit_figure(ctx, "s3", {tables.histogram, tables.precision});
  return tables.failures ? kExitPartial : kExitOk;
}

int cmd_figure(const Context& ctx, const std::string& name) {
  if (name == "fig2") return figure_fig2(ctx);
  if (name == "fig3a") return figure_fig3a(ctx);
  if (name == "fig3b" || name == "fig4") return figure_map(ctx, name, ctx.cfg.t_end);
  if (name == "s1") return figure_s1(ctx);
  if (name == "s2") return figure_map(ctx, "s2", ctx.cfg.t_end.value_or(kFixedTimeS2));
  if (name == "s3") return figure_s3(ctx);
  throw ConfigError("figure: unknown name '" + name + "' (fig2, fig3a, fig3b, fig4, s1, s2, s3)");
}

int exit_code_for(catamp_status status) {
  switch (status) {
    case CATAMP_ERR_INVALID_ARGUMENT:
    case CATAMP_ERR_SIZING:
    case CATAMP_ERR_OUT_OF_RANGE:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional entanglement amplification in superradiant decay"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(catamp_version()));

  Flags flags;
  std::string figure_name;
  auto* noclick = app.add_subcommand("noclick", "no-click trajectory of one prepared state");
  auto* sweep = app.add_subcommand("sweep", "t_opt, peak variance and survival over a parameter grid");
  auto* mcwf = app.add_subcommand("mcwf", "jump-number histogram and detector precision");
  auto* oracle = app.add_subcommand("oracle-check", "cross-check the solvers against reference models");
  auto* figure = app.add_subcommand("figure", "data behind a figure");
  for (auto* cmd : {noclick, sweep, mcwf, oracle, figure}) add_common(cmd, flags);
  figure->add_option("name", figure_name, "fig2 | fig3a | fig3b | fig4 | s1 | s2 | s3")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const Context ctx = resolve(flags);
    if (noclick->parsed()) return cmd_noclick(ctx);
    if (sweep->parsed()) return cmd_sweep(ctx);
    if (mcwf->parsed()) return cmd_mcwf(ctx);
    if (oracle->parsed()) return cmd_oracle_check(ctx);
    if (figure->parsed()) return cmd_figure(ctx, figure_name);
  } catch (const ConfigError& e) {
    std::cerr << "catamp: error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ApiError& e) {
    std::cerr << "catamp: error: " << e.what() << '\n';
    return exit_code_for(e.status());
  } catch (const std::exception& e) {
    std::cerr << "catamp: error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
