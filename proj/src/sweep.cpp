#include "catamp/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "catamp/error.hpp"
#include "catamp/noclick.hpp"
#include "catamp/parallel.hpp"

namespace catamp {

SweepRow evaluate_point(const SpinOperators& ops, const PrepSpec& prep, double gamma,
                        std::optional<double> t_end, int grid_points) {
  const DickeState psi0 = prepare(ops, prep);
  const DecaySpectrum spectrum(prep.n_atoms, gamma);

  SweepRow row;
  row.n_atoms = prep.n_atoms;
  row.chi = prep.chi;
  row.theta = prep.theta;
  row.t_c = try_cat_time(psi0, spectrum);
  if (t_end) {
    row.t_opt = *t_end;
    row.boundary = false;
    row.peak_var = noclick_variance(psi0, spectrum, *t_end);
  } else {
    const auto opt = find_t_opt(psi0, spectrum, default_t_max(psi0, spectrum), grid_points);
    row.t_opt = opt.t_opt;
    row.boundary = opt.at_boundary;
    row.peak_var = opt.peak_var;
  }
  const double n = prep.n_atoms;
  row.peak_var_normalized = row.peak_var / (0.25 * n * n);
  row.survival = survival_probability(psi0, spectrum, row.t_opt);
  row.cat_fidelity = cat_fidelity(evolve_noclick(psi0, spectrum, row.t_opt));
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int workers) {
  if (spec.n_atoms.empty() || spec.chi.empty() || spec.theta.empty()) {
    throw Error(ErrorCode::InvalidArgument, "sweep ranges must be non-empty");
  }
  if (!(spec.gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  if (spec.t_end && !(*spec.t_end >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "t_end must be nonnegative");
  }
  if (spec.grid_points < 16) throw Error(ErrorCode::InvalidArgument, "grid_points must be >= 16");

  auto sorted_unique = [](auto values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
  };
  const auto ns = sorted_unique(spec.n_atoms);
  const auto chis = sorted_unique(spec.chi);
  const auto thetas = sorted_unique(spec.theta);

  // Operators are shared read-only across all points with the same N.
  std::vector<std::unique_ptr<SpinOperators>> ops(ns.size());
  std::vector<std::string> ops_error(ns.size());
  parallel_for(ns.size(), workers, [&](std::size_t i) {
    try {
      ops[i] = std::make_unique<SpinOperators>(ns[i]);
    } catch (const std::exception& e) {
      ops_error[i] = e.what();
    }
  });

  const std::size_t per_n = chis.size() * thetas.size();
  std::vector<SweepRow> rows(ns.size() * per_n);
  parallel_for(rows.size(), workers, [&](std::size_t idx) {
    const std::size_t in = idx / per_n;
    const std::size_t ic = (idx % per_n) / thetas.size();
    const std::size_t it = idx % thetas.size();
    PrepSpec prep{ns[in], chis[ic], thetas[it], spec.order};
    SweepRow& row = rows[idx];
    try {
      if (!ops[in]) throw Error(ErrorCode::Sizing, ops_error[in]);
      row = evaluate_point(*ops[in], prep, spec.gamma, spec.t_end, spec.grid_points);
    } catch (const std::exception& e) {
      row = SweepRow{};
      row.n_atoms = prep.n_atoms;
      row.chi = prep.chi;
      row.theta = prep.theta;
      row.error = e.what();
    }
  });
  return rows;
}

}  // namespace catamp
