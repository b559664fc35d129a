#include "catamp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include "catamp/error.hpp"

namespace catamp::oracle {

namespace {

using Sparse = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "time grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || !std::isfinite(grid[i]) || (i > 0 && grid[i] < grid[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "time grid must be ascending and nonnegative");
    }
  }
}

double inf_norm(const Sparse& m) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
  for (int k = 0; k < m.outerSize(); ++k) {
    for (Sparse::InnerIterator it(m, k); it; ++it) rows[it.row()] += std::abs(it.value());
  }
  return rows.size() ? rows.maxCoeff() : 0.0;
}

// Master equation of the form
//   d rho/dt = -i (H rho - rho H^+) + jump rho jump^+,
// with H already carrying the anti-Hermitian part -i/2 jump^+ jump.
struct Liouvillian {
  Sparse h_eff;
  Sparse h_eff_adj;
  Sparse jump;
  Sparse jump_adj;

  // Acts on column-major vec(rho):  vec(A X B) = (B^T kron A) vec(X).
  Sparse superoperator() const {
    const Eigen::Index d = h_eff.rows();
    const Complex i_unit(0.0, 1.0);
    std::vector<Triplet> entries;
    auto kron = [&](const Sparse& left, const Sparse& right, Complex scale) {
      for (int lc = 0; lc < left.outerSize(); ++lc) {
        for (Sparse::InnerIterator l(left, lc); l; ++l) {
          for (int rc = 0; rc < right.outerSize(); ++rc) {
            for (Sparse::InnerIterator r(right, rc); r; ++r) {
              entries.emplace_back(l.row() * d + r.row(), l.col() * d + r.col(), scale * l.value() * r.value());
            }
          }
        }
      }
    };
    Sparse identity(d, d);
    identity.setIdentity();
    kron(identity, h_eff, -i_unit);
    kron(Sparse(h_eff_adj.transpose()), identity, i_unit);
    kron(Sparse(jump_adj.transpose()), jump, 1.0);
    Sparse out(d * d, d * d);
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
  }

  // Loose upper bound on the generator's spectral radius.
  double rate_bound() const {
    const double j = inf_norm(jump);
    return 2.0 * inf_norm(h_eff) + j * j + 1e-300;
  }
};

using RowSparse = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

// Entries of vec(rho) that can ever become nonzero: the initial support closed
// under the generator's sparsity graph. Everything else stays exactly zero.
struct ReachableBlock {
  std::vector<Eigen::Index> index;  // reduced -> full
  RowSparse generator;
};

ReachableBlock reachable_block(const Sparse& full, const Vector& v0) {
  const Eigen::Index n = full.rows();
  std::vector<Eigen::Index> reduced(static_cast<std::size_t>(n), -1);
  std::vector<Eigen::Index> order;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (v0[i] != Complex(0.0, 0.0)) reduced[static_cast<std::size_t>(i)] = 0, order.push_back(i);
  }
  for (std::size_t q = 0; q < order.size(); ++q) {
    for (Sparse::InnerIterator it(full, static_cast<int>(order[q])); it; ++it) {
      auto& r = reduced[static_cast<std::size_t>(it.row())];
      if (r < 0) r = 0, order.push_back(it.row());
    }
  }
  std::sort(order.begin(), order.end());
  for (std::size_t k = 0; k < order.size(); ++k) reduced[static_cast<std::size_t>(order[k])] = static_cast<Eigen::Index>(k);
  std::vector<Triplet> entries;
  for (int c = 0; c < full.outerSize(); ++c) {
    const auto rc = reduced[static_cast<std::size_t>(c)];
    if (rc < 0) continue;
    for (Sparse::InnerIterator it(full, c); it; ++it) {
      entries.emplace_back(reduced[static_cast<std::size_t>(it.row())], rc, it.value());
    }
  }
  const auto m = static_cast<Eigen::Index>(order.size());
  ReachableBlock block{std::move(order), RowSparse(m, m)};
  block.generator.setFromTriplets(entries.begin(), entries.end());
  return block;
}

std::vector<Eigen::MatrixXcd> rk4_run(const ReachableBlock& block, const Eigen::MatrixXcd& rho0,
                                      std::span<const double> grid, double dt_target, long refine) {
  const Eigen::Index d = rho0.rows();
  const auto m = static_cast<Eigen::Index>(block.index.size());
  const RowSparse& generator = block.generator;
  std::vector<Eigen::MatrixXcd> states;
  states.reserve(grid.size());
  Vector v(m);
  for (Eigen::Index k = 0; k < m; ++k) v[k] = rho0.data()[block.index[static_cast<std::size_t>(k)]];
  Vector k1(m), k2(m), k3(m), k4(m), tmp(m);
  double t = 0.0;
  for (double target : grid) {
    const double span = target - t;
    if (span > 0.0) {
      const auto steps = static_cast<long>(std::ceil(span / dt_target)) * refine;
      const double dt = span / static_cast<double>(steps);
      for (long s = 0; s < steps; ++s) {
        k1.noalias() = generator * v;
        tmp = v + 0.5 * dt * k1;
        k2.noalias() = generator * tmp;
        tmp = v + 0.5 * dt * k2;
        k3.noalias() = generator * tmp;
        tmp = v + dt * k3;
        k4.noalias() = generator * tmp;
        v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
    }
    t = target;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index k = 0; k < m; ++k) rho.data()[block.index[static_cast<std::size_t>(k)]] = v[k];
    states.push_back(std::move(rho));
  }
  return states;
}

std::vector<Eigen::MatrixXcd> rk4_converged(const Liouvillian& lv, const Eigen::MatrixXcd& rho0,
                                            std::span<const double> grid,
                                            const Rk4Options& options) {
  const ReachableBlock block =
      reachable_block(lv.superoperator(), Eigen::Map<const Vector>(rho0.data(), rho0.size()));
  // RK4 is stable for |lambda dt| < 2.78; the halving check guards accuracy.
  const double dt = 2.5 / lv.rate_bound();
  long refine = 1;
  auto previous = rk4_run(block, rho0, grid, dt, refine);
  for (int halving = 0; halving < options.max_halvings; ++halving) {
    refine *= 2;  // doubles the substeps on every interval, even short ones
    auto current = rk4_run(block, rho0, grid, dt, refine);
    double change = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Eigen::VectorXd diff = (current[k].diagonal() - previous[k].diagonal()).cwiseAbs();
      const double c = diff.size() ? diff.maxCoeff() : 0.0;
      change = std::isfinite(c) ? std::max(change, c) : INFINITY;
    }
    if (change < options.tolerance) return current;
    previous = std::move(current);
  }
  throw Error(ErrorCode::Numerical, "RK4 step halving did not converge");
}

Sparse to_sparse(const Eigen::MatrixXd& m) { return m.cast<Complex>().sparseView(); }

void check_atomic_state(int n_atoms, Eigen::Index dim) {
  if (n_atoms < 1 || n_atoms > kMaxLindbladAtoms) {
    throw Error(ErrorCode::Sizing, "Lindblad oracle limited to 1 <= N <= " +
                                       std::to_string(kMaxLindbladAtoms));
  }
  if (dim != n_atoms + 1) throw Error(ErrorCode::DimensionMismatch, "density matrix size");
}

}  // namespace

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const double norm2 = psi.squaredNorm();
  if (!(norm2 > 0.0)) throw Error(ErrorCode::DegenerateState, "state has zero norm");
  return DensityMatrix{psi * psi.adjoint() / norm2};
}

double DensityMatrix::min_eigenvalue() const {
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

std::vector<double> DensityMatrix::diagonal() const {
  std::vector<double> out(static_cast<std::size_t>(rho.rows()));
  for (Eigen::Index i = 0; i < rho.rows(); ++i) out[static_cast<std::size_t>(i)] = rho(i, i).real();
  return out;
}

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "expm needs a square matrix");
  if (a.rows() > kMaxExpmDim) throw Error(ErrorCode::Sizing, "expm dimension cap exceeded");
  if (!a.allFinite()) throw Error(ErrorCode::InvalidArgument, "expm input must be finite");
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  const Eigen::MatrixXcd scaled = a / std::ldexp(1.0, squarings);

  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  // ||scaled|| <= 1/4: 24 terms put the truncation far below 1e-16.
  for (int k = 1; k <= 24; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

Vector expm_apply(const Eigen::MatrixXcd& hamiltonian, const Vector& psi, double t) {
  if (hamiltonian.rows() != psi.size()) {
    throw Error(ErrorCode::DimensionMismatch, "hamiltonian and state sizes differ");
  }
  if (!std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "t must be finite");
  return expm(Complex(0.0, -t) * hamiltonian) * psi;
}

Eigen::MatrixXcd noclick_hamiltonian(const SpinOperators& ops, double gamma) {
  const Eigen::MatrixXd sps = ops.s_plus() * ops.s_minus();
  return Complex(0.0, -0.5 * gamma) * sps.cast<Complex>();
}

Eigen::VectorXd brute_force_decay_rates(const SpinOperators& ops, double gamma) {
  const Eigen::MatrixXd sps = 0.5 * gamma * (ops.s_plus() * ops.s_minus());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sps, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

std::vector<DensityMatrix> lindblad_collective(const DensityMatrix& rho0, double gamma,
                                               std::span<const double> grid,
                                               const Rk4Options& options) {
  const auto n_atoms = static_cast<int>(rho0.rho.rows()) - 1;
  check_atomic_state(n_atoms, rho0.rho.rows());
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must be nonnegative");
  }
  check_grid(grid);

  const SpinOperators ops(n_atoms);
  Liouvillian lv;
  lv.jump = to_sparse(std::sqrt(gamma) * ops.s_minus());
  lv.jump_adj = lv.jump.adjoint();
  lv.h_eff = Sparse(Complex(0.0, -0.5) * (lv.jump_adj * lv.jump));
  lv.h_eff_adj = lv.h_eff.adjoint();

  auto raw = rk4_converged(lv, rho0.rho, grid, options);
  std::vector<DensityMatrix> out;
  out.reserve(raw.size());
  for (auto& m : raw) out.push_back(DensityMatrix{std::move(m)});
  return out;
}

namespace {

std::vector<std::vector<double>> tc_run(const TcParams& p, const Vector& atomic0,
                                        std::span<const double> grid, const Rk4Options& options) {
  const Eigen::Index na = p.n_atoms + 1;
  const Eigen::Index nc = p.photon_cutoff + 1;
  const Eigen::Index dim = na * nc;
  auto index = [nc](Eigen::Index atom, Eigen::Index photon) { return atom * nc + photon; };

  const SpinOperators ops(p.n_atoms);
  std::vector<Triplet> h_entries;
  std::vector<Triplet> a_entries;
  for (Eigen::Index k = 0; k < na; ++k) {
    for (Eigen::Index n = 0; n < nc; ++n) {
      if (p.delta != 0.0) h_entries.emplace_back(index(k, n), index(k, n), -p.delta * ops.sz_diagonal()[k]);
      if (n > 0) a_entries.emplace_back(index(k, n - 1), index(k, n), std::sqrt(static_cast<double>(n)));
      // g a S_+ : |k, n> -> |k+1, n-1>, plus its adjoint.
      if (n > 0 && k + 1 < na) {
        const double amp = p.g * ops.s_plus()(k + 1, k) * std::sqrt(static_cast<double>(n));
        h_entries.emplace_back(index(k + 1, n - 1), index(k, n), amp);
        h_entries.emplace_back(index(k, n), index(k + 1, n - 1), amp);
      }
    }
  }
  Sparse hamiltonian(dim, dim);
  hamiltonian.setFromTriplets(h_entries.begin(), h_entries.end());
  Sparse annihilate(dim, dim);
  annihilate.setFromTriplets(a_entries.begin(), a_entries.end());

  Liouvillian lv;
  lv.jump = Sparse(std::sqrt(4.0 * p.kappa) * annihilate);
  lv.jump_adj = lv.jump.adjoint();
  lv.h_eff = Sparse(hamiltonian + Complex(0.0, -0.5) * (lv.jump_adj * lv.jump));
  lv.h_eff_adj = lv.h_eff.adjoint();

  Vector psi = Vector::Zero(dim);
  for (Eigen::Index k = 0; k < na; ++k) psi[index(k, 0)] = atomic0[k];
  psi /= psi.norm();
  const Eigen::MatrixXcd rho0 = psi * psi.adjoint();

  auto states = rk4_converged(lv, rho0, grid, options);
  std::vector<std::vector<double>> out;
  out.reserve(states.size());
  for (const auto& rho : states) {
    std::vector<double> pops(static_cast<std::size_t>(na), 0.0);
    for (Eigen::Index k = 0; k < na; ++k) {
      for (Eigen::Index n = 0; n < nc; ++n) pops[static_cast<std::size_t>(k)] += rho(index(k, n), index(k, n)).real();
    }
    out.push_back(std::move(pops));
  }
  return out;
}

}  // namespace

TcResult tavis_cummings_lindblad(const TcParams& params, const DickeState& atomic0,
                                 std::span<const double> grid, const Rk4Options& options) {
  if (params.n_atoms != atomic0.n_atoms()) {
    throw Error(ErrorCode::DimensionMismatch, "TC parameters and atomic state differ in N");
  }
  if (params.n_atoms < 1) throw Error(ErrorCode::Sizing, "atom number must be positive");
  if (!(params.kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be positive");
  if (!(params.g >= 0.0) || !std::isfinite(params.g)) {
    throw Error(ErrorCode::InvalidArgument, "g must be finite and nonnegative");
  }
  if (params.delta != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "only zero detuning is supported");
  }
  if (params.photon_cutoff < 2) throw Error(ErrorCode::InvalidArgument, "photon_cutoff must be >= 2");
  const auto dim = static_cast<Eigen::Index>(params.n_atoms + 1) * (params.photon_cutoff + 1);
  if (dim > kMaxTcDim) throw Error(ErrorCode::Sizing, "Tavis-Cummings dimension cap exceeded");
  check_grid(grid);

  TcResult result;
  result.atomic_populations = tc_run(params, atomic0.amplitudes(), grid, options);
  TcParams wider = params;
  wider.photon_cutoff += 1;
  const auto check = tc_run(wider, atomic0.amplitudes(), grid, options);
  for (std::size_t k = 0; k < check.size(); ++k) {
    for (std::size_t i = 0; i < check[k].size(); ++i) {
      result.cutoff_change =
          std::max(result.cutoff_change, std::abs(check[k][i] - result.atomic_populations[k][i]));
    }
  }
  if (!(result.cutoff_change < 1e-6)) {
    throw Error(ErrorCode::Numerical, "photon cutoff " + std::to_string(params.photon_cutoff) +
                                          " inadequate: populations moved by " +
                                          std::to_string(result.cutoff_change));
  }
  return result;
}

std::vector<std::vector<double>> populations_of(const std::vector<DensityMatrix>& states) {
  std::vector<std::vector<double>> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(s.diagonal());
  return out;
}

double max_l1_distance(const std::vector<std::vector<double>>& a,
                       const std::vector<std::vector<double>>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "population series differ in length");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].size() != b[k].size()) throw Error(ErrorCode::DimensionMismatch, "population vectors differ");
    double l1 = 0.0;
    for (std::size_t i = 0; i < a[k].size(); ++i) l1 += std::abs(a[k][i] - b[k][i]);
    worst = std::max(worst, l1);
  }
  return worst;
}

}  // namespace catamp::oracle
