#include <doctest.h>

#include <cmath>
#include <random>

#include "catamp/error.hpp"
#include "catamp/oat.hpp"
#include "catamp/oracle.hpp"
#include "support.hpp"

using namespace catamp;
using namespace catamp::oracle;
using test_support::random_state;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Numerical;
}

std::vector<double> linspace(double hi, int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k) g.push_back(hi * k / (n - 1));
  return g;
}

}  // namespace

TEST_CASE("expm of zero and of diagonal matrices") {
  CHECK((expm(Eigen::MatrixXcd::Zero(5, 5)) - Eigen::MatrixXcd::Identity(5, 5)).norm() < 1e-15);
  Eigen::VectorXcd d(4);
  d << Complex(0.5, 0), Complex(-3.0, 1.0), Complex(0, 7.0), Complex(-20.0, 0);
  const Eigen::MatrixXcd e = expm(d.asDiagonal().toDenseMatrix());
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(e(i, i) - std::exp(d[i])) < 1e-13 * std::max(1.0, std::abs(std::exp(d[i]))));
  }
}

TEST_CASE("expm of a spin-1/2 rotation generator") {
  Eigen::MatrixXcd sx(2, 2);
  sx << 0, 0.5, 0.5, 0;
  const double theta = 2.3;
  const Eigen::MatrixXcd u = expm(Complex(0, -theta) * sx);
  CHECK(std::abs(u(0, 0) - std::cos(theta / 2)) < 1e-14);
  CHECK(std::abs(u(0, 1) - Complex(0, -std::sin(theta / 2))) < 1e-14);
}

TEST_CASE("expm of a nilpotent matrix truncates exactly") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
  a(0, 1) = 2.0;
  a(1, 2) = 3.0;
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(3, 3) + a + 0.5 * a * a;
  CHECK((expm(a) - expected).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("expm of a large Hermitian generator stays unitary") {
  const SpinOperators ops(30);
  const Eigen::MatrixXcd sx = ops.sx().cast<Complex>();
  const Eigen::MatrixXcd u = expm(Complex(0, -0.9) * sx * sx);
  CHECK((u * u.adjoint() - Eigen::MatrixXcd::Identity(31, 31)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("expm rejects bad input") {
  CHECK(code_of([] { expm(Eigen::MatrixXcd::Zero(2, 3)); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([] { expm(Eigen::MatrixXcd::Zero(kMaxExpmDim + 1, kMaxExpmDim + 1)); }) ==
        ErrorCode::Sizing);
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
  bad(0, 0) = std::nan("");
  CHECK(code_of([&] { expm(bad); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { expm_apply(Eigen::MatrixXcd::Zero(3, 3), Vector::Zero(2), 1.0); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("single-atom master equation decays exponentially") {
  const auto grid = linspace(3.0, 13);
  const auto rho = lindblad_collective(DensityMatrix::pure(DickeState::top(1).amplitudes()), 0.8, grid);
  REQUIRE(rho.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(rho[i].rho(1, 1).real() == doctest::Approx(std::exp(-0.8 * grid[i])).epsilon(1e-7));
  }
}

TEST_CASE("single-atom coherence decays at half the population rate") {
  Vector psi(2);
  psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const auto grid = linspace(2.0, 5);
  const auto rho = lindblad_collective(DensityMatrix::pure(psi), 1.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(rho[i].rho(0, 1) - 0.5 * std::exp(-0.5 * grid[i])) < 1e-7);
  }
}

TEST_CASE("dark state is stationary under collective decay") {
  const auto grid = linspace(5.0, 6);
  const auto rho = lindblad_collective(DensityMatrix::pure(DickeState::basis(6, 0).amplitudes()), 1.0, grid);
  for (const auto& r : rho) CHECK(std::abs(r.rho(0, 0).real() - 1.0) < 1e-14);
}

TEST_CASE("master equation keeps trace, hermiticity and positivity") {
  std::mt19937_64 rng(13);
  const auto psi = random_state(5, rng);
  const auto grid = linspace(1.0, 11);
  for (const auto& r : lindblad_collective(DensityMatrix::pure(psi.amplitudes()), 1.0, grid)) {
    CHECK(r.trace() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.hermiticity_error() < 1e-10);
    CHECK(r.min_eigenvalue() > -1e-9);
  }
}

TEST_CASE("fully inverted pair decays through the cascade") {
  // N = 2: p_top(t) = exp(-2t), p_mid(t) = 2t exp(-2t) with gamma = 1.
  const auto grid = linspace(2.0, 9);
  const auto rho = lindblad_collective(DensityMatrix::pure(DickeState::top(2).amplitudes()), 1.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    CHECK(rho[i].rho(2, 2).real() == doctest::Approx(std::exp(-2 * t)).epsilon(1e-7));
    CHECK(std::abs(rho[i].rho(1, 1).real() - 2 * t * std::exp(-2 * t)) < 1e-7);
  }
}

TEST_CASE("master equation inputs are validated") {
  const std::vector<double> grid{0.0, 1.0};
  CHECK(code_of([&] {
          lindblad_collective(DensityMatrix::pure(DickeState::top(kMaxLindbladAtoms + 1).amplitudes()),
                              1.0, grid);
        }) == ErrorCode::Sizing);
  const std::vector<double> bad{0.0, 2.0, 1.0};
  CHECK(code_of([&] { lindblad_collective(DensityMatrix::pure(DickeState::top(2).amplitudes()), 1.0, bad); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("uncoupled cavity leaves the atoms untouched") {
  const auto psi = DickeState::top(2);
  const auto grid = linspace(1.0, 5);
  const auto res = tavis_cummings_lindblad({2, 0.0, 10.0, 0.0, 2}, psi, grid);
  for (const auto& pops : res.atomic_populations) {
    CHECK(pops[2] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("bad cavity reproduces collective decay for a pair") {
  const int n = 2;
  const double gamma = 1.0, ratio = 10.0;
  const double kappa = ratio * ratio * n * gamma;
  const double g = std::sqrt(gamma * kappa);
  const auto grid = linspace(2.0 / gamma, 11);
  const auto psi = DickeState::top(n);
  const auto tc = tavis_cummings_lindblad({n, g, kappa, 0.0, 3}, psi, grid);
  const auto eff = populations_of(lindblad_collective(DensityMatrix::pure(psi.amplitudes()), gamma, grid));
  CHECK(max_l1_distance(tc.atomic_populations, eff) < 0.05);
  CHECK(tc.cutoff_change < 1e-6);
}

TEST_CASE("strongly driven cavity is rejected at a small photon cutoff") {
  const auto psi = DickeState::top(4);
  const auto grid = linspace(1.0, 3);
  CHECK(code_of([&] { tavis_cummings_lindblad({4, 2.0, 0.2, 0.0, 2}, psi, grid); }) ==
        ErrorCode::Numerical);
}

TEST_CASE("cavity model inputs are validated") {
  const auto grid = linspace(1.0, 3);
  CHECK(code_of([&] { tavis_cummings_lindblad({2, 1.0, 10.0, 0.5, 3}, DickeState::top(2), grid); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { tavis_cummings_lindblad({2, 1.0, 0.0, 0.0, 3}, DickeState::top(2), grid); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([&] { tavis_cummings_lindblad({3, 1.0, 10.0, 0.0, 3}, DickeState::top(2), grid); }) ==
        ErrorCode::DimensionMismatch);
  CHECK(code_of([&] { tavis_cummings_lindblad({63, 1.0, 10.0, 0.0, 6}, DickeState::top(63), grid); }) ==
        ErrorCode::Sizing);
}

TEST_CASE("population helpers") {
  const std::vector<std::vector<double>> a{{0.5, 0.5}, {1.0, 0.0}};
  const std::vector<std::vector<double>> b{{0.4, 0.6}, {0.7, 0.3}};
  CHECK(max_l1_distance(a, b) == doctest::Approx(0.6));
  CHECK_THROWS_AS(max_l1_distance(a, {{1.0, 0.0}}), Error);
}
