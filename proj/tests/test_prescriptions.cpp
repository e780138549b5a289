#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "qudit/prescriptions.hpp"

using namespace qudit;
using oracle::CMat;

namespace {

const Complex kI(0.0, 1.0);

QuantumState density(const ComplexMatrix& rho) { return matrix_state(rho, 2); }

double residual(const DctcSolutionFamily& f, const ComplexMatrix& tau) {
  return max_abs_diff(apply_map(f.map_matrix, tau), tau);
}

CMat choi(const ComplexMatrix& map, std::size_t d) {
  CMat out = CMat::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      ComplexMatrix e(d, d);
      e(a, b) = 1.0;
      const CMat image = oracle::to_eigen(apply_map(map, e));
      out.block(static_cast<Eigen::Index>(a * d), static_cast<Eigen::Index>(b * d), static_cast<Eigen::Index>(d),
                static_cast<Eigen::Index>(d)) = image;
    }
  }
  return out;
}

fixture::CtcCircuit random_ctc(std::mt19937& rng) {
  auto c = fixture::ctc(2, 3, {fixture::random_mixed(2, 2, rng)}, fixture::random_gates(2, 3, 4, rng), {0, 1}, {2});
  return c;
}

}  // namespace

TEST_CASE("Deutsch map agrees with the partial-trace oracle") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const CtcCircuit c = random_ctc(rng);
    const ComplexMatrix map = deutsch_map(c);
    const CMat u = oracle::to_eigen(full_matrix(total_gate(c.base)));
    const CMat rho = oracle::to_eigen(respecting_input(c).density());
    const CMat tau = oracle::random_density(2, rng);
    const CMat expected = oracle::deutsch_image(u, rho, tau, c.respecting, c.violating, 2);
    CHECK(oracle::max_diff(apply_map(map, oracle::from_eigen(tau)), expected) < 1e-11);
  }
}

TEST_CASE("Deutsch maps are completely positive") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const CMat j = choi(deutsch_map(random_ctc(rng)), 2);
    CHECK(oracle::eigenvalues(j).minCoeff() > -1e-10);
  }
}

TEST_CASE("fixed-point families satisfy their invariants") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const DctcSolutionFamily f = dctc_fixed_points(random_ctc(rng));
    CHECK(residual(f, f.tau_star) < 1e-8);
    CHECK(std::abs(f.tau_star.trace() - Complex(1.0)) < 1e-10);
    CHECK(oracle::eigenvalues(oracle::to_eigen(f.tau_star)).minCoeff() > -1e-9);
    for (const auto& a : f.directions) {
      CHECK(a.is_hermitian());
      CHECK(std::abs(a.trace()) < 1e-10);
      CHECK(residual(f, f.tau_star + 1e-3 * a) < 1e-8);
    }
  }
}

TEST_CASE("Cesaro-averaged iteration converges into the family") {
  std::mt19937 rng(44);
  for (int trial = 0; trial < 5; ++trial) {
    const CtcCircuit c = random_ctc(rng);
    const DctcSolutionFamily f = dctc_fixed_points(c);
    ComplexMatrix tau = 0.5 * ComplexMatrix::identity(2);
    ComplexMatrix sum(2, 2);
    const int steps = 200000;
    for (int k = 0; k < steps; ++k) {
      sum += tau;
      tau = apply_map(f.map_matrix, tau);
    }
    const ComplexMatrix mean = (1.0 / steps) * sum;
    CHECK(residual(f, mean) < 1e-6);
    ComplexMatrix projected = f.tau_star;
    const ComplexMatrix delta = mean - f.tau_star;
    for (const auto& a : f.directions) {
      const Complex w = (a.adjoint() * delta).trace() / (a.adjoint() * a).trace();
      projected += w * a;
    }
    CHECK(max_abs_diff(projected, mean) < 1e-6);
  }
}

TEST_CASE("identity interaction admits every violating state") {
  QuantumGate id;
  id.num_systems = 2;
  id.targets = {0, 1};
  id.core = ComplexMatrix::identity(4);
  const CtcCircuit c = fixture::ctc(2, 2, {ket_state({{1.0, {0}}})}, {id}, {0}, {1});
  CHECK(dctc_fixed_points(c).dimension() == 3);
  CHECK(max_abs_diff(pctc_state_violating(c).payload, 0.5 * ComplexMatrix::identity(2)) < 1e-14);
}

TEST_CASE("SWAP interaction returns the input under both prescriptions") {
  const ComplexMatrix rho = {{0.3, Complex(0.1, 0.2)}, {Complex(0.1, -0.2), 0.7}};
  const CtcCircuit c = fixture::ctc_swap(density(rho));
  CHECK(dctc_fixed_points(c).dimension() == 0);
  CHECK(max_abs_diff(dctc_state_respecting(c, {}).payload, rho) < 1e-10);
  CHECK(max_abs_diff(dctc_state_violating(c, {}).payload, rho) < 1e-10);
  CHECK(max_abs_diff(pctc_state_respecting(c).payload, rho) < 1e-12);
  CHECK(max_abs_diff(pctc_state_violating(c).payload, rho) < 1e-12);
}

TEST_CASE("CNOT family is one half identity plus g X") {
  const ComplexMatrix rho = {{0.3, Complex(0.1, 0.2)}, {Complex(0.1, -0.2), 0.7}};
  const CtcCircuit c = fixture::ctc_cnot(density(rho));
  const DctcSolutionFamily f = dctc_fixed_points(c);
  REQUIRE(f.dimension() == 1);
  for (double g : {0.0, 0.25, -0.25}) {
    const ComplexMatrix tau = {{0.5, g}, {g, 0.5}};
    const ComplexMatrix out = {{rho(0, 0), 2 * g * rho(0, 1)}, {2 * g * rho(1, 0), rho(1, 1)}};
    CHECK(max_abs_diff(dctc_state_violating(c, {g}).payload, tau) < 1e-10);
    CHECK(max_abs_diff(dctc_state_respecting(c, {g}).payload, out) < 1e-10);
  }
  CHECK(is_physical(f, {0.5}));
  CHECK_FALSE(is_physical(f, {0.6}));
  CHECK_THROWS_AS(dctc_state_respecting(c, {0.6}), UnphysicalWeightsError);
  CHECK_THROWS_AS(dctc_state_respecting(c, {}), Error);
}

TEST_CASE("grandfather paradox") {
  std::mt19937 rng(45);
  std::vector<ComplexMatrix> inputs = {{{0.5, 0.5}, {0.5, 0.5}}, oracle::from_eigen(oracle::random_density(2, rng))};
  for (const auto& rho : inputs) {
    const CtcCircuit c = fixture::grandfather(density(rho));
    const Complex s = rho(0, 1) + rho(1, 0);
    const ComplexMatrix rho_d = {{0.5, s * s / 2.0}, {s * s / 2.0, 0.5}};
    const ComplexMatrix tau = {{0.5, s / 2.0}, {s / 2.0, 0.5}};
    CHECK(dctc_fixed_points(c).dimension() == 0);
    CHECK(max_abs_diff(dctc_state_respecting(c, {}).payload, rho_d) < 1e-10);
    CHECK(max_abs_diff(dctc_state_violating(c, {}).payload, tau) < 1e-10);
    CHECK(max_abs_diff(pctc_state_respecting(c).payload, {{0.5, 0.5}, {0.5, 0.5}}) < 1e-10);
    CHECK(max_abs_diff(pctc_state_violating(c).payload, tau) < 1e-10);
  }
}

TEST_CASE("unproven theorem") {
  const CtcCircuit c = fixture::unproven();
  REQUIRE(dctc_fixed_points(c).dimension() == 1);
  for (double g : {0.0, 0.5, 1.0}) {
    const ComplexMatrix cr = ComplexMatrix::diagonal({g, 0.0, 0.0, 1.0 - g});
    CHECK(max_abs_diff(dctc_state_respecting(c, {g - 0.5}).payload, cr) < 1e-10);
    CHECK(max_abs_diff(dctc_state_violating(c, {g - 0.5}).payload, ComplexMatrix::diagonal({g, 1.0 - g})) < 1e-10);
  }
  const QuantumState psi = pctc_state_respecting(c);
  REQUIRE(psi.is_vector());
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(max_abs_diff(psi.payload, ComplexMatrix::column({h, 0.0, 0.0, h})) < 1e-12);
  CHECK(max_abs_diff(pctc_state_violating(c).payload, 0.5 * ComplexMatrix::identity(2)) < 1e-12);
}

TEST_CASE("billiard-ball paradox") {
  for (double t : {0.5, 1.0, 0.3}) {
    const CtcCircuit c = fixture::billiard(t);
    const Complex e = std::exp(kI * std::numbers::pi * t);
    const DctcSolutionFamily f = dctc_fixed_points(c);
    REQUIRE(f.dimension() == 1);
    for (double g : {0.0, 0.5, 1.0}) {
      const ComplexMatrix rho_d = {{0.0, 0.0, 0.0},
                                   {0.0, 0.5, -(g * e - g - e) / 2.0},
                                   {0.0, (g * e - g + 1.0) / e / 2.0, 0.5}};
      const ComplexMatrix tau_d = {{g, 0.0, 0.0},
                                   {0.0, 0.5 - g / 2, (1.0 - g) * e / 2.0},
                                   {0.0, (1.0 - g) / e / 2.0, 0.5 - g / 2}};
      CHECK(max_abs_diff(dctc_state_respecting(c, {g - 0.5}).payload, rho_d) < 1e-10);
      CHECK(max_abs_diff(dctc_state_violating(c, {g - 0.5}).payload, tau_d) < 1e-10);
    }
    const double n = std::sqrt(1.0 / (std::cos(std::numbers::pi * t) + 3.0));
    const ComplexMatrix psi = ComplexMatrix::column({0.0, std::sqrt(2.0) * n, std::sqrt(2.0) * (1.0 + 1.0 / e) * n / 2.0});
    CHECK(max_abs_diff(pctc_state_respecting(c).payload, psi) < 1e-10);
    const ComplexMatrix tau_p = {{1.0 / 3, 0.0, 0.0}, {0.0, 1.0 / 3, e / 3.0}, {0.0, 1.0 / e / 3.0, 1.0 / 3}};
    CHECK(max_abs_diff(pctc_state_violating(c).payload, tau_p) < 1e-10);
  }
}

TEST_CASE("partition validation") {
  const QuantumState zero = ket_state({{1.0, {0}}});
  CHECK_THROWS_AS(validate(fixture::ctc(2, 2, {zero}, {}, {0}, {})), GateSpecError);
  CHECK_THROWS_AS(validate(fixture::ctc(2, 2, {zero}, {}, {0}, {0, 1})), GateSpecError);
  CHECK_THROWS_AS(validate(fixture::ctc(2, 2, {zero, zero}, {}, {0}, {1})), GateSpecError);
}
