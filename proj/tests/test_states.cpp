#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qudit/states.hpp"

using namespace qudit;
using oracle::CMat;

namespace {

const double kH = 1.0 / std::sqrt(2.0);

QuantumState plus() { return ket_state({{kH, {0}}, {kH, {1}}}); }
QuantumState minus() { return ket_state({{kH, {0}}, {-kH, {1}}}); }

QuantumState diagonal(double p) {
  BuildOptions o;
  o.form = Form::matrix;
  o.kind = Kind::mixed;
  return build_state(WeightedKets{{p, {0}}, {1.0 - p, {1}}}, o);
}

QuantumState bell() { return ket_state({{1.0, {0, 0}}, {1.0, {1, 1}}}); }

QuantumState random_mixed(std::mt19937& rng, int n = 2) {
  return matrix_state(oracle::from_eigen(oracle::random_density(n, rng)), n);
}

}  // namespace

TEST_CASE("build_state covers the three weighted-ket cases") {
  const QuantumState v = ket_state({{1.0, {0}}, {1.0, {1}}});
  CHECK(v.form == Form::vector);
  CHECK(std::abs(v.payload[0] - Complex(kH)) < 1e-15);

  BuildOptions pure;
  pure.form = Form::matrix;
  const QuantumState p = build_state(WeightedKets{{1.0, {0}}, {1.0, {1}}}, pure);
  CHECK(std::abs(p.payload(0, 1) - Complex(1.0)) < 1e-15);

  const QuantumState m = diagonal(0.3);
  CHECK(max_abs_diff(m.payload, ComplexMatrix::diagonal({0.3, 0.7})) < 1e-15);
}

TEST_CASE("build_state rejects invalid specifications") {
  BuildOptions bad;
  bad.kind = Kind::mixed;
  CHECK_THROWS_AS(build_state(WeightedKets{{1.0, {0}}}, bad), InvalidKindError);
  CHECK_THROWS_AS(ket_state({{1.0, {2}}}), LevelError);
  CHECK_THROWS_AS(ket_state({{0.0, {0}}}), ZeroNormError);
}

TEST_CASE("norm option rescales the state") {
  BuildOptions o;
  o.norm = 2.0;
  const QuantumState s = build_state(WeightedKets{{1.0, {0}}, {1.0, {1}}}, o);
  CHECK(std::abs(s.payload[0] - Complex(1.0)) < 1e-14);
  const QuantumState n = normalize(diagonal(0.3), 3.0);
  CHECK(std::abs(trace(n) - Complex(3.0)) < 1e-14);
}

TEST_CASE("densify, dagger and coefficient") {
  const QuantumState d = densify(plus());
  CHECK(d.form == Form::matrix);
  CHECK(max_abs_diff(densify(d).payload, d.payload) == 0.0);
  const QuantumState ket = ket_state({{Complex(0.0, 1.0), {0}}});
  const QuantumState bra = dagger(ket);
  CHECK(bra.conjugated);
  CHECK(std::abs(bra.payload[0] - Complex(0.0, -1.0)) < 1e-15);
  CHECK(std::abs(bra.ket()[0] - Complex(0.0, 1.0)) < 1e-15);
  CHECK(std::abs(coefficient(plus(), 2.0).payload[1] - Complex(2.0 * kH)) < 1e-15);
}

TEST_CASE("partial trace of a Bell pair") {
  const QuantumState r = partial_trace(bell(), {0});
  CHECK(r.num_systems == 1);
  CHECK(max_abs_diff(r.payload, 0.5 * ComplexMatrix::identity(2)) < 1e-14);
  const QuantumState kept = partial_trace(bell(), {1}, false);
  CHECK(max_abs_diff(kept.payload, r.payload) < 1e-14);
}

TEST_CASE("tensor and reset") {
  const QuantumState t = tensor(plus(), minus());
  CHECK(t.num_systems == 2);
  CHECK(t.form == Form::vector);
  CHECK(std::abs(t.payload[1] - Complex(-0.5)) < 1e-15);
  QuantumState changed = coefficient(t, 3.0);
  changed = reset(changed);
  CHECK(max_abs_diff(changed.payload, t.payload) < 1e-15);
}

TEST_CASE("measurement statistics and post-measurement states") {
  const std::vector<ComplexMatrix> basis = {ComplexMatrix::basis(2, 0), ComplexMatrix::basis(2, 1)};
  const auto p = measure_statistics(diagonal(0.3), basis);
  CHECK(std::abs(p[0] - 0.3) < 1e-14);
  CHECK(std::abs(p[1] - 0.7) < 1e-14);
  const QuantumState post = measure_state(plus(), basis);
  CHECK(max_abs_diff(post.payload, 0.5 * ComplexMatrix::identity(2)) < 1e-14);
  const auto q = measure_statistics(bell(), basis, {0});
  CHECK(std::abs(q[0] - 0.5) < 1e-14);
}

TEST_CASE("postselection on a vector rule contracts the targeted systems") {
  const QuantumState s = tensor(ket_state({{0.6, {0}}, {0.8, {1}}}), bell());
  const QuantumState unnorm_bell = ket_state({{1.0, {0, 0}}, {1.0, {1, 1}}}, 2, "", 2.0);
  const QuantumState input = tensor(ket_state({{0.6, {0}}, {0.8, {1}}}), unnorm_bell);
  const QuantumState out = postselect(input, {{unnorm_bell.ket(), 0}});
  CHECK(out.num_systems == 1);
  CHECK(std::abs(out.payload[0] - Complex(0.6)) < 1e-14);
  CHECK(std::abs(out.payload[1] - Complex(0.8)) < 1e-14);
  CHECK(s.num_systems == 3);
}

TEST_CASE("vector and matrix postselection agree up to normalization") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const CMat psi = oracle::random_ket(8, rng);
    const CMat phi = oracle::random_ket(2, rng);
    const QuantumState s = build_state(oracle::from_eigen(psi), BuildOptions{Form::vector, Kind::pure, 2, 0, {}, false, ""});
    const ComplexMatrix ph = oracle::from_eigen(phi);
    const QuantumState a = densify(postselect(s, {{ph, 1}}));
    const QuantumState b = postselect(densify(s), {{ph * ph.adjoint(), 1}});
    CHECK(max_abs_diff(normalize(a).payload, normalize(b).payload) < 1e-10);
  }
}

TEST_CASE("purity of a diagonal qubit") {
  CHECK(std::abs(purity(diagonal(0.3)) - 0.58) < 1e-12);
}

TEST_CASE("trace distance") {
  CHECK(std::abs(distance(diagonal(0.3), diagonal(0.8)) - 0.5) < 1e-12);
  CHECK(std::abs(distance(plus(), minus()) - 1.0) < 1e-12);
}

TEST_CASE("fidelity") {
  const double p = 0.3;
  const double q = 0.8;
  const double expected = std::pow(std::sqrt(p * q) + std::sqrt((1 - p) * (1 - q)), 2);
  CHECK(std::abs(fidelity(diagonal(p), diagonal(q)) - expected) < 1e-12);
  CHECK(std::abs(fidelity(plus(), minus())) < 1e-12);
  CHECK(std::abs(fidelity(plus(), plus()) - 1.0) < 1e-12);
}

TEST_CASE("entropies") {
  CHECK(std::abs(entropy(diagonal(0.5)) - 1.0) < 1e-12);
  CHECK(std::abs(entropy(plus())) < 1e-12);
  CHECK(std::abs(entropy(diagonal(0.3), diagonal(0.3))) < 1e-12);
  CHECK(std::abs(mutual(bell(), {0}, {1}, LogBase::of(2.0)) - 2.0) < 1e-9);
}

TEST_CASE("quantities agree with the Eigen oracle on random states") {
  std::mt19937 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const QuantumState a = random_mixed(rng, 3);
    const QuantumState b = random_mixed(rng, 3);
    const CMat ea = oracle::to_eigen(a.payload);
    const CMat eb = oracle::to_eigen(b.payload);
    CHECK(std::abs(distance(a, b) - oracle::trace_distance(ea, eb)) < 1e-9);
    CHECK(std::abs(fidelity(a, b) - oracle::fidelity(ea, eb)) < 1e-9);
    CHECK(std::abs(entropy(a) - oracle::entropy(ea)) < 1e-9);
  }
}

TEST_CASE("Fuchs-van de Graaf bounds") {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const QuantumState a = random_mixed(rng);
    const QuantumState b = random_mixed(rng);
    const double f = fidelity(a, b);
    const double d = distance(a, b);
    CHECK(1.0 - f <= d + 1e-9);
    CHECK(d <= std::sqrt(std::max(0.0, 1.0 - f)) + 1e-9);
  }
}

TEST_CASE("braket rendering") {
  const QuantumState b = ket_state({{1.0, {0, 0}}, {1.0, {1, 1}}}, 2, "Φ+");
  CHECK(render_braket(b) == "|Φ+⟩ = 0.707107|0,0⟩ + 0.707107|1,1⟩");
  CHECK(render_braket(dagger(ket_state({{1.0, {1}}}, 2, "x"))) == "⟨x| = 1⟨1|");
  CHECK(render_braket(diagonal(0.25)) == "ρ = 0.25|0⟩⟨0| + 0.75|1⟩⟨1|");
  CHECK(render_braket(ket_state({{1.0, {0}}, {-1.0, {1}}}, 2, "m")) == "|m⟩ = 0.707107|0⟩ - 0.707107|1⟩");
  CHECK(format_coefficient(Complex(0.0, 0.5)) == "0.5i");
  CHECK(format_coefficient(Complex(0.1, -0.2)) == "(0.1-0.2i)");
  CHECK(format_coefficient(Complex(0.25, 0.0)) == "0.25");
}
