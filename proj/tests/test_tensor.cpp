#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qudit/tensor.hpp"

using namespace qudit;
using oracle::CMat;

namespace {

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937& rng) {
  return oracle::from_eigen(oracle::random_gaussian(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols), rng));
}

ComplexMatrix random_hermitian(std::size_t n, std::mt19937& rng) { return hermitian_part(random_matrix(n, n, rng)); }

}  // namespace

TEST_CASE("kron follows the standard Kronecker order") {
  std::mt19937 rng(1);
  const ComplexMatrix a = random_matrix(2, 3, rng);
  const ComplexMatrix b = random_matrix(3, 2, rng);
  const ComplexMatrix k = kron(a, b);
  CHECK(k.rows() == 6);
  CHECK(k.cols() == 6);
  CHECK(oracle::max_diff(k, oracle::kron(oracle::to_eigen(a), oracle::to_eigen(b))) < 1e-14);
}

TEST_CASE("partial trace agrees with the index-sum oracle") {
  std::mt19937 rng(2);
  const CMat rho = oracle::random_density(8, rng);
  const ComplexMatrix m = oracle::from_eigen(rho);
  for (const std::vector<int>& keep : std::vector<std::vector<int>>{{0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1, 2}}) {
    std::vector<std::size_t> k(keep.begin(), keep.end());
    const ComplexMatrix reduced = partial_trace_raw(m, {2, 2, 2}, k);
    CHECK(oracle::max_diff(reduced, oracle::partial_trace(rho, 2, 3, keep)) < 1e-12);
    CHECK(std::abs(reduced.trace() - Complex(1.0)) < 1e-10);
  }
}

TEST_CASE("partial trace of a Bell state over one system is half the identity") {
  const double h = 1.0 / std::sqrt(2.0);
  const ComplexMatrix bell = ComplexMatrix::column({h, 0.0, 0.0, h});
  const ComplexMatrix rho = bell * bell.adjoint();
  CHECK(max_abs_diff(partial_trace_raw(rho, {2, 2}, {1}), 0.5 * ComplexMatrix::identity(2)) < 1e-14);
  const ComplexMatrix scalar = partial_trace_raw(rho, {2, 2}, {});
  CHECK(scalar.rows() == 1);
  CHECK(std::abs(scalar(0, 0) - Complex(1.0)) < 1e-14);
}

TEST_CASE("permute_systems reorders tensor factors") {
  std::mt19937 rng(3);
  const ComplexMatrix a = random_matrix(2, 2, rng);
  const ComplexMatrix b = random_matrix(3, 3, rng);
  const ComplexMatrix ab = kron(a, b);
  CHECK(max_abs_diff(permute_systems(ab, {2, 3}, {1, 0}), kron(b, a)) < 1e-14);
  const ComplexMatrix u = random_matrix(2, 1, rng);
  const ComplexMatrix v = random_matrix(3, 1, rng);
  CHECK(max_abs_diff(permute_systems(kron(u, v), {2, 3}, {1, 0}), kron(v, u)) < 1e-14);
}

TEST_CASE("Hermitian eigensolver matches Eigen") {
  std::mt19937 rng(4);
  for (std::size_t n : {1u, 2u, 5u, 9u}) {
    const ComplexMatrix h = random_hermitian(n, rng);
    const EigenDecomposition e = hermitian_eig(h);
    const Eigen::VectorXd ref = oracle::eigenvalues(oracle::to_eigen(h));
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(e.eigenvalues[k] - ref(static_cast<Eigen::Index>(k))) < 1e-10);
    const ComplexMatrix v = e.eigenvectors;
    CHECK(max_abs_diff(v.adjoint() * v, ComplexMatrix::identity(n)) < 1e-10);
    std::vector<Complex> l(e.eigenvalues.begin(), e.eigenvalues.end());
    CHECK(max_abs_diff(v * ComplexMatrix::diagonal(l) * v.adjoint(), h) < 1e-10);
  }
}

TEST_CASE("matrix_function applies f to the spectrum") {
  std::mt19937 rng(5);
  const ComplexMatrix h = random_hermitian(4, rng);
  const ComplexMatrix sq = matrix_function(h, [](double x) { return x * x; });
  CHECK(max_abs_diff(sq, h * h) < 1e-10);
  CHECK_THROWS_AS(matrix_function(random_matrix(3, 3, rng), [](double x) { return x; }), NotHermitianError);
}

TEST_CASE("square root of NOT") {
  const ComplexMatrix x = {{0.0, 1.0}, {1.0, 0.0}};
  const Complex p(0.5, 0.5);
  const Complex q(0.5, -0.5);
  const ComplexMatrix expected = {{p, q}, {q, p}};
  CHECK(max_abs_diff(matrix_power(x, 0.5), expected) < 1e-12);
}

TEST_CASE("matrix powers add for unitaries") {
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const CMat w = oracle::random_unitary(4, rng);
    const ComplexMatrix m = oracle::from_eigen(w);
    const double p = u(rng);
    const double q = u(rng);
    CHECK(max_abs_diff(matrix_power(m, p) * matrix_power(m, q), matrix_power(m, p + q)) < 1e-9);
    CHECK(oracle::max_diff(matrix_power(m, p), oracle::matrix_power(w, p)) < 1e-9);
  }
}

TEST_CASE("integer powers accept non-normal matrices") {
  const ComplexMatrix n = {{0.0, 1.0}, {0.0, 0.0}};
  CHECK(max_abs_diff(matrix_power(n, 2.0), ComplexMatrix(2, 2)) < 1e-15);
  CHECK(max_abs_diff(matrix_power(n, 0.0), ComplexMatrix::identity(2)) < 1e-15);
  CHECK_THROWS_AS(matrix_power(n, 0.5), NotNormalError);
}

TEST_CASE("null space and singular values") {
  std::mt19937 rng(7);
  const ComplexMatrix a = random_matrix(5, 2, rng);
  const ComplexMatrix m = a * a.adjoint();  // rank 2
  const auto kernel = null_space(m);
  CHECK(kernel.size() == 3);
  for (const auto& v : kernel) CHECK((m * v).max_abs() < 1e-8);
  const ComplexMatrix g = random_matrix(4, 3, rng);
  const auto s = singular_values(g);
  Eigen::JacobiSVD<CMat> svd(oracle::to_eigen(g));
  REQUIRE(s.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(s[k] - svd.singularValues()(static_cast<Eigen::Index>(k))) < 1e-10);
}

TEST_CASE("shape errors") {
  CHECK_THROWS_AS(ComplexMatrix(2, 2) * ComplexMatrix(3, 1), DimensionError);
  CHECK_THROWS_AS(partial_trace_raw(ComplexMatrix::identity(4), {2, 3}, {0}), DimensionError);
  CHECK_THROWS_AS(partial_trace_raw(ComplexMatrix::identity(4), {2, 2}, {2}), IndexError);
}
