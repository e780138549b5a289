#ifndef QUDIT_TENSOR_HPP
#define QUDIT_TENSOR_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <vector>

#include "qudit/errors.hpp"

namespace qudit {

using Complex = std::complex<double>;

// Dense row-major complex matrix. Column vectors are n x 1 matrices.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix column(std::vector<Complex> entries);
  static ComplexMatrix diagonal(const std::vector<Complex>& entries);
  // Computational basis ket |level> of a space of the given size.
  static ComplexMatrix basis(std::size_t size, std::size_t level);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool is_square() const { return rows_ == cols_; }
  bool is_vector() const { return cols_ == 1; }

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  Complex& operator[](std::size_t k) { return entries_[k]; }
  const Complex& operator[](std::size_t k) const { return entries_[k]; }
  const std::vector<Complex>& entries() const { return entries_; }
  std::vector<Complex>& entries() { return entries_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  Complex trace() const;
  // Largest entry modulus.
  double max_abs() const;
  // Frobenius norm.
  double norm() const;
  bool is_hermitian(double tol = 1e-10) const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

  friend bool operator==(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scalar, ComplexMatrix m);
ComplexMatrix operator*(ComplexMatrix m, Complex scalar);

// Largest entrywise modulus of a - b. Shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// Hermitian part (M + M^dagger) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Product of the dimensions, checked against overflow of the index space.
std::size_t space_size(const std::vector<std::size_t>& dims);

// Offsets in the full index space of every configuration of the listed
// subsystems, enumerated with the first listed subsystem most significant.
std::vector<std::size_t> subsystem_offsets(const std::vector<std::size_t>& dims,
                                           const std::vector<std::size_t>& systems);

// Reduces a square matrix over subsystems of the given dimensions to the
// subsystems listed in keep (returned in ascending order).
ComplexMatrix partial_trace_raw(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                const std::vector<std::size_t>& keep);

// Reorders the tensor factors of a column vector or square matrix so that
// output factor k is input factor perm[k].
ComplexMatrix permute_systems(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& perm);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // orthonormal columns
};

// Cyclic complex Jacobi eigensolver for Hermitian matrices.
EigenDecomposition hermitian_eig(const ComplexMatrix& m);

// V f(L) V^dagger for Hermitian m.
ComplexMatrix matrix_function(const ComplexMatrix& m, const std::function<double(double)>& f);

// Orthonormal basis (column vectors) of the numerical kernel of m, where the
// kernel holds right singular vectors with singular value below tol * sigma_max.
std::vector<ComplexMatrix> null_space(const ComplexMatrix& m, double tol = 1e-8);

// Singular values of m in descending order.
std::vector<double> singular_values(const ComplexMatrix& m);

// Principal power of a normal matrix. Non-negative integer powers use
// repeated multiplication and accept any square matrix.
ComplexMatrix matrix_power(const ComplexMatrix& m, double p);

}  // namespace qudit

#endif  // QUDIT_TENSOR_HPP
