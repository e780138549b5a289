#include "qudit/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qudit {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw DimensionError("entry count " + std::to_string(entries_.size()) + " does not match " +
                         std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ragged matrix literal");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::column(std::vector<Complex> entries) {
  const std::size_t n = entries.size();
  return ComplexMatrix(n, 1, std::move(entries));
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Complex>& entries) {
  ComplexMatrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

ComplexMatrix ComplexMatrix::basis(std::size_t size, std::size_t level) {
  if (level >= size) throw IndexError("basis level out of range");
  ComplexMatrix v(size, 1);
  v[level] = 1.0;
  return v;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix out(*this);
  for (auto& z : out.entries_) z = std::conj(z);
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw DimensionError("trace of a non-square matrix");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : entries_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::norm() const {
  double s = 0.0;
  for (const auto& z : entries_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix::is_hermitian(double tol) const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("shape mismatch in +");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += other.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionError("shape mismatch in -");
  for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= other.entries_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (auto& z : entries_) z *= scalar;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex scalar, ComplexMatrix m) { return m *= scalar; }
ComplexMatrix operator*(ComplexMatrix m, Complex scalar) { return m *= scalar; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("cannot multiply " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " by " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
  ComplexMatrix out(a.rows(), b.cols());
  const std::size_t n = b.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex* row = &out(i, 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0)) continue;
      const Complex* brow = &b(k, 0);
      for (std::size_t j = 0; j < n; ++j) row[j] += aik * brow[j];
    }
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionError("Hermitian part of a non-square matrix");
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

std::size_t space_size(const std::vector<std::size_t>& dims) {
  std::size_t n = 1;
  for (auto d : dims) {
    if (d == 0) throw DimensionError("zero subsystem dimension");
    if (n > std::numeric_limits<std::size_t>::max() / d) throw DimensionError("space too large");
    n *= d;
  }
  return n;
}

std::vector<std::size_t> subsystem_offsets(const std::vector<std::size_t>& dims,
                                           const std::vector<std::size_t>& systems) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  std::vector<std::size_t> offsets{0};
  for (auto s : systems) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * dims[s]);
    for (auto base : offsets)
      for (std::size_t level = 0; level < dims[s]; ++level) next.push_back(base + level * strides[s]);
    offsets = std::move(next);
  }
  return offsets;
}

namespace {

void check_systems(const std::vector<std::size_t>& systems, std::size_t count) {
  std::vector<bool> seen(count, false);
  for (auto s : systems) {
    if (s >= count) throw IndexError("system index " + std::to_string(s) + " out of range");
    if (seen[s]) throw IndexError("duplicate system index " + std::to_string(s));
    seen[s] = true;
  }
}

}  // namespace

ComplexMatrix partial_trace_raw(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                                const std::vector<std::size_t>& keep) {
  const std::size_t n = space_size(dims);
  if (!m.is_square() || m.rows() != n) {
    throw DimensionError("partial trace expects a square matrix of side " + std::to_string(n));
  }
  check_systems(keep, dims.size());
  std::vector<std::size_t> kept(keep);
  std::sort(kept.begin(), kept.end());
  std::vector<std::size_t> traced;
  for (std::size_t s = 0; s < dims.size(); ++s)
    if (!std::binary_search(kept.begin(), kept.end(), s)) traced.push_back(s);
  const auto koff = subsystem_offsets(dims, kept);
  const auto toff = subsystem_offsets(dims, traced);
  ComplexMatrix out(koff.size(), koff.size());
  for (std::size_t a = 0; a < koff.size(); ++a)
    for (std::size_t b = 0; b < koff.size(); ++b) {
      Complex sum = 0.0;
      for (auto t : toff) sum += m(koff[a] + t, koff[b] + t);
      out(a, b) = sum;
    }
  return out;
}

ComplexMatrix permute_systems(const ComplexMatrix& m, const std::vector<std::size_t>& dims,
                              const std::vector<std::size_t>& perm) {
  const std::size_t n = space_size(dims);
  if (perm.size() != dims.size()) throw IndexError("permutation length mismatch");
  check_systems(perm, dims.size());
  // Output index i (factor order perm) maps to input offsets of its digits.
  const auto map = subsystem_offsets(dims, perm);
  if (m.is_vector() && m.rows() == n) {
    ComplexMatrix out(n, 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = m[map[i]];
    return out;
  }
  if (!m.is_square() || m.rows() != n) throw DimensionError("permute_systems shape mismatch");
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = m(map[i], map[j]);
  return out;
}

namespace {

// Jacobi diagonalization of an exactly Hermitian matrix; returns unsorted
// eigenvalues and accumulates the eigenvectors into v.
std::vector<double> jacobi_hermitian(ComplexMatrix a, ComplexMatrix& v) {
  const std::size_t n = a.rows();
  v = ComplexMatrix::identity(n);
  double scale = 0.0;
  for (const auto& z : a.entries()) scale += std::norm(z);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off <= 1e-32 * scale || off < 1e-300) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex z = a(p, q);
        const double r = std::abs(z);
        if (r < 1e-300) continue;
        const Complex phase = z / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // Unitary acting on columns p and q: diag(1, conj(phase)) times a real rotation.
        const Complex u00 = c, u01 = s;
        const Complex u10 = -s * std::conj(phase), u11 = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * u00 + akq * u10;
          a(k, q) = akp * u01 + akq * u11;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(u00) * apk + std::conj(u10) * aqk;
          a(q, k) = std::conj(u01) * apk + std::conj(u11) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * u00 + vkq * u10;
          v(k, q) = vkp * u01 + vkq * u11;
        }
      }
    }
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i).real();
  return values;
}

EigenDecomposition sorted(const std::vector<double>& values, const ComplexMatrix& v) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return values[x] < values[y]; });
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = values[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

// One-sided Jacobi: orthogonalizes the columns of a, accumulating the right
// rotations into v. Column norms of the result are the singular values.
void hestenes(ComplexMatrix& a, ComplexMatrix& v) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  v = ComplexMatrix::identity(n);
  for (int sweep = 0; sweep < 80; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double alpha = 0.0, beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          alpha += std::norm(a(k, i));
          beta += std::norm(a(k, j));
          gamma += std::conj(a(k, i)) * a(k, j);
        }
        const double g = std::abs(gamma);
        if (g <= 1e-15 * std::sqrt(alpha * beta) || g < 1e-300) continue;
        rotated = true;
        const Complex phase = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const Complex ai = a(k, i), aj = a(k, j) * phase;
          a(k, i) = c * ai - s * aj;
          a(k, j) = s * ai + c * aj;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vi = v(k, i), vj = v(k, j) * phase;
          v(k, i) = c * vi - s * vj;
          v(k, j) = s * vi + c * vj;
        }
      }
    }
    if (!rotated) break;
  }
}

std::vector<double> column_norms(const ComplexMatrix& a) {
  std::vector<double> norms(a.cols(), 0.0);
  for (std::size_t k = 0; k < a.rows(); ++k)
    for (std::size_t j = 0; j < a.cols(); ++j) norms[j] += std::norm(a(k, j));
  for (auto& x : norms) x = std::sqrt(x);
  return norms;
}

}  // namespace

EigenDecomposition hermitian_eig(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionError("eigendecomposition of a non-square matrix");
  if (!m.is_hermitian(1e-10)) throw NotHermitianError("matrix is not Hermitian within 1e-10");
  ComplexMatrix v;
  const auto values = jacobi_hermitian(hermitian_part(m), v);
  return sorted(values, v);
}

ComplexMatrix matrix_function(const ComplexMatrix& m, const std::function<double(double)>& f) {
  const auto eig = hermitian_eig(m);
  const std::size_t n = m.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(eig.eigenvalues[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = fk * eig.eigenvectors(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(eig.eigenvectors(j, k));
    }
  }
  return out;
}

std::vector<ComplexMatrix> null_space(const ComplexMatrix& m, double tol) {
  ComplexMatrix a(m), v;
  hestenes(a, v);
  const auto sigma = column_norms(a);
  const double sigma_max = sigma.empty() ? 0.0 : *std::max_element(sigma.begin(), sigma.end());
  std::vector<ComplexMatrix> basis;
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    if (sigma_max == 0.0 || sigma[j] <= tol * sigma_max) {
      ComplexMatrix col(v.rows(), 1);
      for (std::size_t i = 0; i < v.rows(); ++i) col[i] = v(i, j);
      basis.push_back(std::move(col));
    }
  }
  return basis;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  ComplexMatrix a(m), v;
  hestenes(a, v);
  auto sigma = column_norms(a);
  std::sort(sigma.rbegin(), sigma.rend());
  return sigma;
}

namespace {

// Unitary eigenbasis of a normal matrix from the commuting Hermitian pair
// H1 = (M + M^dagger)/2 and H2 = (M - M^dagger)/(2i).
ComplexMatrix normal_eigenbasis(const ComplexMatrix& m) {
  const std::size_t n = m.rows();
  const ComplexMatrix md = m.adjoint();
  const ComplexMatrix h1 = 0.5 * (m + md);
  const ComplexMatrix h2 = Complex(0.0, -0.5) * (m - md);
  const double c1 = 0.5772156649015329;
  const double c2 = 1.4142135623730951;
  auto eig = hermitian_eig(hermitian_part(h1 + Complex(c1) * h2));
  ComplexMatrix v = eig.eigenvectors;
  const double scale = std::max(1.0, m.max_abs());
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && eig.eigenvalues[end] - eig.eigenvalues[end - 1] < 1e-8 * scale) ++end;
    if (end - start > 1) {
      // Separate accidental coincidences inside the cluster with a second mix.
      const std::size_t k = end - start;
      ComplexMatrix vc(n, k);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) vc(i, j) = v(i, start + j);
      const ComplexMatrix sub = vc.adjoint() * (h1 + Complex(c2) * h2) * vc;
      const auto inner = hermitian_eig(hermitian_part(sub));
      const ComplexMatrix rotated = vc * inner.eigenvectors;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) v(i, start + j) = rotated(i, j);
    }
    start = end;
  }
  return v;
}

Complex principal_power(Complex lambda, double p) {
  const double r = std::abs(lambda);
  if (r < 1e-300) return p == 0.0 ? Complex(1.0) : Complex(0.0);
  double theta = std::arg(lambda);
  if (theta < -M_PI + 1e-9) theta = M_PI;
  return std::polar(std::pow(r, p), p * theta);
}

}  // namespace

ComplexMatrix matrix_power(const ComplexMatrix& m, double p) {
  if (!m.is_square()) throw DimensionError("power of a non-square matrix");
  const std::size_t n = m.rows();
  if (p == 1.0) return m;
  if (p >= 0.0 && p == std::floor(p) && p <= 1024.0) {
    ComplexMatrix out = ComplexMatrix::identity(n);
    for (int k = 0; k < static_cast<int>(p); ++k) out = out * m;
    return out;
  }
  const ComplexMatrix md = m.adjoint();
  if (max_abs_diff(m * md, md * m) > 1e-9) throw NotNormalError("matrix is not normal");
  const ComplexMatrix v = normal_eigenbasis(m);
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex mv = 0.0;
      for (std::size_t j = 0; j < n; ++j) mv += m(i, j) * v(j, k);
      lambda += std::conj(v(i, k)) * mv;
    }
    const Complex lp = principal_power(lambda, p);
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = lp * v(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(v(j, k));
    }
  }
  return out;
}

}  // namespace qudit
