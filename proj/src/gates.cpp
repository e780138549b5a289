#include "qudit/gates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace qudit {

namespace {

std::size_t power_of(int d, std::size_t n) {
  std::size_t p = 1;
  for (std::size_t k = 0; k < n; ++k) p *= static_cast<std::size_t>(d);
  return p;
}

// Entry exp(2 pi i * numerator / denominator) with the exponent reduced first.
Complex root_of_unity(long long numerator, long long denominator) {
  numerator %= denominator;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(numerator) / static_cast<double>(denominator));
}

void check_indices(const std::vector<int>& indices, int n, const char* what) {
  std::set<int> seen;
  for (int i : indices) {
    if (i < 0 || i >= n) throw GateSpecError(std::string(what) + " index " + std::to_string(i) + " out of range");
    if (!seen.insert(i).second) throw GateSpecError(std::string("duplicate ") + what + " index " + std::to_string(i));
  }
}

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

ComplexMatrix kron_copies(const ComplexMatrix& m, std::size_t copies) {
  ComplexMatrix out = m;
  for (std::size_t k = 1; k < copies; ++k) out = kron(out, m);
  return out;
}

std::vector<std::size_t> as_sizes(const std::vector<int>& v) {
  return std::vector<std::size_t>(v.begin(), v.end());
}

}  // namespace

ComplexMatrix modified_core(const QuantumGate& g) {
  ComplexMatrix m = g.exponent == 1.0 ? g.core : matrix_power(g.core, g.exponent);
  if (g.coefficient != Complex(1.0)) m *= g.coefficient;
  if (g.conjugated) m = m.adjoint();
  return m;
}

void validate(const QuantumGate& g) {
  if (g.dim < 2) throw GateSpecError("dimension must be at least 2");
  if (g.num_systems < 1) throw GateSpecError("gate must span at least one system");
  if (g.targets.empty()) throw GateSpecError("gate has no targets");
  check_indices(g.targets, g.num_systems, "target");
  check_indices(g.controls, g.num_systems, "control");
  check_indices(g.anticontrols, g.num_systems, "anticontrol");
  for (std::size_t k = 1; k < g.targets.size(); ++k) {
    if (g.targets[k] != g.targets[k - 1] + 1) throw GateSpecError("targets must be ascending and consecutive");
  }
  for (int c : g.controls) {
    if (contains(g.targets, c) || contains(g.anticontrols, c)) {
      throw GateSpecError("conflicting node at system " + std::to_string(c));
    }
  }
  for (int a : g.anticontrols) {
    if (contains(g.targets, a)) throw GateSpecError("conflicting node at system " + std::to_string(a));
  }
  const std::size_t side = power_of(g.dim, g.targets.size());
  if (!g.core.is_square() || g.core.rows() != side) {
    throw GateSpecError("core matrix side must be " + std::to_string(side));
  }
}

void validate(const MeasurementGate& m) {
  if (m.dim < 2) throw GateSpecError("dimension must be at least 2");
  if (m.targets.empty()) throw GateSpecError("measurement has no targets");
  check_indices(m.targets, m.num_systems, "target");
  const std::size_t side = power_of(m.dim, m.targets.size());
  if (m.operators.empty()) throw GateSpecError("measurement has no operators");
  for (const auto& op : m.operators) {
    const bool ok = (op.is_vector() && op.rows() == side) || (op.is_square() && op.rows() == side);
    if (!ok) throw GateSpecError("measurement operator shape does not match its targets");
  }
}

ComplexMatrix full_matrix(const QuantumGate& g) {
  validate(g);
  const ComplexMatrix m = modified_core(g);
  const std::size_t d = static_cast<std::size_t>(g.dim);
  const std::vector<std::size_t> dims(static_cast<std::size_t>(g.num_systems), d);
  std::vector<std::size_t> rest;
  for (int k = 0; k < g.num_systems; ++k) {
    if (!contains(g.targets, k)) rest.push_back(static_cast<std::size_t>(k));
  }
  const auto toff = subsystem_offsets(dims, as_sizes(g.targets));
  const auto roff = subsystem_offsets(dims, rest);

  std::vector<ComplexMatrix> powers{ComplexMatrix::identity(m.rows()), m};
  auto power = [&](std::size_t e) -> const ComplexMatrix& {
    while (powers.size() <= e) powers.push_back(powers.back() * m);
    return powers[e];
  };

  ComplexMatrix full(space_size(dims), space_size(dims));
  for (std::size_t r = 0; r < roff.size(); ++r) {
    std::size_t e = 1;
    std::size_t code = r;
    for (std::size_t k = rest.size(); k-- > 0;) {
      const std::size_t level = code % d;
      code /= d;
      const int system = static_cast<int>(rest[k]);
      if (contains(g.controls, system)) e *= level;
      if (contains(g.anticontrols, system)) e *= d - 1 - level;
    }
    const ComplexMatrix& block = power(e);
    for (std::size_t a = 0; a < toff.size(); ++a)
      for (std::size_t b = 0; b < toff.size(); ++b) {
        full(roff[r] + toff[a], roff[r] + toff[b]) = block(a, b);
      }
  }
  return full;
}

std::vector<int> support(const QuantumGate& g) {
  std::set<int> s(g.targets.begin(), g.targets.end());
  s.insert(g.controls.begin(), g.controls.end());
  s.insert(g.anticontrols.begin(), g.anticontrols.end());
  return {s.begin(), s.end()};
}

ComplexMatrix pauli_matrix(int index) {
  const Complex i(0.0, 1.0);
  switch (index) {
    case 0: return ComplexMatrix::identity(2);
    case 1: return {{0.0, 1.0}, {1.0, 0.0}};
    case 2: return {{0.0, -i}, {i, 0.0}};
    case 3: return {{1.0, 0.0}, {0.0, -1.0}};
    default: throw CatalogError("Pauli index must be in 0..3");
  }
}

ComplexMatrix gell_mann_matrix(int index) {
  const Complex i(0.0, 1.0);
  ComplexMatrix m(3, 3);
  switch (index) {
    case 0: return ComplexMatrix::identity(3);
    case 1: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 2: m(0, 1) = -i; m(1, 0) = i; break;
    case 3: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
    case 4: m(0, 2) = 1.0; m(2, 0) = 1.0; break;
    case 5: m(0, 2) = -i; m(2, 0) = i; break;
    case 6: m(1, 2) = 1.0; m(2, 1) = 1.0; break;
    case 7: m(1, 2) = -i; m(2, 1) = i; break;
    case 8: {
      const double s = 1.0 / std::sqrt(3.0);
      m(0, 0) = s; m(1, 1) = s; m(2, 2) = -2.0 * s;
      break;
    }
    default: throw CatalogError("Gell-Mann index must be in 0..8");
  }
  return m;
}

ComplexMatrix hadamard_matrix(int dim) {
  const std::size_t d = static_cast<std::size_t>(dim);
  ComplexMatrix m(d, d);
  const double s = 1.0 / std::sqrt(static_cast<double>(dim));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) {
      m(j, k) = s * root_of_unity(static_cast<long long>(k * (d - j)), dim);
    }
  return m;
}

ComplexMatrix fourier_matrix(int dim) { return hadamard_matrix(dim); }

ComplexMatrix composite_fourier_matrix(int dim, int n, bool reverse) {
  if (n == 1) return fourier_matrix(dim);
  const std::size_t d = static_cast<std::size_t>(dim);
  const std::size_t size = power_of(dim, static_cast<std::size_t>(n));
  const double s = 1.0 / std::sqrt(static_cast<double>(size));
  ComplexMatrix m(size, size);
  // Output digit k_l carries phase exp(2 pi i j k_l / d^l), k_1 least significant.
  for (std::size_t row = 0; row < size; ++row) {
    std::vector<std::size_t> k;
    std::size_t code = row;
    for (int l = 0; l < n; ++l) {
      k.push_back(code % d);
      code /= d;
    }
    for (std::size_t j = 0; j < size; ++j) {
      long long numerator = 0;
      std::size_t scale = size;
      for (int l = 0; l < n; ++l) {
        scale /= d;  // d^(n - l - 1)
        numerator += static_cast<long long>((j * k[static_cast<std::size_t>(l)] * scale) % size);
      }
      m(row, j) = s * root_of_unity(numerator, static_cast<long long>(size));
    }
  }
  if (reverse) {
    const std::vector<std::size_t> dims(static_cast<std::size_t>(n), d);
    std::vector<std::size_t> perm(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) perm[static_cast<std::size_t>(l)] = static_cast<std::size_t>(n - 1 - l);
    m = permute_systems(m, dims, perm);
  }
  return m;
}

ComplexMatrix swap_matrix(int dim) {
  const std::size_t d = static_cast<std::size_t>(dim);
  ComplexMatrix m(d * d, d * d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k) m(j * d + k, k * d + j) = 1.0;
  return m;
}

std::string default_label(GateKind kind, const CatalogParams& params) {
  switch (kind) {
    case GateKind::not_gate: return "N";
    case GateKind::pauli: {
      static const char* names[] = {"I", "X", "Y", "Z"};
      return params.index >= 0 && params.index < 4 ? names[params.index] : "P";
    }
    case GateKind::gell_mann: return params.index == 0 ? "I" : "L" + std::to_string(params.index);
    case GateKind::hadamard: return "H";
    case GateKind::rotation: {
      static const char* names[] = {"Rx", "Ry", "Rz"};
      return params.axis >= 1 && params.axis <= 3 ? names[params.axis - 1] : "R";
    }
    case GateKind::phase: return "P";
    case GateKind::diagonal: return "D";
    case GateKind::summation: return "SUM";
    case GateKind::swap: return "SWAP";
    case GateKind::fourier: return "F";
    case GateKind::custom: return "U";
  }
  return "U";
}

QuantumGate catalog(GateKind kind, const CatalogParams& params) {
  const bool fixed2 = kind == GateKind::not_gate || kind == GateKind::pauli || kind == GateKind::rotation;
  const bool fixed3 = kind == GateKind::gell_mann;
  int dim = params.dim.value_or(fixed3 ? 3 : 2);
  if (fixed2 && dim != 2) throw CatalogError("gate kind has fixed dimension 2");
  if (fixed3 && dim != 3) throw CatalogError("Gell-Mann gates have fixed dimension 3");
  if (dim < 2) throw CatalogError("dimension must be at least 2");
  if (params.targets.empty()) throw CatalogError("gate has no targets");

  QuantumGate g;
  g.dim = dim;
  g.targets = params.targets;
  g.controls = params.controls;
  g.anticontrols = params.anticontrols;
  g.coefficient = params.coefficient;
  g.exponent = params.exponent;
  g.conjugated = params.conjugate;
  g.label = params.label.empty() ? default_label(kind, params) : params.label;
  int top = 0;
  for (const auto* v : {&g.targets, &g.controls, &g.anticontrols})
    for (int i : *v) top = std::max(top, i + 1);
  g.num_systems = params.num_systems == 0 ? top : params.num_systems;

  const std::size_t d = static_cast<std::size_t>(dim);
  const std::size_t n = g.targets.size();
  ComplexMatrix elementary;
  switch (kind) {
    case GateKind::not_gate: elementary = pauli_matrix(1); break;
    case GateKind::pauli: elementary = pauli_matrix(params.index); break;
    case GateKind::gell_mann: elementary = gell_mann_matrix(params.index); break;
    case GateKind::hadamard: elementary = hadamard_matrix(dim); break;
    case GateKind::rotation: {
      const double c = std::cos(params.angle / 2.0);
      const double s = std::sin(params.angle / 2.0);
      const Complex i(0.0, 1.0);
      switch (params.axis) {
        case 1: elementary = {{c, -i * s}, {-i * s, c}}; break;
        case 2: elementary = {{c, -s}, {s, c}}; break;
        case 3: elementary = ComplexMatrix::diagonal({std::polar(1.0, -params.angle / 2.0),
                                                      std::polar(1.0, params.angle / 2.0)});
          break;
        default: throw CatalogError("rotation axis must be 1, 2 or 3");
      }
      break;
    }
    case GateKind::phase: {
      std::vector<Complex> diag(d, 1.0);
      for (std::size_t k = 1; k < d; ++k) {
        diag[k] = params.phase ? diag[k - 1] * *params.phase : root_of_unity(static_cast<long long>(k), dim);
      }
      elementary = ComplexMatrix::diagonal(diag);
      break;
    }
    case GateKind::diagonal: {
      std::vector<Complex> diag(d, 1.0);
      for (const auto& [level, value] : params.entries) {
        if (level < 0 || level >= dim) throw CatalogError("diagonal entry level out of range");
        diag[static_cast<std::size_t>(level)] =
            params.exponentiation ? std::exp(Complex(0.0, 1.0) * value) : value;
      }
      elementary = ComplexMatrix::diagonal(diag);
      break;
    }
    case GateKind::summation: {
      const std::size_t shift = static_cast<std::size_t>(((params.shift % dim) + dim) % dim);
      elementary = ComplexMatrix(d, d);
      for (std::size_t k = 0; k < d; ++k) elementary((k + shift) % d, k) = 1.0;
      break;
    }
    case GateKind::swap:
      if (n != 2) throw CatalogError("SWAP requires exactly two targets");
      g.core = swap_matrix(dim);
      break;
    case GateKind::fourier:
      if (params.composite) {
        g.core = composite_fourier_matrix(dim, static_cast<int>(n), params.reverse);
      } else {
        elementary = fourier_matrix(dim);
      }
      break;
    case GateKind::custom: {
      const ComplexMatrix& m = params.matrix;
      if (!m.is_square() || m.empty()) throw CatalogError("custom gate matrix must be square");
      if (m.rows() == d) {
        elementary = m;
      } else if (m.rows() == power_of(dim, n)) {
        g.core = m;
      } else {
        throw CatalogError("custom gate matrix does not match its targets");
      }
      break;
    }
  }
  if (g.core.empty()) g.core = kron_copies(elementary, n);
  if (params.family) {
    g.family = *params.family;
  } else if (kind == GateKind::swap) {
    g.family = kFamilySwap;
  }
  try {
    validate(g);
  } catch (const GateSpecError& e) {
    throw CatalogError(e.what());
  }
  return g;
}

QuantumGate as_spanning(const QuantumGate& g) {
  QuantumGate out;
  out.dim = g.dim;
  out.num_systems = g.num_systems;
  out.targets.clear();
  for (int k = 0; k < g.num_systems; ++k) out.targets.push_back(k);
  out.core = full_matrix(g);
  out.label = g.label;
  out.family = g.family;
  return out;
}

namespace {

QuantumGate composed(const ComplexMatrix& core, int dim, int num_systems, std::vector<QuantumGate> parts,
                     const CompositionModifiers& modifiers) {
  QuantumGate out;
  out.dim = dim;
  out.num_systems = num_systems;
  out.targets.clear();
  for (int k = 0; k < num_systems; ++k) out.targets.push_back(k);
  out.core = core;
  out.coefficient = modifiers.coefficient;
  out.exponent = modifiers.exponent;
  out.conjugated = modifiers.conjugate;
  out.merged = modifiers.merge;
  if (modifiers.label.empty()) {
    for (const auto& p : parts) out.label += p.label;
  } else {
    out.label = modifiers.label;
  }
  out.parts = std::move(parts);
  return out;
}

}  // namespace

QuantumGate interleave(const std::vector<QuantumGate>& gates, const CompositionModifiers& modifiers) {
  if (gates.empty()) throw CompositionError("interleave needs at least one gate");
  const int dim = gates.front().dim;
  const int n = gates.front().num_systems;
  std::set<int> used;
  for (const auto& g : gates) {
    if (g.dim != dim || g.num_systems != n) throw CompositionError("interleaved gates must share one space");
    for (int s : support(g)) {
      if (!used.insert(s).second) throw CompositionError("interleaved gates overlap at system " + std::to_string(s));
    }
  }
  ComplexMatrix core = full_matrix(gates.front());
  for (std::size_t k = 1; k < gates.size(); ++k) core = full_matrix(gates[k]) * core;
  return composed(core, dim, n, gates, modifiers);
}

QuantumGate stack(const std::vector<QuantumGate>& gates, const CompositionModifiers& modifiers) {
  if (gates.empty()) throw CompositionError("stack needs at least one gate");
  const int dim = gates.front().dim;
  ComplexMatrix core;
  int n = 0;
  std::vector<QuantumGate> parts;
  for (const auto& g : gates) {
    if (g.dim != dim) throw CompositionError("stacked gates must share one dimension");
    const ComplexMatrix m = full_matrix(g);
    core = core.empty() ? m : kron(core, m);
    QuantumGate shifted = g;
    for (auto* v : {&shifted.targets, &shifted.controls, &shifted.anticontrols})
      for (int& i : *v) i += n;
    n += g.num_systems;
    parts.push_back(std::move(shifted));
  }
  for (auto& p : parts) p.num_systems = n;
  return composed(core, dim, n, parts, modifiers);
}

}  // namespace qudit
