#include "qudit/states.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace qudit {

namespace {

constexpr double kOmit = 1e-12;

std::size_t power(int d, int n) {
  std::size_t p = 1;
  for (int k = 0; k < n; ++k) p *= static_cast<std::size_t>(d);
  return p;
}

// Number of systems of a space of the given size, or -1 if not a power of d.
int systems_of(std::size_t size, int d) {
  int n = 0;
  std::size_t p = 1;
  while (p < size) {
    p *= static_cast<std::size_t>(d);
    ++n;
  }
  return p == size ? n : -1;
}

std::vector<std::size_t> uniform_dims(int d, int n) {
  return std::vector<std::size_t>(static_cast<std::size_t>(n), static_cast<std::size_t>(d));
}

void snapshot(QuantumState& s) {
  s.initial = StateSnapshot{s.num_systems, s.form, s.kind, s.conjugated, s.payload};
}

std::vector<std::size_t> checked_targets(const std::vector<int>& targets, int n) {
  std::set<int> seen;
  std::vector<std::size_t> out;
  for (int t : targets) {
    if (t < 0 || t >= n) throw IndexError("system index " + std::to_string(t) + " out of range");
    if (!seen.insert(t).second) throw IndexError("duplicate system index " + std::to_string(t));
    out.push_back(static_cast<std::size_t>(t));
  }
  return out;
}

ComplexMatrix as_operator(const ComplexMatrix& op, std::size_t side) {
  if (op.is_vector() && op.rows() == side) return op * op.adjoint();
  if (op.is_square() && op.rows() == side) return op;
  throw DimensionError("operator shape does not match a space of size " + std::to_string(side));
}

double log_base(const QuantumState& s, LogBase base) {
  const double b = base.use_dim ? static_cast<double>(s.dim) : base.value;
  if (!(b > 0.0) || b == 1.0) throw DimensionError("invalid logarithm base");
  return std::log(b);
}

}  // namespace

ComplexMatrix QuantumState::ket() const {
  if (form != Form::vector) throw InvalidKindError("state is not a vector");
  return conjugated ? payload.conjugate() : payload;
}

ComplexMatrix QuantumState::density() const {
  if (form == Form::matrix) return payload;
  const ComplexMatrix k = ket();
  return k * k.adjoint();
}

QuantumState build_state(const StateSpec& spec, const BuildOptions& options) {
  if (options.dim < 2) throw DimensionError("dimension must be at least 2");
  if (options.form == Form::vector && options.kind == Kind::mixed) {
    throw InvalidKindError("a vector state cannot be mixed");
  }
  QuantumState s;
  s.dim = options.dim;
  s.form = options.form;
  s.kind = options.kind;
  s.label = options.label;
  if (const auto* kets = std::get_if<WeightedKets>(&spec)) {
    if (kets->empty()) throw DimensionError("state spec has no terms");
    const int n = static_cast<int>(kets->front().levels.size());
    if (n == 0) throw DimensionError("state spec term without levels");
    if (options.num_systems != 0 && options.num_systems != n) {
      throw DimensionError("state spec spans " + std::to_string(n) + " systems, expected " +
                           std::to_string(options.num_systems));
    }
    s.num_systems = n;
    const std::size_t size = power(s.dim, n);
    ComplexMatrix vec(size, 1);
    ComplexMatrix mixed(s.form == Form::matrix && s.kind == Kind::mixed ? size : 0,
                        s.form == Form::matrix && s.kind == Kind::mixed ? size : 0);
    for (const auto& term : *kets) {
      if (static_cast<int>(term.levels.size()) != n) throw DimensionError("inconsistent term lengths");
      std::size_t index = 0;
      for (int level : term.levels) {
        if (level < 0 || level >= s.dim) {
          throw LevelError("level " + std::to_string(level) + " outside 0.." + std::to_string(s.dim - 1));
        }
        index = index * static_cast<std::size_t>(s.dim) + static_cast<std::size_t>(level);
      }
      if (s.form == Form::matrix && s.kind == Kind::mixed) {
        if (std::abs(term.coefficient.imag()) > 1e-12) {
          throw InvalidKindError("mixed state weights must be real");
        }
        mixed(index, index) += term.coefficient.real();
      } else {
        vec[index] += term.coefficient;
      }
    }
    if (s.form == Form::vector) {
      s.payload = vec;
    } else if (s.kind == Kind::pure) {
      s.payload = vec * vec.adjoint();
    } else {
      s.payload = mixed;
    }
  } else {
    const auto& m = std::get<ComplexMatrix>(spec);
    const int n = systems_of(m.rows(), s.dim);
    if (n < 0 || m.rows() == 0) throw DimensionError("matrix side is not a power of the dimension");
    if (options.num_systems != 0 && options.num_systems != n) throw DimensionError("system count mismatch");
    s.num_systems = n;
    if (m.is_vector()) {
      s.payload = s.form == Form::vector ? m : m * m.adjoint();
    } else if (m.is_square()) {
      if (s.form == Form::vector) throw DimensionError("a square matrix cannot define a vector state");
      if (!m.is_hermitian(1e-9)) throw NotHermitianError("density matrix is not Hermitian");
      s.payload = m;
    } else {
      throw DimensionError("state matrix must be a column vector or square");
    }
  }
  if (options.norm) {
    if (*options.norm == 0.0) {
      s.payload *= 0.0;
    } else {
      s = normalize(s, *options.norm);
    }
  }
  if (options.conjugate) s = dagger(s);
  snapshot(s);
  return s;
}

QuantumState ket_state(const WeightedKets& kets, int dim, const std::string& label, std::optional<double> norm) {
  BuildOptions options;
  options.dim = dim;
  options.norm = norm;
  options.label = label;
  return build_state(kets, options);
}

QuantumState matrix_state(const ComplexMatrix& rho, int dim, Kind kind, const std::string& label) {
  BuildOptions options;
  options.dim = dim;
  options.form = Form::matrix;
  options.kind = kind;
  options.label = label;
  return build_state(rho, options);
}

QuantumState maximally_mixed(int dim, int num_systems) {
  const std::size_t size = power(dim, num_systems);
  QuantumState s = matrix_state((1.0 / static_cast<double>(size)) * ComplexMatrix::identity(size), dim);
  s.label = "I";
  return s;
}

QuantumState densify(const QuantumState& s) {
  if (s.form == Form::matrix) return s;
  QuantumState out = s;
  out.payload = s.density();
  out.form = Form::matrix;
  out.conjugated = false;
  return out;
}

QuantumState dagger(const QuantumState& s) {
  QuantumState out = s;
  if (s.form == Form::vector) {
    out.payload = s.payload.conjugate();
    out.conjugated = !s.conjugated;
  } else {
    out.payload = s.payload.adjoint();
  }
  return out;
}

QuantumState normalize(const QuantumState& s, double norm) {
  QuantumState out = s;
  if (s.form == Form::vector) {
    const double n2 = s.payload.norm() * s.payload.norm();
    if (n2 < 1e-300) throw ZeroNormError("cannot normalize a zero vector");
    out.payload *= std::sqrt(norm / n2);
  } else {
    const Complex tr = s.payload.trace();
    if (std::abs(tr) < 1e-300) throw ZeroNormError("cannot normalize a zero-trace matrix");
    out.payload *= norm / tr;
  }
  return out;
}

QuantumState coefficient(const QuantumState& s, Complex scalar) {
  QuantumState out = s;
  out.payload *= scalar;
  return out;
}

QuantumState partial_trace(const QuantumState& s, const std::vector<int>& targets, bool discard) {
  const auto chosen = checked_targets(targets, s.num_systems);
  std::vector<std::size_t> keep;
  for (int k = 0; k < s.num_systems; ++k) {
    const bool listed = std::find(chosen.begin(), chosen.end(), static_cast<std::size_t>(k)) != chosen.end();
    if (listed != discard) keep.push_back(static_cast<std::size_t>(k));
  }
  QuantumState out = densify(s);
  if (static_cast<int>(keep.size()) == s.num_systems) return out;
  out.payload = partial_trace_raw(out.payload, uniform_dims(s.dim, s.num_systems), keep);
  out.num_systems = static_cast<int>(keep.size());
  out.kind = Kind::mixed;
  return out;
}

QuantumState reset(const QuantumState& s) {
  QuantumState out = s;
  out.num_systems = s.initial.num_systems;
  out.form = s.initial.form;
  out.kind = s.initial.kind;
  out.conjugated = s.initial.conjugated;
  out.payload = s.initial.payload;
  return out;
}

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
  if (a.dim != b.dim) throw DimensionError("tensor product of states with different dimensions");
  QuantumState out;
  out.dim = a.dim;
  out.num_systems = a.num_systems + b.num_systems;
  if (a.form == Form::vector && b.form == Form::vector) {
    out.form = Form::vector;
    out.kind = Kind::pure;
    out.payload = kron(a.ket(), b.ket());
  } else {
    out.form = Form::matrix;
    out.kind = a.kind == Kind::pure && b.kind == Kind::pure ? Kind::pure : Kind::mixed;
    out.payload = kron(a.density(), b.density());
  }
  if (!a.label.empty() && !b.label.empty()) out.label = a.label + "⊗" + b.label;
  snapshot(out);
  return out;
}

namespace {

// State restricted to the measured systems (all systems when targets is empty).
QuantumState measured_part(const QuantumState& s, const std::vector<int>& targets) {
  if (targets.empty()) return s;
  checked_targets(targets, s.num_systems);
  if (static_cast<int>(targets.size()) == s.num_systems) return s;
  return partial_trace(s, targets, false);
}

}  // namespace

std::vector<double> measure_statistics(const QuantumState& s, const std::vector<ComplexMatrix>& operators,
                                       const std::vector<int>& targets, bool observable) {
  const QuantumState part = measured_part(s, targets);
  const ComplexMatrix rho = part.density();
  std::vector<double> out;
  for (const auto& raw : operators) {
    const ComplexMatrix op = as_operator(raw, rho.rows());
    const ComplexMatrix weight = observable ? op : op.adjoint() * op;
    out.push_back((weight * rho).trace().real());
  }
  return out;
}

QuantumState measure_state(const QuantumState& s, const std::vector<ComplexMatrix>& operators,
                           const std::vector<int>& targets, bool observable) {
  const QuantumState part = measured_part(s, targets);
  const std::size_t side = part.space();
  if (!observable && operators.size() == 1 && part.form == Form::vector) {
    const ComplexMatrix k = as_operator(operators.front(), side);
    const ComplexMatrix psi = k * part.ket();
    const double n2 = psi.norm() * psi.norm();
    if (n2 < 1e-300) throw ZeroNormError("measurement outcome has zero probability");
    QuantumState out = part;
    out.payload = (1.0 / std::sqrt(n2)) * psi;
    out.conjugated = false;
    return out;
  }
  const ComplexMatrix rho = part.density();
  ComplexMatrix acc(side, side);
  for (const auto& raw : operators) {
    const ComplexMatrix op = as_operator(raw, side);
    if (observable) {
      acc += (op * rho).trace() * op;
    } else {
      acc += op * rho * op.adjoint();
    }
  }
  QuantumState out = densify(part);
  out.payload = acc;
  out.kind = Kind::mixed;
  return out;
}

std::variant<std::vector<double>, QuantumState> measure(const QuantumState& s,
                                                        const std::vector<ComplexMatrix>& operators,
                                                        const std::vector<int>& targets, bool observable,
                                                        bool statistics) {
  if (statistics) return measure_statistics(s, operators, targets, observable);
  return measure_state(s, operators, targets, observable);
}

QuantumState postselect(const QuantumState& s, const std::vector<Postselection>& postselections) {
  struct Resolved {
    ComplexMatrix op;
    int start;
    int count;
  };
  std::vector<Resolved> items;
  std::vector<bool> used(static_cast<std::size_t>(s.num_systems), false);
  bool needs_matrix = s.form == Form::matrix;
  for (const auto& p : postselections) {
    const std::size_t side = p.op.rows();
    const int count = systems_of(side, s.dim);
    if (count <= 0 || !(p.op.is_vector() || p.op.is_square())) {
      throw DimensionError("postselection operator does not span whole systems");
    }
    if (p.start < 0 || p.start + count > s.num_systems) throw IndexError("postselection out of range");
    for (int k = p.start; k < p.start + count; ++k) {
      if (used[static_cast<std::size_t>(k)]) throw IndexError("overlapping postselections");
      used[static_cast<std::size_t>(k)] = true;
    }
    if (!p.op.is_vector()) needs_matrix = true;
    items.push_back({p.op, p.start, count});
  }
  std::sort(items.begin(), items.end(), [](const Resolved& a, const Resolved& b) { return a.start > b.start; });

  QuantumState out = needs_matrix ? densify(s) : s;
  const bool bra = out.form == Form::vector && out.conjugated;
  ComplexMatrix payload = out.form == Form::vector ? out.ket() : out.payload;
  int n = out.num_systems;
  for (const auto& item : items) {
    const auto dims = uniform_dims(s.dim, n);
    std::vector<std::size_t> span, rest;
    for (int k = 0; k < n; ++k) {
      if (k >= item.start && k < item.start + item.count) {
        span.push_back(static_cast<std::size_t>(k));
      } else {
        rest.push_back(static_cast<std::size_t>(k));
      }
    }
    const auto soff = subsystem_offsets(dims, span);
    const auto roff = subsystem_offsets(dims, rest);
    if (out.form == Form::vector) {
      ComplexMatrix next(roff.size(), 1);
      for (std::size_t r = 0; r < roff.size(); ++r) {
        Complex sum = 0.0;
        for (std::size_t t = 0; t < soff.size(); ++t) sum += std::conj(item.op[t]) * payload[roff[r] + soff[t]];
        next[r] = sum;
      }
      payload = next;
    } else {
      const ComplexMatrix omega = as_operator(item.op, soff.size());
      ComplexMatrix next(roff.size(), roff.size());
      for (std::size_t r = 0; r < roff.size(); ++r)
        for (std::size_t c = 0; c < roff.size(); ++c) {
          Complex sum = 0.0;
          for (std::size_t t = 0; t < soff.size(); ++t)
            for (std::size_t u = 0; u < soff.size(); ++u) {
              const Complex w = omega(t, u);
              if (w != Complex(0.0)) sum += w * payload(roff[r] + soff[u], roff[c] + soff[t]);
            }
          next(r, c) = sum;
        }
      payload = next;
    }
    n -= item.count;
  }
  out.payload = bra ? payload.conjugate() : payload;
  out.num_systems = n;
  return out;
}

Complex trace(const QuantumState& s) {
  if (s.form == Form::vector) {
    const double n = s.payload.norm();
    return n * n;
  }
  return s.payload.trace();
}

double purity(const QuantumState& s) {
  const ComplexMatrix rho = s.density();
  Complex sum = 0.0;
  for (std::size_t i = 0; i < rho.rows(); ++i)
    for (std::size_t j = 0; j < rho.cols(); ++j) sum += rho(i, j) * rho(j, i);
  return sum.real();
}

namespace {

void check_same_space(const QuantumState& s, const QuantumState& t) {
  if (s.dim != t.dim || s.num_systems != t.num_systems) {
    throw DimensionError("states live in different spaces");
  }
}

double clamp_sqrt(double x) { return x > 0.0 ? std::sqrt(x) : 0.0; }

}  // namespace

double distance(const QuantumState& s, const QuantumState& t) {
  check_same_space(s, t);
  const auto eig = hermitian_eig(hermitian_part(s.density() - t.density()));
  double sum = 0.0;
  for (double x : eig.eigenvalues) sum += std::abs(x);
  return 0.5 * sum;
}

double fidelity(const QuantumState& s, const QuantumState& t) {
  check_same_space(s, t);
  const ComplexMatrix root = matrix_function(hermitian_part(s.density()), clamp_sqrt);
  const ComplexMatrix inner = hermitian_part(root * t.density() * root);
  const auto eig = hermitian_eig(inner);
  double largest = 0.0;
  for (double x : eig.eigenvalues) largest = std::max(largest, std::abs(x));
  // Eigenvalues at round-off level are dropped before taking square roots.
  const double cutoff = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(inner.rows()) * std::max(1.0, largest);
  double sum = 0.0;
  for (double x : eig.eigenvalues)
    if (x > cutoff) sum += std::sqrt(x);
  return sum * sum;
}

double entropy(const QuantumState& s, const std::optional<QuantumState>& t, LogBase base) {
  const double lb = log_base(s, base);
  const ComplexMatrix rho = hermitian_part(s.density());
  const auto eig = hermitian_eig(rho);
  double self = 0.0;  // tr[rho log rho]
  for (double x : eig.eigenvalues)
    if (x > 0.0) self += x * std::log(x);
  if (!t) return -self / lb;
  check_same_space(s, *t);
  const auto teig = hermitian_eig(hermitian_part(t->density()));
  double cross = 0.0;  // tr[rho log tau]
  for (std::size_t k = 0; k < teig.eigenvalues.size(); ++k) {
    Complex weight = 0.0;
    for (std::size_t i = 0; i < rho.rows(); ++i)
      for (std::size_t j = 0; j < rho.cols(); ++j)
        weight += std::conj(teig.eigenvectors(i, k)) * rho(i, j) * teig.eigenvectors(j, k);
    const double w = weight.real();
    const double mu = teig.eigenvalues[k];
    if (mu < 1e-12) {
      if (w > 1e-12) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += w * std::log(mu);
  }
  return (self - cross) / lb;
}

double mutual(const QuantumState& s, const std::vector<int>& systems_a, const std::vector<int>& systems_b,
              LogBase base) {
  if (systems_a.empty() || systems_b.empty()) throw IndexError("mutual information needs two subsystems");
  checked_targets(systems_a, s.num_systems);
  checked_targets(systems_b, s.num_systems);
  for (int a : systems_a)
    if (std::find(systems_b.begin(), systems_b.end(), a) != systems_b.end()) {
      throw OverlapError("subsystems overlap at index " + std::to_string(a));
    }
  std::vector<int> both(systems_a);
  both.insert(both.end(), systems_b.begin(), systems_b.end());
  const double sa = entropy(partial_trace(s, systems_a, false), std::nullopt, base.use_dim ? LogBase::of(s.dim) : base);
  const double sb = entropy(partial_trace(s, systems_b, false), std::nullopt, base.use_dim ? LogBase::of(s.dim) : base);
  const double sab = entropy(partial_trace(s, both, false), std::nullopt, base.use_dim ? LogBase::of(s.dim) : base);
  return sa + sb - sab;
}

std::string format_coefficient(Complex c) {
  const double re = std::abs(c.real()) < kOmit ? 0.0 : c.real();
  const double im = std::abs(c.imag()) < kOmit ? 0.0 : c.imag();
  if (im == 0.0) return fmt::format("{:.6g}", re);
  if (re == 0.0) return fmt::format("{:.6g}i", im);
  return fmt::format("({:.6g}{}{:.6g}i)", re, im < 0 ? "-" : "+", std::abs(im));
}

namespace {

std::vector<int> digits_of(std::size_t index, int d, int n) {
  std::vector<int> digits(static_cast<std::size_t>(n));
  for (int k = n - 1; k >= 0; --k) {
    digits[static_cast<std::size_t>(k)] = static_cast<int>(index % static_cast<std::size_t>(d));
    index /= static_cast<std::size_t>(d);
  }
  return digits;
}

std::string join_levels(const std::vector<int>& digits, const std::string& delimiter) {
  std::string out;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (k) out += delimiter;
    out += std::to_string(digits[k]);
  }
  return out;
}

std::string ket_text(std::size_t index, const QuantumState& s, const BraketOptions& options) {
  const auto digits = digits_of(index, s.dim, s.num_systems);
  if (!options.product) return "|" + join_levels(digits, options.delimiter) + "⟩";
  std::string out;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (k) out += "⊗";
    out += "|" + std::to_string(digits[k]) + "⟩";
  }
  return out;
}

std::string bra_text(std::size_t index, const QuantumState& s, const BraketOptions& options) {
  const auto digits = digits_of(index, s.dim, s.num_systems);
  if (!options.product) return "⟨" + join_levels(digits, options.delimiter) + "|";
  std::string out;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (k) out += "⊗";
    out += "⟨" + std::to_string(digits[k]) + "|";
  }
  return out;
}

std::string outer_text(std::size_t i, std::size_t j, const QuantumState& s, const BraketOptions& options) {
  const auto di = digits_of(i, s.dim, s.num_systems);
  const auto dj = digits_of(j, s.dim, s.num_systems);
  if (!options.product) {
    return "|" + join_levels(di, options.delimiter) + "⟩⟨" + join_levels(dj, options.delimiter) + "|";
  }
  std::string out;
  for (std::size_t k = 0; k < di.size(); ++k) {
    if (k) out += "⊗";
    out += "|" + std::to_string(di[k]) + "⟩⟨" + std::to_string(dj[k]) + "|";
  }
  return out;
}

}  // namespace

std::string render_braket(const QuantumState& s, const BraketOptions& options) {
  std::string prefix;
  if (s.form == Form::vector) {
    const std::string label = s.label.empty() ? "ψ" : s.label;
    prefix = s.conjugated ? "⟨" + label + "| = " : "|" + label + "⟩ = ";
  } else if (s.kind == Kind::pure) {
    const std::string label = s.label.empty() ? "ψ" : s.label;
    prefix = "|" + label + "⟩⟨" + label + "| = ";
  } else {
    prefix = (s.label.empty() ? "ρ" : s.label) + " = ";
  }
  std::vector<std::pair<Complex, std::string>> terms;
  if (s.form == Form::vector) {
    for (std::size_t i = 0; i < s.payload.rows(); ++i) {
      const Complex c = s.payload[i];
      if (std::abs(c) < kOmit) continue;
      terms.emplace_back(c, s.num_systems == 0 ? "" : s.conjugated ? bra_text(i, s, options) : ket_text(i, s, options));
    }
  } else {
    for (std::size_t i = 0; i < s.payload.rows(); ++i)
      for (std::size_t j = 0; j < s.payload.cols(); ++j) {
        const Complex c = s.payload(i, j);
        if (std::abs(c) < kOmit) continue;
        terms.emplace_back(c, s.num_systems == 0 ? "" : outer_text(i, j, s, options));
      }
  }
  if (terms.empty()) return prefix + "0";
  std::string out = prefix;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    std::string coeff = format_coefficient(terms[k].first);
    if (k == 0) {
      out += coeff;
    } else if (coeff.front() == '-') {
      out += " - " + coeff.substr(1);
    } else {
      out += " + " + coeff;
    }
    out += terms[k].second;
  }
  return out;
}

}  // namespace qudit
